from fractions import Fraction
import math

from hypothesis import given, strategies as st
import pytest

from qkloop.coeff_ring import (
    LambdaElem,
    RingConfig,
    RingError,
    adams,
    exp_filtered,
    filtration_degree,
    format_lambda,
    log_filtered,
)

from conftest import lambda_elems

CFG = RingConfig(truncation_degree=4)
Q, N1, N2, N3, N4 = (CFG.gen(n) for n in ("Q", "N1", "N2", "N3", "N4"))


def test_monomial_product():
    assert N1 * N1 == LambdaElem(CFG, {(0, 2, 0, 0, 0): 1})


def test_truncation_drops_high_degree():
    cfg = RingConfig(truncation_degree=1)
    assert cfg.gen("Q") * cfg.gen("N1") == cfg.zero()


def test_difference_of_squares():
    assert (1 + N1) * (1 - N1) == 1 - N1 * N1


def test_config_mismatch_rejected():
    other = RingConfig(truncation_degree=3)
    with pytest.raises(RingError):
        N1 + other.gen("N1")


def test_invalid_configs():
    with pytest.raises(RingError):
        RingConfig(truncation_degree=0)
    with pytest.raises(RingError):
        RingConfig(truncation_degree=3, weights=(("N1", 2),))
    with pytest.raises(RingError):
        CFG.gen("N9")


def test_generator_names():
    assert RingConfig(novikov_count=2, truncation_degree=2).names == ("Q1", "Q2", "N1", "N2")
    assert CFG.gen("Q1") == Q


def test_adams_examples():
    assert adams(2, N1 + Q) == N2 + Q * Q
    assert adams(1, N1 + N2 * Q) == N1 + N2 * Q
    cfg6 = RingConfig(truncation_degree=6)
    assert adams(2, adams(3, cfg6.gen("N1"))) == adams(6, cfg6.gen("N1")) == cfg6.gen("N6")


def test_adams_truncates_beyond_degree():
    assert adams(3, N2) == CFG.zero()
    assert adams(5, Q) == CFG.zero()


def test_adams_cutoff_too_small():
    cfg = RingConfig(truncation_degree=4, sym_cutoff=2)
    with pytest.raises(RingError, match="cutoff too small"):
        adams(3, cfg.gen("N1"))


def test_exp_log_examples():
    cfg = RingConfig(truncation_degree=2)
    n1 = cfg.gen("N1")
    assert exp_filtered(n1) == 1 + n1 + (n1 * n1).scale(Fraction(1, 2))
    assert exp_filtered(cfg.zero()) == cfg.one()
    x = Q + N2
    assert log_filtered(exp_filtered(x)) == x
    with pytest.raises(RingError):
        exp_filtered(1 + N1)
    with pytest.raises(RingError):
        log_filtered(2 + N1)


def test_filtration_examples():
    assert filtration_degree(N1 + N2) == 1
    assert filtration_degree(CFG.zero()) == math.inf
    assert filtration_degree(adams(2, N1)) == 2


def test_inverse_and_division():
    u = 2 + N1 - Q * Q
    assert u * u.inverse() == CFG.one()
    assert (N1 / u) * u == N1
    with pytest.raises(RingError):
        N1.inverse()


def test_printing():
    assert format_lambda(N1 * N1.scale(Fraction(3, 2)) - Q + 1) == "1-Q+3*N1^2/2"
    assert str(CFG.zero()) == "0"


@given(lambda_elems(CFG), lambda_elems(CFG), lambda_elems(CFG))
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CFG.zero()
    assert a * 1 == a


@given(lambda_elems(CFG), lambda_elems(CFG), st.integers(1, 4))
def test_adams_is_ring_homomorphism(a, b, k):
    assert adams(k, a + b) == adams(k, a) + adams(k, b)
    assert adams(k, a * b) == adams(k, a) * adams(k, b)
    assert adams(k, CFG.one()) == CFG.one()


@given(lambda_elems(CFG), st.integers(1, 2), st.integers(1, 2))
def test_adams_composition(a, j, k):
    assert adams(j, adams(k, a)) == adams(j * k, a)


@given(lambda_elems(CFG, positive=True), st.integers(2, 4))
def test_adams_raises_filtration(a, k):
    if a:
        assert filtration_degree(adams(k, a)) > filtration_degree(a)


@given(lambda_elems(CFG, positive=True), lambda_elems(CFG, positive=True))
def test_exp_homomorphism_and_log_inverse(a, b):
    assert exp_filtered(a + b) == exp_filtered(a) * exp_filtered(b)
    assert log_filtered(exp_filtered(a)) == a
    assert filtration_degree(a * b) >= filtration_degree(a) + filtration_degree(b)
