from fractions import Fraction

from hypothesis import given, strategies as st
import pytest

from qkloop.coeff_ring import LambdaElem, RingConfig, exp_filtered
from qkloop.loop_algebra import (
    KVector,
    LaurentPoly,
    LoopError,
    PairingData,
    RationalLoop,
    expand,
    format_loop,
    metric_inverse,
    omega,
    project_split,
    residue_infinity,
    residue_zero,
    residues_zero_infinity,
    substitute,
)
from qkloop.parser import parse_loop
from qkloop.poly import QPoly

from conftest import laurent_loops, mixed_loops

CFG = RingConfig(truncation_degree=3)
N1, N2, Q = CFG.gen("N1"), CFG.gen("N2"), CFG.gen("Q")


def L(src, cfg=CFG):
    return parse_loop(src, cfg)


def taylor_oracle(f, n):
    """Power-series coefficients of a loop with val >= 0, by long division."""
    num = {}
    for (_, mono), p in f.num.items():
        for i, c in enumerate(p.c):
            num.setdefault(mono, [Fraction(0)] * (n + 1))
            if f.val + i <= n:
                num[mono][f.val + i] += c
    d = list(f.den.c) + [Fraction(0)] * (n + 1)
    out = {}
    for mono, a in num.items():
        s = []
        for k in range(n + 1):
            s.append(a[k] - sum(d[j] * s[k - j] for j in range(1, k + 1)))
        out[mono] = s
    return out


def test_arith_examples():
    assert L("1/(1-q) + 1/(1+q)") == L("2/(1-q^2)")
    assert L("(1-q)*(1/(1-q))") == RationalLoop.constant(CFG, 1)
    assert L("q^2*q^-3") == RationalLoop.q_power(CFG, -1)
    assert format_loop(L("1/(1-q) + 1/(1+q)")) == "2/(1-q^2)"


def test_vector_times_vector_rejected():
    v = RationalLoop.constant(CFG, KVector(CFG, [CFG.one(), N1]))
    with pytest.raises(LoopError):
        v * v


def test_substitutions():
    assert substitute(L("1/(1-q)"), "1/q") == L("-q/(1-q)")
    assert substitute(L("q-3"), 2) == L("q^2-3")
    assert substitute(L("1/(1-q)"), 2) == L("1/(1-q^2)")


def test_residue_examples():
    f = L("1/q")
    assert residue_zero(f)[0] == 1 and residue_infinity(f)[0] == -1
    assert residues_zero_infinity(f)[0] == 0
    g = L("1/(q*(2-q))")
    assert residue_zero(g)[0] == Fraction(1, 2) and residue_infinity(g)[0] == 0
    h = L("-q/(q-1)")
    assert residue_zero(h)[0] == 0 and residue_infinity(h)[0] == 1


def test_omega_examples():
    assert omega(L("q^3"), L("1+q")) == CFG.zero()
    assert omega(L("1"), L("1/(2-q)")) == CFG.const(Fraction(-1, 2))
    c = N1 * 5 + 2
    assert omega(L("1/(1-q)"), RationalLoop.constant(CFG, c)) == c


def test_omega_rank_two_pairing():
    pairing = PairingData(g=((0, 1), (1, 0)))
    one = LaurentPoly.from_terms(CFG, {0: KVector(CFG, [CFG.one(), CFG.zero()])})
    pole = RationalLoop.scalar_rational(CFG, QPoly([1]), QPoly([1, -1]))
    f = pole * RationalLoop.constant(CFG, KVector(CFG, [CFG.zero(), N1]))
    assert omega(f, one, pairing) == N1
    assert omega(one, f, pairing) == -N1
    with pytest.raises(LoopError):
        omega(one, L("1"), pairing)


def test_split_examples():
    plus, minus = project_split(L("q^2+3"))
    assert plus == L("q^2+3") and minus.is_zero()
    plus, minus = project_split(L("(q-3)/(1-2/q)"))
    assert format_loop(plus) == "q-1" and format_loop(minus) == "1/(1-q/2)"
    # [(q - 1 - t - tau)/(1 - lam/q)]_+ = lam + q - 1 - t - tau
    plus, _ = project_split(L("(q-1-N1-Q)/(1-5/q)"))
    assert plus == L("5+q-1-N1-Q")


def test_expand_examples():
    f = L("1/(1-q)")
    assert [c[0] for c in expand(f, 0, 0, 3).coeffs] == [1, 1, 1, 1]
    assert [c[0] for c in expand(f, 1, -1, 0).coeffs] == [-1, 0]
    w = expand(L("(1-q)/(1-q^2)"), -1, -1, 0)
    assert w.coefficient(-1)[0] == 1
    assert [c[0] for c in expand(L("q/(1-q)"), "inf", 0, 2).coeffs] == [-1, -1, -1]
    with pytest.raises(LoopError):
        expand(f, 0, 2, 1)


def test_metric_inverse_examples():
    assert metric_inverse([[CFG.const(2)]]) == [[CFG.const(Fraction(1, 2))]]
    cfg = RingConfig(truncation_degree=2)
    n1 = cfg.gen("N1")
    assert metric_inverse([[1 + n1]]) == [[1 - n1 + n1 * n1]]
    x = n1 + cfg.gen("N2").scale(Fraction(1, 2))
    assert metric_inverse([[exp_filtered(x)]]) == [[exp_filtered(-x)]]
    G = [[cfg.one(), n1], [n1, 2 + cfg.gen("N2")]]
    Gi = metric_inverse(G)
    prod = [[sum((G[i][k] * Gi[k][j] for k in range(2)), cfg.zero()) for j in range(2)] for i in range(2)]
    assert prod == [[cfg.one(), cfg.zero()], [cfg.zero(), cfg.one()]]
    with pytest.raises(LoopError):
        metric_inverse([[n1]])


def test_unit_inversion():
    f = L("(1-q)/(1+q) + N1*q")
    assert f * f.inverse() == RationalLoop.constant(CFG, 1)
    with pytest.raises(LoopError):
        L("N1/(1-q)").inverse()


@given(mixed_loops(CFG))
def test_split_is_unique_and_idempotent(f):
    plus, minus = project_split(f)
    assert plus + minus == f
    assert plus.is_laurent()
    assert minus.is_zero() or (minus.val >= 0 and minus.val + minus.numerator_degree() < minus.den.degree)
    p2, m2 = project_split(plus)
    assert p2 == plus and m2.is_zero()
    p3, m3 = project_split(minus)
    assert p3.is_zero() and m3 == minus


@given(mixed_loops(CFG), mixed_loops(CFG))
def test_omega_antisymmetric_and_lagrangian(f, g):
    assert omega(f, g) == -omega(g, f)
    fp, fm = project_split(f)
    gp, gm = project_split(g)
    assert omega(fp, gp) == CFG.zero()
    assert omega(fm, gm) == CFG.zero()


@given(mixed_loops(CFG), st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_cauchy_consistency(f, exps):
    """Omega(f, q^k) is the q^k Taylor coefficient of the minus part at q = 0."""
    _, minus = project_split(f)
    series = taylor_oracle(minus, 4)
    for k in exps:
        expected = CFG.zero()
        for mono, s in series.items():
            expected = expected + LambdaElem(CFG, {mono: s[k]})
        assert omega(f, RationalLoop.q_power(CFG, k)) == expected


@given(laurent_loops(CFG), laurent_loops(CFG))
def test_omega_on_laurent_pairs_vanishes(f, g):
    assert omega(f, g) == CFG.zero()


@given(mixed_loops(CFG))
def test_print_parse_fixpoint(f):
    assert parse_loop(format_loop(f), CFG) == f
