from hypothesis import given, strategies as st
import pytest

from qkloop.coeff_ring import RingConfig, RingError, adams
from qkloop.loop_algebra import LaurentPoly, RationalLoop, omega, project_split
from qkloop.parser import parse_lambda, parse_loop
from qkloop.point_theory import (
    ConeError,
    DegenerateInput,
    TheoryParams,
    cone_membership,
    cone_point,
    f0_reconstruct,
    j_function,
    metric_scalar,
    misprinted_s,
    s_operators,
    string_flow,
    sym_trace_oracle,
    tangent_parameter,
    tangent_parameter_inverse,
)

from conftest import lambda_elems, laurent_loops

CFG2 = RingConfig(truncation_degree=2)
CFG3 = RingConfig(truncation_degree=3)


def P(cfg, tau, t):
    return TheoryParams(parse_lambda(tau, cfg), parse_lambda(t, cfg))


def test_params_require_positive_part():
    with pytest.raises(RingError):
        P(CFG2, "1", "N1")


def test_j_function_examples():
    assert j_function(P(CFG2, "0", "0")) == parse_loop("1-q", CFG2)
    expected = parse_loop("(1-q) + N1 + N1^2/(2*(1-q)) + N2/(2*(1+q))", CFG2)
    assert j_function(P(CFG2, "0", "N1")) == expected
    assert j_function(P(CFG2, "Q", "0")) == parse_loop("(1-q) + Q + Q^2/(2*(1-q))", CFG2)


@pytest.mark.parametrize("tau, t", [("0", "0"), ("Q", "N1"), ("N1+Q^2", "N2-Q"), ("0", "Q+N1")])
def test_j_plus_part_is_dilaton_shifted_input(tau, t):
    p = P(CFG3, tau, t)
    plus, _ = project_split(j_function(p))
    assert plus == RationalLoop.constant(CFG3, p.t + p.tau) + parse_loop("1-q", CFG3)


def test_metric_examples():
    assert metric_scalar(P(CFG2, "0", "0")) == CFG2.one()
    assert metric_scalar(P(CFG2, "0", "N1")) == parse_lambda("1+N1+N2/2+N1^2/2", CFG2)
    cfg1 = RingConfig(truncation_degree=1)
    assert metric_scalar(P(cfg1, "Q", "0")) == parse_lambda("1+Q", cfg1)


def test_s_operator_examples():
    one = RationalLoop.constant(CFG3, 1)
    S, S_inv = s_operators(P(CFG3, "0", "0"))
    assert S == one and S_inv == one
    p = P(CFG3, "Q", "N1")
    S, S_inv = s_operators(p)
    assert S * S_inv == one
    assert S_inv == j_function(p) / parse_loop("1-q", CFG3)
    G = metric_scalar(p)
    assert S.substitute_inverse() * S * G == one


def test_misprinted_s_breaks_inverse():
    p = P(CFG3, "Q", "N1")
    _, S_inv = s_operators(p)
    assert misprinted_s(p) * S_inv != RationalLoop.constant(CFG3, 1)


def test_s_inv_shift_in_tau():
    p, shifted = P(CFG3, "Q", "N1"), P(CFG3, "Q+N2", "N1")
    assert s_operators(shifted)[1] == string_flow(s_operators(p)[1], parse_lambda("N2", CFG3))


def test_cone_point_examples():
    p = P(CFG3, "Q", "N1")
    one = LaurentPoly.from_terms(CFG3, {0: 1})
    assert cone_point(p.tau, one, p.t) == j_function(p)
    assert cone_point(CFG3.zero(), one, CFG3.zero()) == parse_loop("1-q", CFG3)
    y = LaurentPoly.from_terms(CFG3, {-1: 2, 1: parse_lambda("N1", CFG3)})
    lam = parse_lambda("3+Q", CFG3)
    assert cone_point(p.tau, y, p.t) * lam == cone_point(p.tau, y * lam, p.t)


def test_cone_membership_examples():
    p = P(CFG3, "Q", "N1")
    cert = cone_membership(j_function(p), p.t)
    assert cert.tau == p.tau and cert.y == RationalLoop.constant(CFG3, 1) and cert.on_cone
    eps = parse_lambda("N2+Q", CFG3)
    cert = cone_membership(string_flow(j_function(p), eps), p.t)
    assert cert.tau == p.tau + eps
    with pytest.raises(ConeError, match="not on cone"):
        cone_membership(parse_loop("1+q", CFG3), CFG3.zero())


def test_cone_membership_degenerate():
    with pytest.raises(DegenerateInput):
        cone_membership(parse_loop("(1-q)^2", CFG3), CFG3.zero())


def test_cone_membership_rejects_off_cone_perturbation():
    p = P(CFG3, "Q", "N1")
    f = j_function(p) + parse_loop("N2/(1-q^2)", CFG3)
    with pytest.raises(ConeError) as info:
        cone_membership(f, p.t)
    assert not info.value.certificate.on_cone


@given(lambda_elems(CFG3, 3, positive=True), laurent_loops(CFG3, -2, 2), st.integers(1, 4))
def test_cone_roundtrip(tau, y, c):
    y = y + RationalLoop.q_power(CFG3, 3, c)
    if not y.scalar_part().evaluate(1)[0]:
        return
    t = parse_lambda("N1+Q", CFG3)
    cert = cone_membership(cone_point(tau, y, t), t)
    assert cert.tau == tau and cert.y == y


def test_string_flow_examples():
    f = j_function(P(CFG3, "0", "N1"))
    assert string_flow(f, CFG3.zero()) == f
    assert string_flow(f, parse_lambda("Q", CFG3)) == j_function(P(CFG3, "Q", "N1"))
    e1, e2 = parse_lambda("Q", CFG3), parse_lambda("N1-N2", CFG3)
    assert string_flow(string_flow(f, e1), e2) == string_flow(f, e1 + e2)


def test_f0_reconstruction():
    assert f0_reconstruct(CFG3.zero()) == CFG3.zero()
    n1 = parse_lambda("N1", CFG3)
    F = f0_reconstruct(n1)
    assert F.degree_part(2) == CFG3.zero()
    assert F.degree_part(3) == parse_lambda("N1^3/6 + N1*N2/2 + N3/3", CFG3)
    assert F.degree_part(3) == sym_trace_oracle("three_point", n1)


@pytest.mark.parametrize("t", ["N1", "N1+Q", "2*N1-N2"])
def test_dilaton_identity(t):
    cfg = RingConfig(truncation_degree=4)
    t = parse_lambda(t, cfg)
    J = j_function(TheoryParams(cfg.zero(), t))
    lhs = omega(J, parse_loop("1-q", cfg) + t)
    assert lhs == f0_reconstruct(t).scale(2) + adams(2, t)


def test_sym_trace_oracles():
    n1 = parse_lambda("N1", CFG3)
    assert sym_trace_oracle("three_point", n1) == parse_lambda("(N1^3+3*N1*N2+2*N3)/6", CFG3)
    assert sym_trace_oracle("three_point", CFG3.zero()) == CFG3.zero()
    two = sym_trace_oracle("two_point_descendant", n1)
    assert two == parse_loop("N1^2/(2*(1-q)) + N2/(2*(1+q))", CFG3)
    J = j_function(TheoryParams(CFG3.zero(), n1))
    assert (J - parse_loop("1-q+N1", CFG3)).degree_part(2) == two
    with pytest.raises(ValueError):
        sym_trace_oracle("four_point", n1)


def test_tangent_parameter():
    n1 = parse_lambda("N1", CFG3)
    s = tangent_parameter(n1)
    assert s == parse_lambda("N1 + N2/4 + N3/9", CFG3)
    assert tangent_parameter_inverse(s) == n1
    assert tangent_parameter(CFG3.zero()) == CFG3.zero()
    with pytest.raises(RingError):
        tangent_parameter(CFG3.one())


@given(lambda_elems(RingConfig(truncation_degree=5), 4, positive=True))
def test_tangent_parameter_roundtrip(t):
    assert tangent_parameter_inverse(tangent_parameter(t)) == t
    assert tangent_parameter(tangent_parameter_inverse(t)) == t
