from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st
import pytest

from qkloop.coeff_ring import LambdaElem, RingConfig
from qkloop.loop_algebra import RationalLoop
from qkloop.poly import QPoly, one_minus_q_power

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ring3():
    return RingConfig(truncation_degree=3)


def rationals(bound=5):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))


def monomials(cfg):
    """Exponent vectors of weighted degree <= D."""
    D = cfg.truncation_degree

    def build(exps):
        mono = []
        budget = D
        for w, e in zip(cfg.gen_weights, exps):
            e = min(e, budget // w)
            mono.append(e)
            budget -= e * w
        return tuple(mono)

    return st.lists(st.integers(0, D), min_size=cfg.ngens, max_size=cfg.ngens).map(build)


def lambda_elems(cfg, max_terms=4, positive=False):
    def build(items):
        terms = {}
        for mono, c in items:
            if positive and not any(mono):
                continue
            terms[mono] = terms.get(mono, 0) + c
        return LambdaElem(cfg, terms)

    return st.lists(st.tuples(monomials(cfg), rationals()), max_size=max_terms).map(build)


def laurent_loops(cfg, lo=-3, hi=3):
    def build(items):
        acc = RationalLoop.zero(cfg)
        for e, c in items:
            acc = acc + RationalLoop.q_power(cfg, e) * c
        return acc

    return st.lists(st.tuples(st.integers(lo, hi), lambda_elems(cfg, 2)), max_size=4).map(build)


def mixed_loops(cfg):
    """Laurent part plus terms c q^s/(1-q^k)^r and a pole off the unit circle."""

    def build(parts):
        base, poles, generic = parts
        acc = base
        for k, r, s, c in poles:
            acc = acc + RationalLoop.scalar_rational(cfg, QPoly([1]), one_minus_q_power(k) ** r, val=s) * c
        for a, c in generic:
            acc = acc + RationalLoop.scalar_rational(cfg, QPoly([1]), QPoly([1, -a])) * c
        return acc

    pole = st.tuples(st.integers(1, 4), st.integers(1, 2), st.integers(-1, 2), lambda_elems(cfg, 2))
    generic = st.tuples(st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(2)]), rationals())
    return st.tuples(laurent_loops(cfg), st.lists(pole, max_size=3), st.lists(generic, max_size=1)).map(build)
