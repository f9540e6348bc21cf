"""Genus-0 permutation-equivariant quantum K-theory of the point target.

Everything here is rank 1 with the trivial pairing. With

    E(q) = tau/(1-q) + sum_{k>0} Psi^k(t) / (k (1-q^k))

the closed forms are ``J = (1-q) e^E``, ``S^{-1} = e^E``, ``S = e^{-E}`` and
the variable metric ``G = e^{E(0)}``. The range of J at fixed t is the cone
swept by the ruling spaces ``(1-q) S_tau^{-1} K_+``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeff_ring import LambdaElem, RingError, adams, exp_filtered
from .loop_algebra import (
    LaurentPoly,
    LoopError,
    RationalLoop,
    as_laurent,
    loop_exp,
    omega,
    project_split,
)
from .poly import ONE_MINUS_Q, QPoly, one_minus_q_power


class ConeError(LoopError):
    """Raised by :func:`cone_membership`; carries the last solver state."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class TheoryParams:
    tau: LambdaElem
    t: LambdaElem

    def __post_init__(self):
        if self.tau.config != self.t.config:
            raise RingError("ring config mismatch")
        for name in ("tau", "t"):
            if getattr(self, name).filtration_degree() < 1:
                raise RingError(f"{name} must lie in the positive part of the ring")

    @property
    def config(self):
        return self.t.config

    @classmethod
    def of(cls, config, tau=0, t=0):
        return cls(config.coerce(tau), config.coerce(t))


@dataclass(frozen=True)
class ConeCertificate:
    tau: LambdaElem
    y: LaurentPoly
    residual: RationalLoop
    iterations: int = 0

    @property
    def on_cone(self):
        return self.residual.is_zero()


def _simple_pole(config, coeff, k):
    """The loop ``coeff / (1 - q^k)``."""
    return RationalLoop(config, 1, 0, {(0, m): QPoly._raw([c]) for m, c in coeff.terms.items()}, one_minus_q_power(k))


def adams_exponent(t):
    """``sum_{k>0} Psi^k(t) / (k (1-q^k))``."""
    cfg = t.config
    acc = RationalLoop.zero(cfg)
    for k in cfg.adams_range():
        term = adams(k, t)
        if term:
            acc = acc + _simple_pole(cfg, term.scale(Fraction(1, k)), k)
    return acc


def exponent(p):
    """The exponent E of ``S^{-1}``."""
    return _simple_pole(p.config, p.tau, 1) + adams_exponent(p.t)


@lru_cache(maxsize=256)
def _s_pair(p):
    E = exponent(p)
    return loop_exp(-E), loop_exp(E)


def j_function(p):
    """``J(tau, t) = (1-q) exp(E)``."""
    _, s_inv = _s_pair(p)
    return s_inv * RationalLoop.scalar_rational(p.config, ONE_MINUS_Q)


def metric_scalar(p):
    """``G = exp(tau + sum_{k>0} Psi^k(t)/k)``."""
    cfg = p.config
    x = p.tau
    for k in cfg.adams_range():
        x = x + adams(k, p.t).scale(Fraction(1, k))
    return exp_filtered(x) if x else cfg.one()


def s_operators(p):
    """Return ``(S, S^{-1})``; S is the reciprocal exponential of ``J/(1-q)``."""
    return _s_pair(p)


def misprinted_s(p):
    """The operator ``e^{tau/(q-1) - sum Psi^k(t)/k(q^k-1)}`` (negative control).

    It differs from S by the sign of the t-part.
    """
    cfg = p.config
    E = _simple_pole(cfg, -p.tau, 1) + adams_exponent(p.t)
    return loop_exp(E) if E else RationalLoop.constant(cfg, 1)


def cone_point(tau, y, t):
    """``(1-q) S_tau^{-1} y`` on the cone at parameter t."""
    p = TheoryParams(tau, t)
    _, s_inv = _s_pair(p)
    return s_inv * y * RationalLoop.scalar_rational(p.config, ONE_MINUS_Q)


def string_flow(f, eps):
    """``exp(eps/(1-q)) f``."""
    cfg = f.config
    eps = cfg.coerce(eps)
    if not eps:
        return f
    if eps.filtration_degree() < 1:
        raise RingError("string flow parameter must lie in the positive part")
    return loop_exp(_simple_pole(cfg, eps, 1)) * f


def cone_membership(f, t, max_iter=None):
    """Find ``(tau, y)`` with ``f = (1-q) S_tau^{-1} y``, order by order in the filtration.

    Each step applies ``tau += -Res_{q=1} r dq / y0(1)`` where r is the
    K_- part of ``S_tau f/(1-q)`` and y0 the degree-0 part of ``f/(1-q)``.
    """
    cfg = f.config
    t = cfg.coerce(t)
    one_minus_q = RationalLoop.scalar_rational(cfg, ONE_MINUS_Q)
    g0 = f.scalar_part() / one_minus_q
    if not g0.is_laurent():
        raise ConeError("not on cone: degree-0 part of f/(1-q) has poles", None)
    y0_at_1 = g0.evaluate(1)[0].constant_term()
    if not y0_at_1:
        raise DegenerateInput("degenerate input: y0(1) is not invertible")
    base = f / one_minus_q
    tau = cfg.zero()
    if max_iter is None:
        max_iter = cfg.truncation_degree + 2
    last = None
    for it in range(max_iter):
        s, _ = _s_pair(TheoryParams(tau, t))
        plus, minus = project_split(s * base)
        last = ConeCertificate(tau, plus, minus, it)
        if minus.is_zero():
            return last
        res = minus.residue_at(1)[0]
        delta = res.scale(-1 / y0_at_1)
        if not delta or delta.filtration_degree() < 1:
            break
        tau = tau + delta
    raise ConeError("not on cone: residual does not vanish", last)


class DegenerateInput(ConeError):
    pass


def f0_reconstruct(t):
    """``F0(0,t) = Omega([J]_-, [J]_+)/2 - Psi^2(t)/2``."""
    cfg = t.config
    J = j_function(TheoryParams(cfg.zero(), t))
    plus, minus = project_split(J)
    return omega(minus, plus).scale(Fraction(1, 2)) - adams(2, t).scale(Fraction(1, 2))


def sym_trace_oracle(kind, t):
    """Small-n correlators of the point from traces over symmetric groups.

    ``three_point`` is the S_3-invariant part of ``t^{(x)3}`` (cycle index);
    ``two_point_descendant`` is ``<1/(1-qL); t, t>^{S_2}`` where the
    transposition acts on L by -1.
    """
    cfg = t.config
    if kind == "three_point":
        return (t * t * t + (t * adams(2, t)).scale(3) + adams(3, t).scale(2)).scale(Fraction(1, 6))
    if kind == "two_point_descendant":
        a = _simple_pole(cfg, (t * t).scale(Fraction(1, 2)), 1)
        b = RationalLoop(cfg, 1, 0, {(0, m): QPoly._raw([c]) for m, c in adams(2, t).scale(Fraction(1, 2)).terms.items()}, QPoly([1, 1]))
        return a + b
    raise ValueError(f"unknown oracle kind {kind!r}")


def tangent_parameter(t):
    """``sum_{k>0} Psi^k(t)/k^2``."""
    if t.filtration_degree() < 1:
        raise RingError("tangent parameter needs an input in the positive part")
    acc = t.config.zero()
    for k in t.config.adams_range():
        acc = acc + adams(k, t).scale(Fraction(1, k * k))
    return acc


def tangent_parameter_inverse(s):
    """Solve ``tangent_parameter(t) = s`` by fixed-point iteration in the filtration."""
    if s.filtration_degree() < 1:
        raise RingError("tangent parameter needs an input in the positive part")
    cfg = s.config
    t = s
    for _ in range(cfg.truncation_degree):
        corr = cfg.zero()
        for k in cfg.adams_range():
            if k > 1:
                corr = corr + adams(k, t).scale(Fraction(1, k * k))
        t_next = s - corr
        if t_next == t:
            break
        t = t_next
    return t


def ruling_residual(p):
    """``[S_tau J(tau,t)/(1-q)]_-`` (zero when J lies on the ruling through tau)."""
    s, _ = _s_pair(p)
    cfg = p.config
    _, minus = project_split(s * j_function(p) / RationalLoop.scalar_rational(cfg, ONE_MINUS_Q))
    return minus


__all__ = [
    "ConeCertificate",
    "ConeError",
    "DegenerateInput",
    "TheoryParams",
    "adams_exponent",
    "as_laurent",
    "cone_membership",
    "cone_point",
    "exponent",
    "f0_reconstruct",
    "j_function",
    "metric_scalar",
    "misprinted_s",
    "ruling_residual",
    "s_operators",
    "string_flow",
    "sym_trace_oracle",
    "tangent_parameter",
    "tangent_parameter_inverse",
]
