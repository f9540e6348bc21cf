"""Identity checks tying the loop-space formalism to the point theory.

Every check returns an :class:`~qkloop.report.IdentityReport`. A FAIL carries
the first offending coefficient so that a broken identity can be located.
"""

from fractions import Fraction
import random

from .coeff_ring import LambdaElem, adams, format_mono, mono_mul, mono_sort_key
from .cyclotomic import classify_poles, psi_localization_check
from .loop_algebra import (
    KVector,
    LaurentPoly,
    RationalLoop,
    omega,
    pairing_loop,
    project_split,
)
from .point_theory import (
    ConeError,
    TheoryParams,
    cone_membership,
    cone_point,
    f0_reconstruct,
    j_function,
    metric_scalar,
    misprinted_s,
    ruling_residual,
    s_operators,
    string_flow,
    sym_trace_oracle,
    tangent_parameter,
    tangent_parameter_inverse,
)
from .poly import ONE_MINUS_Q, QPoly, one_minus_q_power, series_inverse
from .report import verdict


# -- locating differences ------------------------------------------------------------


def _mono_text(cfg, mono):
    return format_mono(cfg, mono) or "1"


def lambda_difference(got, expected):
    """None if equal, else a detail dict for the first differing monomial."""
    if got == expected:
        return None
    cfg = got.config
    diff = got - expected
    mono = min(diff.terms, key=lambda m: mono_sort_key(cfg, m))
    return {
        "monomial": _mono_text(cfg, mono),
        "expected": expected.coefficient(mono),
        "got": got.coefficient(mono),
    }


def loop_difference(got, expected):
    """None if the loops are equal, else the first differing series coefficient at q=0."""
    diff = got - expected
    if diff.is_zero():
        return None
    cfg = got.config
    e = diff.val
    dv = diff.coefficient_at_zero(e)
    gv = got.coefficient_at_zero(e)
    ev = expected.coefficient_at_zero(e)
    for alpha, comp in enumerate(dv.coords):
        if comp:
            mono = min(comp.terms, key=lambda m: mono_sort_key(cfg, m))
            return {
                "component": alpha,
                "monomial": _mono_text(cfg, mono),
                "q_exponent": e,
                "expected": ev[alpha].coefficient(mono),
                "got": gv[alpha].coefficient(mono),
            }
    raise AssertionError("nonzero loop with vanishing leading coefficient")


def _params(p, **extra):
    out = {"tau": str(p.tau), "t": str(p.t), "D": p.config.truncation_degree}
    out.update(extra)
    return out


def _one_minus_q(cfg):
    return RationalLoop.scalar_rational(cfg, ONE_MINUS_Q)


# -- unitarity -------------------------------------------------------------------------


def drop_last_term(f):
    """f with its highest-order numerator monomial removed (a corruption)."""
    cfg = f.config
    key = max(f.num, key=lambda k: (cfg.degree(k[1]), k))
    return RationalLoop(cfg, f.rank, f.val, {k: v for k, v in f.num.items() if k != key}, f.den)


def check_sstar_s(p, corrupt=False, s_override=None):
    """``G S(1/q) S(q) = 1`` and ``S^{-1}(q) = S*(q^{-1})`` with ``S* = G S``.

    ``corrupt`` swaps in the misprinted sign; ``s_override`` replaces S outright.
    """
    S, S_inv = s_operators(p)
    if corrupt:
        S = misprinted_s(p)
    if s_override is not None:
        S = s_override
    G = metric_scalar(p)
    params = _params(p, corrupt=corrupt)
    s_bar = S.substitute_inverse() * G
    detail = loop_difference(s_bar * S, RationalLoop.constant(p.config, 1))
    if detail is None:
        detail = loop_difference(s_bar, S_inv)
        if detail is not None:
            detail["identity"] = "S^-1(q) = S*(1/q)"
    else:
        detail["identity"] = "S*(1/q) S(q) = 1"
    return verdict("sstar_s", params, detail)


# -- two-variable kernel ----------------------------------------------------------------


class TwoVariableKernel:
    """``sum_rho rho * P_rho(x, y) / (d(x) d(y))`` with Laurent P_rho over Q."""

    def __init__(self, config, terms, den):
        self.config = config
        self.terms = {r: t for r, t in terms.items() if t}
        self.den = den

    @classmethod
    def wdvv(cls, p, S=None):
        """``K(x, y) = G S(1/x) S(1/y) - 1``."""
        cfg = p.config
        if S is None:
            S, _ = s_operators(p)
        s = S.substitute_inverse()
        G = metric_scalar(p)
        D = cfg.truncation_degree
        deg = cfg.degree
        terms = {}
        factors = [(m, pm.c) for (_, m), pm in s.num.items()]
        for lam, gc in G.terms.items():
            for mu, a in factors:
                lm = mono_mul(lam, mu)
                if deg(lm) > D:
                    continue
                for nu, b in factors:
                    rho = mono_mul(lm, nu)
                    if deg(rho) > D:
                        continue
                    bucket = terms.setdefault(rho, {})
                    for i, ai in enumerate(a):
                        if not ai:
                            continue
                        for j, bj in enumerate(b):
                            if bj:
                                key = (i + s.val, j + s.val)
                                bucket[key] = bucket.get(key, 0) + gc * ai * bj
        d = s.den
        unit = terms.setdefault(cfg.unit_mono, {})
        for i, di in enumerate(d.c):
            for j, dj in enumerate(d.c):
                if di and dj:
                    unit[(i, j)] = unit.get((i, j), 0) - di * dj
        cleaned = {r: {k: v for k, v in t.items() if v} for r, t in terms.items()}
        return cls(cfg, cleaned, d)

    def divide_one_minus_xy(self):
        """Return ``(quotient, first_bad)``; first_bad is None when divisible.

        Writing ``x^i y^j = x^(i-j) (xy)^j`` turns the division into a
        univariate one in ``w = xy`` for each anti-diagonal; the remainder is
        the value at ``y = 1/x``.
        """
        quotient = {}
        cfg = self.config
        for rho in sorted(self.terms, key=lambda m: mono_sort_key(cfg, m)):
            t = self.terms[rho]
            diagonals = {}
            for (i, j), c in t.items():
                diagonals.setdefault(i - j, {})[j] = c
            qt = {}
            for s in sorted(diagonals):
                r = diagonals[s]
                if sum(r.values()) != 0:
                    return None, {"monomial": _mono_text(cfg, rho), "x_exponent": s, "remainder": sum(r.values())}
                acc = Fraction(0)
                for j in range(min(r), max(r)):
                    acc += r.get(j, 0)
                    if acc:
                        qt[(j + s, j)] = acc
            if qt:
                quotient[rho] = qt
        return TwoVariableKernel(cfg, quotient, self.den), None

    def asymmetry(self):
        cfg = self.config
        for rho in sorted(self.terms, key=lambda m: mono_sort_key(cfg, m)):
            t = self.terms[rho]
            for (i, j), c in sorted(t.items()):
                if t.get((j, i), 0) != c:
                    return {"monomial": _mono_text(cfg, rho), "x_exponent": i, "y_exponent": j, "coeff_xy": c, "coeff_yx": t.get((j, i), 0)}
        return None

    def series_coefficient(self, a, b):
        """Coefficient of ``x^a y^b`` in the expansion at ``x = y = 0``."""
        cfg = self.config
        n = max(a, b) + 1 - min([0] + [min(i, j) for t in self.terms.values() for (i, j) in t])
        inv = series_inverse(list(self.den.c), max(n, 1), Fraction(0))
        out = {}
        for rho, t in self.terms.items():
            acc = Fraction(0)
            for (i, j), c in t.items():
                if 0 <= a - i < len(inv) and 0 <= b - j < len(inv):
                    acc += c * inv[a - i] * inv[b - j]
            if acc:
                out[rho] = acc
        return LambdaElem._raw(cfg, out)

    def y_coefficient(self, b):
        """``[y^b]`` of the kernel, as a loop in x."""
        cfg = self.config
        lo_j = min([0] + [j for t in self.terms.values() for (_, j) in t])
        inv = series_inverse(list(self.den.c), b - lo_j + 1, Fraction(0))
        acc = RationalLoop.zero(cfg)
        for rho, t in self.terms.items():
            coeffs = {}
            for (i, j), c in t.items():
                if 0 <= b - j < len(inv):
                    coeffs[i] = coeffs.get(i, 0) + c * inv[b - j]
            coeffs = {i: c for i, c in coeffs.items() if c}
            if not coeffs:
                continue
            lo = min(coeffs)
            poly = QPoly([coeffs.get(i, 0) for i in range(lo, max(coeffs) + 1)])
            acc = acc + RationalLoop(cfg, 1, lo, {(0, rho): poly}, self.den)
        return acc

    def pair(self, a, b, pairing=None):
        """``(Omega x Omega)(kernel, a(x) (x) b(y))``."""
        cfg = self.config
        cache_a, cache_b = {}, {}

        def om(i, vec, cache):
            if i not in cache:
                basis = RationalLoop(cfg, 1, i, {(0, cfg.unit_mono): QPoly([1])}, self.den)
                cache[i] = omega(basis, vec, pairing)
            return cache[i]

        acc = cfg.zero()
        for rho, t in self.terms.items():
            r = LambdaElem._raw(cfg, {rho: Fraction(1)})
            inner = cfg.zero()
            for (i, j), c in t.items():
                inner = inner + (om(i, a, cache_a) * om(j, b, cache_b)).scale(c)
            acc = acc + r * inner
        return acc


def wdvv_kernel(p, s_override=None):
    """``K = G S(1/x) S(1/y) - 1`` vanishes on ``xy = 1`` and ``K/(1-xy)`` is symmetric."""
    params = _params(p)
    K = TwoVariableKernel.wdvv(p, s_override)
    T, bad = K.divide_one_minus_xy()
    if bad is not None:
        bad["identity"] = "remainder mod (1-xy)"
        return verdict("wdvv_kernel", params, bad)
    detail = T.asymmetry()
    if detail is not None:
        detail["identity"] = "T(x,y) = T(y,x)"
    if detail is None:
        detail = lambda_difference(T.series_coefficient(0, 0), metric_scalar(p) - 1)
        if detail is not None:
            detail["identity"] = "T(0,0) = G - 1"
    if detail is None and not p.tau and p.config.truncation_degree >= 2:
        # degree-2 part of T(x, 0) against the S_2 trace oracle
        oracle = sym_trace_oracle("two_point_descendant", p.t).degree_part(2) / _one_minus_q(p.config)
        detail = loop_difference(T.y_coefficient(0).degree_part(2), oracle)
        if detail is not None:
            detail["identity"] = "T(x,0) vs two-point oracle"
    return verdict("wdvv_kernel", params, detail)


def two_point_kernel(p):
    """``T(x, y) = (G S(1/x) S(1/y) - 1)/(1 - xy)``: the two-point descendant series."""
    T, bad = TwoVariableKernel.wdvv(p).divide_one_minus_xy()
    if bad is not None:
        raise ArithmeticError(f"kernel not divisible by 1-xy: {bad}")
    return T


def w_form(a, b, p):
    """Symmetric form ``W(a, b) = (Omega x Omega)(T, a(x) (x) b(y))``."""
    return two_point_kernel(p).pair(a, b)


# -- Hamiltonian of the string vector field ----------------------------------------------


def hamiltonian_sides(f, pairing=None):
    """Both sides of ``Omega(f, f/(1-q)) = -(f+(1), f+(1)) + 2 Omega(f-, (f+ - f+(1))/(1-q) - f+/2)``."""
    cfg = f.config
    omq = _one_minus_q(cfg)
    lhs = omega(f, f / omq, pairing)
    plus, minus = project_split(f)
    at_one = plus.evaluate(1)
    const = RationalLoop.constant(cfg, at_one)
    shifted = (plus - const) / omq
    second = shifted - plus * Fraction(1, 2)
    if pairing is None:
        sq = (at_one[0] * at_one[0]) if f.rank == 1 else None
    else:
        sq = pairing.pair(at_one, at_one)
    rhs = -sq + omega(minus, second, pairing).scale(2)
    return lhs, rhs


def check_hamiltonian_identity(f, pairing=None, name="hamiltonian"):
    lhs, rhs = hamiltonian_sides(f, pairing)
    params = {"f": str(f), "rank": f.rank}
    return verdict(name, params, lambda_difference(lhs, rhs))


# -- ancestor-descendant shift ------------------------------------------------------------


def check_ancestor_shift(p, corrupt=False):
    """``[S_tau(q) (q - 1 - t - tau)]_+ = q - 1``."""
    cfg = p.config
    S = misprinted_s(p) if corrupt else s_operators(p)[0]
    q = RationalLoop.q_power(cfg, 1)
    plus, _ = project_split(S * (q - 1 - p.t - p.tau))
    detail = loop_difference(plus, q - 1)
    return verdict("ancestor_shift", _params(p, corrupt=corrupt), detail)


# -- cone checks -----------------------------------------------------------------------------


def check_cone_scaling(p, scalars=None):
    """``lambda J(tau,t)`` lies on the ruling through tau for units lambda."""
    cfg = p.config
    if scalars is None:
        scalars = [cfg.const(3), cfg.const(Fraction(-1, 2)) + cfg.gen(cfg.names[0])]
    J = j_function(p)
    for lam in scalars:
        try:
            cert = cone_membership(J * lam, p.t)
        except ConeError as exc:
            return verdict("cone_scaling", _params(p, scalar=str(lam)), {"error": str(exc)})
        detail = lambda_difference(cert.tau, p.tau)
        if detail is None:
            detail = loop_difference(cert.y, RationalLoop.constant(cfg, lam))
        if detail is not None:
            return verdict("cone_scaling", _params(p, scalar=str(lam)), detail)
    return verdict("cone_scaling", _params(p, scalars=[str(s) for s in scalars]))


def check_string_flow(p, eps):
    """``exp(eps/(1-q)) J(tau,t) = J(tau+eps,t)`` and the solver recovers ``tau+eps``."""
    cfg = p.config
    params = _params(p, eps=str(eps))
    flowed = string_flow(j_function(p), eps)
    target = TheoryParams(p.tau + eps, p.t)
    detail = loop_difference(flowed, j_function(target))
    if detail is None:
        try:
            cert = cone_membership(flowed, p.t)
        except ConeError as exc:
            return verdict("string_flow", params, {"error": str(exc)})
        detail = lambda_difference(cert.tau, p.tau + eps)
        if detail is None:
            detail = loop_difference(cert.y, RationalLoop.constant(cfg, 1))
    return verdict("string_flow", params, detail)


def check_ruling(p):
    """``S_tau J(tau,t)/(1-q)`` is a Laurent polynomial (J lies on its ruling space)."""
    minus = ruling_residual(p)
    return verdict("ruling", _params(p), loop_difference(minus, RationalLoop.zero(p.config)))


def random_laurent(rng, cfg, lo=-2, hi=2, unit=True):
    """Random Laurent polynomial with small rational and ring coefficients."""
    gens = [g for g in (cfg.gen(n) for n in cfg.names) if g]
    terms = {}
    for e in range(lo, hi + 1):
        c = cfg.const(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        if gens and rng.random() < 0.5:
            c = c + rng.choice(gens).scale(rng.randint(-2, 2))
        if c:
            terms[e] = c
    y = LaurentPoly.from_terms(cfg, terms, rank=1)
    if unit and not y.scalar_part().evaluate(1)[0]:
        y = LaurentPoly.from_terms(cfg, {**y.terms, hi + 1: KVector(cfg, [cfg.one()])})
    return y


def check_cone_roundtrip(p, rng):
    """``cone_membership(cone_point(tau, y))`` returns ``(tau, y)``."""
    cfg = p.config
    y = random_laurent(rng, cfg)
    f = cone_point(p.tau, y, p.t)
    params = _params(p, y=str(y))
    try:
        cert = cone_membership(f, p.t)
    except ConeError as exc:
        return verdict("cone_roundtrip", params, {"error": str(exc)})
    detail = lambda_difference(cert.tau, p.tau)
    if detail is None:
        detail = loop_difference(cert.y, y)
    return verdict("cone_roundtrip", params, detail)


def check_adelic_regularity(p):
    """J, S and S^{-1} have poles only at roots of unity."""
    S, S_inv = s_operators(p)
    for label, f in (("J", j_function(p)), ("S", S), ("Sinv", S_inv)):
        prof = classify_poles(f)
        if not prof.passes_regularity:
            return verdict("adelic_regularity", _params(p, loop=label), {"offending_factor": str(prof.offending_factor.c)})
    return verdict("adelic_regularity", _params(p))


def check_f0_reconstruction(t):
    """F0 from the J-function: degree <= 2 vanishes, degree 3 matches the S_3 oracle,
    and ``Omega(J, 1-q+t) = 2 F0 + Psi^2(t)``."""
    cfg = t.config
    params = {"t": str(t), "D": cfg.truncation_degree}
    F = f0_reconstruct(t)
    detail = lambda_difference(F.truncate(2), cfg.zero())
    if detail is None and cfg.truncation_degree >= 3:
        oracle = sym_trace_oracle("three_point", t)
        detail = lambda_difference(F.degree_part(3), oracle.degree_part(3))
    if detail is None:
        J = j_function(TheoryParams(cfg.zero(), t))
        lhs = omega(J, _one_minus_q(cfg) + t)
        detail = lambda_difference(lhs, F.scale(2) + adams(2, t))
        if detail is not None:
            detail["identity"] = "dilaton"
    return verdict("f0_reconstruction", params, detail)


def check_tangent_parameter(t):
    cfg = t.config
    s = tangent_parameter(t)
    back = tangent_parameter_inverse(s)
    params = {"t": str(t), "D": cfg.truncation_degree, "tangent": str(s)}
    return verdict("tangent_parameter", params, lambda_difference(back, t))


def check_w_form(p, rng, pairs=3):
    """W(1,1) equals ``G - 1`` and W is symmetric on random Laurent pairs."""
    cfg = p.config
    T = two_point_kernel(p)
    one = RationalLoop.constant(cfg, 1)
    detail = lambda_difference(T.pair(one, one), metric_scalar(p) - 1)
    if detail is not None:
        detail["identity"] = "W(1,1) = G - 1"
        return verdict("w_form", _params(p), detail)
    for _ in range(pairs):
        a = random_laurent(rng, cfg, unit=False)
        b = random_laurent(rng, cfg, unit=False)
        detail = lambda_difference(T.pair(a, b), T.pair(b, a))
        if detail is not None:
            detail["identity"] = "W(a,b) = W(b,a)"
            return verdict("w_form", _params(p, a=str(a), b=str(b)), detail)
    return verdict("w_form", _params(p))


def random_mixed_loop(rng, cfg, rank=1):
    """Laurent part plus a few simple and double cyclotomic pole terms."""
    total = RationalLoop.zero(cfg, rank)
    for alpha in range(rank):
        comp = random_laurent(rng, cfg, lo=-2, hi=2, unit=False)
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(1, 4)
            order = rng.randint(1, 2)
            shift = rng.randint(0, 2)
            c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            if c:
                comp = comp + RationalLoop.scalar_rational(cfg, QPoly([c]), one_minus_q_power(k) ** order, val=shift)
        if rank == 1:
            return comp
        total = total + _embed(comp, alpha, rank)
    return total


def _embed(loop, alpha, rank):
    num = {(alpha, m): p for (_, m), p in loop.num.items()}
    return RationalLoop(loop.config, rank, loop.val, num, loop.den)


__all__ = [
    "TwoVariableKernel",
    "check_adelic_regularity",
    "check_ancestor_shift",
    "check_cone_roundtrip",
    "check_cone_scaling",
    "check_f0_reconstruction",
    "check_hamiltonian_identity",
    "check_ruling",
    "check_sstar_s",
    "check_string_flow",
    "check_tangent_parameter",
    "check_w_form",
    "drop_last_term",
    "hamiltonian_sides",
    "lambda_difference",
    "loop_difference",
    "pairing_loop",
    "psi_localization_check",
    "random_laurent",
    "random_mixed_loop",
    "run_case",
    "run_suite",
    "suite_cases",
    "two_point_kernel",
    "w_form",
    "wdvv_kernel",
]


# -- suite ----------------------------------------------------------------------------------


def _grid_values(cfg, ring):
    from .parser import ExprError, parse_lambda
    from .config import ConfigError

    out = {}
    for key in ("tau", "t", "eps"):
        vals = []
        for src in getattr(cfg, key):
            try:
                vals.append(parse_lambda(src, ring))
            except ExprError as exc:
                raise ConfigError(f"grid.{key} entry {src!r}: {exc}") from None
        out[key] = vals
    return out


def suite_cases(cfg):
    """The ordered case list; an empty tau or t grid yields no cases."""
    if not cfg.tau or not cfg.t:
        return []
    cases = [("point", i, j) for i in range(len(cfg.tau)) for j in range(len(cfg.t))]
    seen = []
    for j, src in enumerate(cfg.t):
        if src not in seen:
            seen.append(src)
            cases.append(("slice", j))
    if "hamiltonian" in cfg.checks:
        cases.extend(("hamiltonian", n) for n in range(cfg.random_cases))
    return cases


def _run_point(cfg, ring, grid, i, j, index):
    from .config import SIGN_SENSITIVE

    p = TheoryParams(grid["tau"][i], grid["t"][j])
    rng = random.Random(f"{cfg.seed}:{index}")
    checks = cfg.checks
    corrupt = {name: cfg.corrupt_sign and name in SIGN_SENSITIVE for name in checks}
    out = []
    if "sstar_s" in checks:
        out.append(check_sstar_s(p, corrupt=corrupt["sstar_s"]))
    if "wdvv_kernel" in checks:
        out.append(wdvv_kernel(p))
    if "w_form" in checks:
        out.append(check_w_form(p, rng))
    if "ancestor_shift" in checks:
        out.append(check_ancestor_shift(p, corrupt=corrupt["ancestor_shift"]))
    if "cone_scaling" in checks:
        out.append(check_cone_scaling(p))
    if "string_flow" in checks:
        out.extend(check_string_flow(p, eps) for eps in grid["eps"] if eps)
    if "ruling" in checks:
        out.append(check_ruling(p))
    if "cone_roundtrip" in checks:
        out.append(check_cone_roundtrip(p, rng))
    if "adelic_regularity" in checks:
        out.append(check_adelic_regularity(p))
    return out


def _run_slice(cfg, ring, grid, j):
    t = grid["t"][j]
    out = []
    if "psi_localization" in cfg.checks and t:
        out.extend(psi_localization_check(t, m) for m in cfg.m)
    if "f0_reconstruction" in cfg.checks:
        out.append(check_f0_reconstruction(t))
    if "tangent_parameter" in cfg.checks and t:
        out.append(check_tangent_parameter(t))
    return out


def _run_hamiltonian(cfg, ring, n):
    rng = random.Random(f"{cfg.seed}:hamiltonian:{n}")
    report = check_hamiltonian_identity(random_mixed_loop(rng, ring))
    report.params["seed"] = cfg.seed
    report.params["case"] = n
    return [report]


def run_case(cfg, case):
    """Run one case in isolation (the unit of parallel work)."""
    ring = cfg.ring()
    grid = _grid_values(cfg, ring)
    kind = case[0]
    if kind == "point":
        return _run_point(cfg, ring, grid, case[1], case[2], case[1] * len(cfg.t) + case[2])
    if kind == "slice":
        return _run_slice(cfg, ring, grid, case[1])
    return _run_hamiltonian(cfg, ring, case[1])


def _run_case_packed(args):
    return run_case(*args)


def run_suite(cfg):
    """All configured checks over the grid, in case order regardless of ``workers``."""
    _grid_values(cfg, cfg.ring())
    cases = suite_cases(cfg)
    if cfg.workers > 1 and len(cases) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_case_packed, [(cfg, c) for c in cases]))
    else:
        chunks = [run_case(cfg, c) for c in cases]
    return [r for chunk in chunks for r in chunk]
