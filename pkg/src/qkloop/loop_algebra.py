"""The symplectic loop space of vector-valued rational functions of q.

A :class:`RationalLoop` is stored as::

    q**val * sum_{(alpha, mono)} num[alpha, mono](q) * mono * phi_alpha / den(q)

where each ``num[...]`` and ``den`` are :class:`~qkloop.poly.QPoly` over the
rationals, ``den(0) == 1``, and ``mono`` ranges over monomials of the
truncated coefficient ring. Denominators are scalar, so gcd and division
happen in the Euclidean domain Q[q]. Equality is decided by
cross-multiplication.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

from .coeff_ring import (
    LambdaElem,
    RingError,
    _adams_mono,
    format_mono,
    format_term,
    join_terms,
    mono_mul,
    mono_sort_key,
)
from .poly import ONE, QPoly, gcd, series_inverse, taylor_shift, xgcd


class LoopError(ValueError):
    pass


# -- K-vectors and pairings ------------------------------------------------------


class KVector:
    """Coordinates of an element of K(X) tensor Lambda against a fixed basis."""

    __slots__ = ("config", "coords")

    def __init__(self, config, coords):
        self.config = config
        self.coords = tuple(config.coerce(c) for c in coords)

    @classmethod
    def zero(cls, config, rank=1):
        return cls(config, [config.zero()] * rank)

    @property
    def rank(self):
        return len(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __getitem__(self, i):
        return self.coords[i]

    def _other(self, other):
        if not isinstance(other, KVector) or other.rank != self.rank:
            raise LoopError("rank mismatch")
        return other

    def __add__(self, other):
        other = self._other(other)
        return KVector(self.config, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self._other(other)
        return KVector(self.config, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return KVector(self.config, [-a for a in self.coords])

    def __mul__(self, s):
        return KVector(self.config, [a * s for a in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, KVector):
            return self.coords == other.coords
        if self.rank == 1 and isinstance(other, (LambdaElem, int, Fraction)):
            return self.coords[0] == other
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(str(c) for c in self.coords)
        return f"KVector([{inner}])"


def _as_matrix(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def rational_matrix_inverse(m):
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise LoopError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class PairingData:
    """Poincare pairing on a rank-N basis, with an optional variable metric."""

    g: tuple = ((Fraction(1),),)
    labels: tuple = ()
    G: tuple | None = None

    def __post_init__(self):
        g = _as_matrix(self.g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LoopError("pairing matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LoopError("pairing matrix must be symmetric")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g_inv", rational_matrix_inverse(g))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"phi{i + 1}" for i in range(n)))
        if self.G is not None:
            for i in range(n):
                for j in range(n):
                    if (self.G[i][j] - g[i][j]).filtration_degree() < 1:
                        raise LoopError("variable metric must agree with g modulo the positive part")

    @property
    def rank(self):
        return len(self.g)

    @classmethod
    def point(cls):
        return cls()

    def pair(self, u, v):
        """``(u, v)`` with respect to the constant metric g."""
        acc = u.config.zero()
        for i in range(self.rank):
            for j in range(self.rank):
                if self.g[i][j]:
                    acc = acc + (u[i] * v[j]).scale(self.g[i][j])
        return acc


# -- rational loops ---------------------------------------------------------------


def _poly_add_into(out, key, p):
    cur = out.get(key)
    s = p if cur is None else cur + p
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class RationalLoop:
    """Vector-valued rational function of q with a scalar denominator."""

    __slots__ = ("config", "rank", "val", "num", "den")

    def __init__(self, config, rank, val, num, den=ONE, reduce=True):
        _normalize_into(self, config, rank, val, num, den, reduce)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, config, rank=1):
        return cls(config, rank, 0, {})

    @classmethod
    def constant(cls, config, value, rank=None):
        """Constant loop from a rational, LambdaElem or KVector."""
        if isinstance(value, KVector):
            coords = value.coords
        else:
            coords = [config.coerce(value)]
        if rank is None:
            rank = len(coords)
        num = {}
        for a, x in enumerate(coords):
            for m, c in x.terms.items():
                num[(a, m)] = QPoly._raw([c])
        return cls(config, rank, 0, num, ONE, reduce=False)

    @classmethod
    def q_power(cls, config, k, coeff=1):
        return cls(config, 1, k, {(0, config.unit_mono): QPoly([coeff])}, ONE, reduce=False)

    @classmethod
    def scalar_rational(cls, config, num, den=ONE, val=0):
        """Scalar Q-valued rational function ``q**val * num/den``."""
        return cls(config, 1, val, {(0, config.unit_mono): num}, den)

    # -- inspection -------------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self):
        return self.den.is_one()

    def numerator_degree(self):
        return max((p.degree for p in self.num.values()), default=-1)

    def scalar_part(self):
        """The filtration-degree-0 component (rank 1 only) as a loop."""
        unit = self.config.unit_mono
        num = {k: p for k, p in self.num.items() if k[1] == unit}
        return RationalLoop(self.config, self.rank, self.val, num, self.den)

    def degree_part(self, d):
        deg = self.config.degree
        num = {k: p for k, p in self.num.items() if deg(k[1]) == d}
        return RationalLoop(self.config, self.rank, self.val, num, self.den)

    def truncate(self, d):
        deg = self.config.degree
        num = {k: p for k, p in self.num.items() if deg(k[1]) <= d}
        return RationalLoop(self.config, self.rank, self.val, num, self.den)

    def component(self, alpha):
        num = {(0, m): p for (a, m), p in self.num.items() if a == alpha}
        return RationalLoop(self.config, 1, self.val, num, self.den)

    def lambda_filtration_degree(self):
        deg = self.config.degree
        return min((deg(m) for (_, m) in self.num), default=math.inf)

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalLoop):
            if other.config != self.config:
                raise RingError("ring config mismatch")
            return other
        if isinstance(other, (int, Fraction, LambdaElem)):
            return RationalLoop.constant(self.config, other, rank=1)
        if isinstance(other, KVector):
            return RationalLoop.constant(self.config, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.rank != self.rank:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise LoopError("rank mismatch")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        g = gcd(self.den, other.den)
        if g.degree > 0:
            g = g.normalized()
            fa = other.den.exact_div(g)
            fb = self.den.exact_div(g)
            den = self.den * fa
        else:
            fa, fb = other.den, self.den
            den = self.den * other.den
        v = min(self.val, other.val)
        sa, sb = self.val - v, other.val - v
        out = {}
        for k, p in self.num.items():
            _poly_add_into(out, k, (p * fa).shift(sa))
        for k, p in other.num.items():
            _poly_add_into(out, k, (p * fb).shift(sb))
        return RationalLoop(self.config, self.rank, v, out, den)

    __radd__ = __add__

    def __neg__(self):
        return RationalLoop(self.config, self.rank, self.val, {k: -p for k, p in self.num.items()}, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = Fraction(other)
            if not s:
                return RationalLoop.zero(self.config, self.rank)
            return RationalLoop(self.config, self.rank, self.val, {k: p * s for k, p in self.num.items()}, self.den, reduce=False)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.rank != 1 and other.rank != 1:
            raise LoopError("vector-by-vector multiplication is not defined")
        rank = other.rank if self.rank == 1 else self.rank
        cfg = self.config
        D = cfg.truncation_degree
        deg = cfg.degree
        left_vec = self.rank != 1
        b_items = sorted(((deg(m), a, m, p) for (a, m), p in other.num.items()), key=lambda t: t[0])
        out = {}
        for (a1, m1), p1 in self.num.items():
            d1 = deg(m1)
            for d2, a2, m2, p2 in b_items:
                if d1 + d2 > D:
                    break
                key = (a1 if left_vec else a2, mono_mul(m1, m2))
                _poly_add_into(out, key, p1 * p2)
        return RationalLoop(cfg, rank, self.val + other.val, out, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = RationalLoop.constant(self.config, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        """Inverse of a scalar loop whose filtration-degree-0 part is nonzero."""
        if self.rank != 1:
            raise LoopError("only scalar loops can be inverted")
        cfg = self.config
        p0 = self.num.get((0, cfg.unit_mono))
        if p0 is None:
            raise LoopError("not a unit: the degree-0 part vanishes")
        v0 = p0.valuation()
        p0n = p0.shift(-v0)
        c0 = p0n[0]
        inv0 = RationalLoop(cfg, 1, -self.val - v0, {(0, cfg.unit_mono): self.den * (1 / c0)}, p0n * (1 / c0))
        x = self * inv0 - 1
        if x.is_zero():
            return inv0
        acc = RationalLoop.constant(cfg, 1)
        power = RationalLoop.constant(cfg, 1)
        neg_x = -x
        for _ in range(cfg.truncation_degree):
            power = power * neg_x
            if power.is_zero():
                break
            acc = acc + power
        return inv0 * acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LambdaElem, KVector, RationalLoop)):
            other = self._coerce(other)
            if other.rank != self.rank and not (self.is_zero() and other.is_zero()):
                return False
            v = min(self.val, other.val)
            lhs = {k: (p * other.den).shift(self.val - v) for k, p in self.num.items()}
            rhs = {k: (p * self.den).shift(other.val - v) for k, p in other.num.items()}
            return lhs == rhs
        return NotImplemented

    __hash__ = None

    # -- substitutions and Adams -------------------------------------------------

    def substitute_inverse(self):
        """``f(1/q)``."""
        if self.is_zero():
            return self
        n = self.den.degree
        M = self.numerator_degree()
        num = {k: p.reverse(M) for k, p in self.num.items()}
        return RationalLoop(self.config, self.rank, -self.val + n - M, num, self.den.reverse(n))

    def substitute_power(self, k):
        """``f(q**k)`` for k >= 1."""
        if k < 1:
            raise LoopError("power substitution needs k >= 1")
        if k == 1:
            return self
        num = {key: p.compose_power(k) for key, p in self.num.items()}
        return RationalLoop(self.config, self.rank, k * self.val, num, self.den.compose_power(k))

    def map_coefficients(self, fn):
        """Apply a Q-linear map on the coefficient ring, componentwise."""
        cfg = self.config
        out = {}
        for (a, m), p in self.num.items():
            img = fn(LambdaElem._raw(cfg, {m: Fraction(1)}))
            for m2, c in img.terms.items():
                _poly_add_into(out, (a, m2), p * c)
        return RationalLoop(cfg, self.rank, self.val, out, self.den)

    def adams(self, k):
        """Adams operation on loops: coefficients by Psi^k and q -> q^k."""
        if k == 1:
            return self
        cfg = self.config
        out = {}
        for (a, m), p in self.num.items():
            img = _adams_mono(cfg, k, m)
            if img is not None:
                _poly_add_into(out, (a, img), p)
        return RationalLoop(cfg, self.rank, self.val, out, self.den).substitute_power(k)

    # -- evaluation and expansions -----------------------------------------------

    def _kvector(self, coeffs):
        """KVector from ``{(alpha, mono): Fraction}``."""
        cfg = self.config
        parts = [dict() for _ in range(self.rank)]
        for (a, m), c in coeffs.items():
            if c:
                parts[a][m] = c
        return KVector(cfg, [LambdaElem._raw(cfg, t) for t in parts])

    def evaluate(self, c):
        """Value at a rational point that is not a pole."""
        c = Fraction(c)
        d = self.den(c)
        if not d:
            raise LoopError(f"q={c} is a pole")
        if c == 0 and self.val < 0:
            raise LoopError("q=0 is a pole")
        scale = c ** self.val / d if c else (Fraction(1) if self.val == 0 else Fraction(0))
        return self._kvector({k: p(c) * scale for k, p in self.num.items()})

    def coefficients_at_zero(self, lo, hi):
        """Laurent coefficients of q^lo..q^hi in the expansion at q=0."""
        n = hi - self.val + 1
        out = [dict() for _ in range(hi - lo + 1)]
        if n > 0:
            inv = series_inverse(list(self.den.c), n, Fraction(0))
            for key, p in self.num.items():
                pc = p.c
                for e in range(max(lo, self.val), hi + 1):
                    j = e - self.val
                    acc = Fraction(0)
                    for i in range(min(j, len(pc) - 1) + 1):
                        if pc[i]:
                            acc += pc[i] * inv[j - i]
                    if acc:
                        out[e - lo][key] = acc
        return [self._kvector(c) for c in out]

    def coefficient_at_zero(self, e):
        return self.coefficients_at_zero(e, e)[0]

    def local_expansion(self, center, lo, hi, zero=Fraction(0)):
        """Laurent coefficients in ``(q - center)``, as ``[{key: coeff}]``.

        ``center`` may be any field element supporting arithmetic with
        rationals. Returns ``(pole_order, coeff_dicts)``.
        """
        nshift = max(self.val, 0)
        dshift = max(-self.val, 0)
        dpoly = self.den.shift(dshift)
        ds = taylor_shift(list(dpoly.c), center, zero)
        k = 0
        while k < len(ds) and not ds[k]:
            k += 1
        e = ds[k:]
        n = hi + k + 1
        out = [dict() for _ in range(hi - lo + 1)]
        if n <= 0:
            return k, out
        inv = series_inverse(e, n, zero)
        for key, p in self.num.items():
            ns = taylor_shift(list(p.shift(nshift).c), center, zero)
            for j in range(max(lo, -k), hi + 1):
                idx = j + k
                acc = zero
                for i in range(min(idx, len(ns) - 1) + 1):
                    if ns[i]:
                        acc = acc + ns[i] * inv[idx - i]
                if acc:
                    out[j - lo][key] = acc
        return k, out

    def pole_order_at(self, c):
        c = Fraction(c)
        dpoly = self.den.shift(max(-self.val, 0))
        k = 0
        while dpoly and not dpoly(c):
            dpoly = dpoly.exact_div(QPoly([-c, 1]))
            k += 1
        return k

    def residue_at(self, c):
        """``Res_{q=c} f dq`` for rational c."""
        _, coeffs = self.local_expansion(Fraction(c), -1, -1)
        return self._kvector(coeffs[0])

    def __repr__(self):
        return f"RationalLoop({format_loop(self)})"

    def __str__(self):
        return format_loop(self)


class LaurentPoly(RationalLoop):
    """Element of K_+: a loop whose denominator is 1."""

    __slots__ = ()

    @classmethod
    def from_terms(cls, config, terms, rank=None):
        """Build from ``{exponent: KVector | LambdaElem | rational}``."""
        num = {}
        if not terms:
            return cls._wrap(RationalLoop.zero(config, rank or 1))
        lo = min(terms)
        for e, v in terms.items():
            coords = v.coords if isinstance(v, KVector) else [config.coerce(v)]
            if rank is None:
                rank = len(coords)
            elif rank != len(coords):
                raise LoopError("rank mismatch")
            for a, x in enumerate(coords):
                for m, c in x.terms.items():
                    _poly_add_into(num, (a, m), QPoly.monomial(e - lo, c))
        return cls._wrap(RationalLoop(config, rank, lo, num))

    @classmethod
    def _wrap(cls, loop):
        if not loop.den.is_one():
            raise LoopError("not a Laurent polynomial")
        out = object.__new__(cls)
        for s in RationalLoop.__slots__:
            setattr(out, s, getattr(loop, s))
        return out

    @property
    def terms(self):
        """``{exponent: KVector}`` with zero coefficients omitted."""
        if self.is_zero():
            return {}
        hi = self.val + self.numerator_degree()
        out = {}
        for e in range(self.val, hi + 1):
            coeffs = {k: p[e - self.val] for k, p in self.num.items()}
            v = self._kvector(coeffs)
            if not v.is_zero():
                out[e] = v
        return out


def as_laurent(loop):
    return LaurentPoly._wrap(loop)


def _normalize_into(self, config, rank, val, num, den, reduce):
    self.config = config
    self.rank = rank
    num = {k: p for k, p in num.items() if p}
    if not num:
        self.val, self.num, self.den = 0, {}, ONE
        return
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    v = den.valuation()
    if v:
        den = den.shift(-v)
        val -= v
    c0 = den[0]
    if c0 != 1:
        inv = 1 / c0
        den = den * inv
        num = {k: p * inv for k, p in num.items()}
    if reduce and den.degree > 0:
        g = den
        for p in num.values():
            g = gcd(g, p % g)
            if g.degree == 0:
                break
        if g.degree > 0:
            g = g.normalized()
            den = den.exact_div(g)
            num = {k: p.exact_div(g) for k, p in num.items()}
    s = min(p.valuation() for p in num.values())
    if s:
        num = {k: p.shift(-s) for k, p in num.items()}
        val += s
    self.val, self.num, self.den = val, num, den


# -- operations -----------------------------------------------------------------------


def loop_arith(f, g, op):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op in ("mul", "scalar_mul"):
        return f * g
    raise LoopError(f"unknown op {op!r}")


def substitute(f, rule):
    """``rule`` is ``"inv"`` for q -> 1/q or a positive int k for q -> q^k."""
    if rule in ("inv", "1/q"):
        return f.substitute_inverse()
    return f.substitute_power(int(rule))


def residue_zero(f):
    return f.coefficient_at_zero(-1)


def residue_infinity(f):
    """Residue at infinity of the 1-form ``f dq``."""
    return -(f.substitute_inverse().coefficient_at_zero(1))


def residues_zero_infinity(f):
    return residue_zero(f) + residue_infinity(f)


def pairing_loop(f, g, pairing=None):
    """Scalar loop ``(f(q), g(q))`` using the constant metric."""
    if f.rank != g.rank:
        raise LoopError("rank mismatch")
    if f.rank == 1 and (pairing is None or pairing.g == ((1,),)):
        return f * g
    if pairing is None:
        raise LoopError("pairing data required for rank > 1")
    acc = RationalLoop.zero(f.config)
    comps_f = [f.component(i) for i in range(f.rank)]
    comps_g = [g.component(j) for j in range(g.rank)]
    for i in range(f.rank):
        for j in range(g.rank):
            c = pairing.g[i][j]
            if c:
                acc = acc + comps_f[i] * comps_g[j] * c
    return acc


def omega(f, g, pairing=None):
    """Symplectic form ``-Res_{q=0,inf} (f(1/q), g(q)) dq/q``."""
    h = pairing_loop(f.substitute_inverse(), g, pairing)
    if h.is_zero():
        return f.config.zero()
    h = RationalLoop(h.config, 1, h.val - 1, h.num, h.den, reduce=False)
    return -(residues_zero_infinity(h)[0])


def project_split(f):
    """Split f = plus + minus, plus a Laurent polynomial, minus in K_-."""
    if f.is_zero():
        return as_laurent(f), f
    cfg, den = f.config, f.den
    if den.is_one():
        return as_laurent(f), RationalLoop.zero(cfg, f.rank)
    plus, minus = {}, {}
    if f.val >= 0:
        for k, p in f.num.items():
            a, b = divmod(p.shift(f.val), den)
            plus[k], minus[k] = a, b
        return (as_laurent(RationalLoop(cfg, f.rank, 0, plus)), RationalLoop(cfg, f.rank, 0, minus, den))
    m = -f.val
    # s*q^m + t*den = 1 since den(0) != 0
    _, s, t = xgcd(QPoly.monomial(m), den)
    for k, p in f.num.items():
        a, b = divmod(p, den)
        c, r = divmod(b * s, den)
        # q^-m (a + b t) + c  in K_+,  r/den in K_-
        plus[k] = (a + b * t) + c.shift(m)
        minus[k] = r
    return (as_laurent(RationalLoop(cfg, f.rank, -m, plus)), RationalLoop(cfg, f.rank, 0, minus, den))


@dataclass(frozen=True)
class SeriesWindow:
    """Laurent coefficients of a loop around a point, for exponents lo..hi."""

    point: object
    lo: int
    hi: int
    coeffs: tuple

    def coefficient(self, j):
        return self.coeffs[j - self.lo]

    def items(self):
        return zip(range(self.lo, self.hi + 1), self.coeffs)


def expand(f, at, lo, hi):
    """Laurent expansion of f at ``0``, ``"inf"`` (in powers of 1/q) or a rational."""
    if hi < lo:
        raise LoopError("malformed window: hi < lo")
    if at == "inf" or at == math.inf:
        g = f.substitute_inverse()
        return SeriesWindow("inf", lo, hi, tuple(g.coefficients_at_zero(lo, hi)))
    c = Fraction(at)
    if c == 0:
        return SeriesWindow(Fraction(0), lo, hi, tuple(f.coefficients_at_zero(lo, hi)))
    _, coeffs = f.local_expansion(c, lo, hi)
    return SeriesWindow(c, lo, hi, tuple(f._kvector(d) for d in coeffs))


def loop_exp(f):
    """Truncated exponential of a scalar loop with coefficients of positive filtration."""
    if f.rank != 1:
        raise LoopError("exp needs a scalar loop")
    if f.lambda_filtration_degree() < 1:
        raise LoopError("exp needs an argument of positive filtration degree")
    cfg = f.config
    result = RationalLoop.constant(cfg, 1)
    term = RationalLoop.constant(cfg, 1)
    for j in range(1, cfg.truncation_degree + 1):
        term = term * f * Fraction(1, j)
        if term.is_zero():
            break
        result = result + term
    return result


def metric_inverse(G):
    """Inverse of a matrix of ring elements ``g + Delta`` with Delta positive."""
    n = len(G)
    cfg = G[0][0].config
    g = [[G[i][j].constant_term() for j in range(n)] for i in range(n)]
    try:
        g_inv = rational_matrix_inverse(g)
    except LoopError:
        raise LoopError("metric is not a unit plus positive filtration") from None
    delta = [[G[i][j] - g[i][j] for j in range(n)] for i in range(n)]
    # X = -g^{-1} Delta ; G^{-1} = sum_j X^j g^{-1}
    X = [[-sum((delta[k][j] * g_inv[i][k] for k in range(n)), cfg.zero()) for j in range(n)] for i in range(n)]
    term = [[cfg.const(g_inv[i][j]) for j in range(n)] for i in range(n)]
    acc = [row[:] for row in term]
    for _ in range(cfg.truncation_degree):
        term = [[sum((X[i][k] * term[k][j] for k in range(n)), cfg.zero()) for j in range(n)] for i in range(n)]
        if not any(any(row) for row in term):
            break
        acc = [[acc[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    return acc


# -- printing --------------------------------------------------------------------------


def _q_factor(e):
    if e == 0:
        return ""
    if e == 1:
        return "q"
    return f"q^{e}"


def _format_numerator(f, alpha=0):
    cfg = f.config
    items = []
    for (a, m), p in f.num.items():
        if a != alpha:
            continue
        for i, c in enumerate(p.c):
            if c:
                items.append((mono_sort_key(cfg, m), -(f.val + i), m, f.val + i, c))
    items.sort(key=lambda t: (t[0], t[1]))
    return [format_term(c, [format_mono(cfg, m), _q_factor(e)]) for _, _, m, e, c in items]


def _format_component(f, alpha):
    terms = _format_numerator(f, alpha)
    num = join_terms(terms)
    if f.den.is_one():
        return num
    den_terms = [format_term(c, [_q_factor(i)]) for i, c in enumerate(f.den.c) if c]
    den = join_terms(den_terms)
    if len(terms) > 1 or "/" in num:
        num = f"({num})"
    return f"{num}/({den})"


def format_loop(f):
    """Canonical text of a loop, re-parseable by :mod:`qkloop.parser`."""
    if f.rank == 1:
        return _format_component(f, 0)
    return "[" + ", ".join(_format_component(f, a) for a in range(f.rank)) + "]"
