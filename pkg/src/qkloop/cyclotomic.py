"""Cyclotomic fields and the adelic view of loops at roots of unity.

Loops built from ``1/(1-q^k)`` only have poles at roots of unity. This module
factors denominators into cyclotomic polynomials, expands loops around
``q = 1/zeta`` with coefficients in ``Q(zeta_m)``, and performs the
substitution ``q -> q^(1/m)/zeta`` used to compare the localization at a
primitive m-th root with the localization at ``q = 1``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd

from .coeff_ring import LambdaElem, adams, format_mono
from .loop_algebra import LoopError, SeriesWindow, expand
from .point_theory import adams_exponent
from .poly import QPoly, binomial_series, series_inverse, series_mul, xgcd
from .report import verdict


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Phi_m, obtained by dividing q^m - 1 by Phi_d for all proper divisors d."""
    if m < 1:
        raise ValueError("conductor must be >= 1")
    p = QPoly.monomial(m) - QPoly([1])
    for d in range(1, m):
        if m % d == 0:
            p = p.exact_div(cyclotomic_polynomial(d))
    return p


def totient(m):
    return sum(1 for k in range(1, m + 1) if igcd(k, m) == 1)


def primitive_indices(m):
    return [k for k in range(1, m + 1) if igcd(k, m) == 1]


class CycloNumber:
    """Element of Q(zeta_m) stored as a polynomial in zeta of degree < phi(m)."""

    __slots__ = ("m", "c")

    def __init__(self, m, coeffs=()):
        self.m = m
        p = coeffs if isinstance(coeffs, QPoly) else QPoly(coeffs)
        self.c = p % cyclotomic_polynomial(m)

    @classmethod
    def zeta(cls, m, k=1):
        return cls(m, QPoly.monomial(k % m))

    @classmethod
    def rational(cls, m, x):
        return cls(m, QPoly([x]))

    def lift(self, n):
        """Same number viewed in Q(zeta_n), n a multiple of m."""
        if n == self.m:
            return self
        if n % self.m:
            raise ValueError(f"cannot embed Q(zeta_{self.m}) into Q(zeta_{n})")
        return CycloNumber(n, self.c.compose_power(n // self.m))

    def _pair(self, other):
        if isinstance(other, CycloNumber):
            if other.m == self.m:
                return self, other
            n = self.m * other.m // igcd(self.m, other.m)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, CycloNumber.rational(self.m, other)
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.m, a.c + b.c)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.m, -self.c)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.m, a.c - b.c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.m, self.c * other)
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.m, a.c * b.c)

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        g, s, _ = xgcd(self.c, cyclotomic_polynomial(self.m))
        # Phi_m is irreducible, so g is the constant 1
        return CycloNumber(self.m, s * (1 / g[0]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.m, self.c * (1 / Fraction(other)))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNumber.rational(self.m, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.c == b.c

    def __hash__(self):
        if self.c.degree <= 0:
            return hash(self.c[0])
        return hash((self.m, self.c.c))

    def is_rational(self):
        return self.c.degree <= 0

    def __repr__(self):
        return f"CycloNumber({self.m}, {self})"

    def __str__(self):
        terms = []
        for i, a in enumerate(self.c.c):
            if not a:
                continue
            z = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
            if not z:
                terms.append(str(a))
            elif a == 1:
                terms.append(z)
            elif a == -1:
                terms.append("-" + z)
            else:
                terms.append(f"{a}*{z}")
        if not terms:
            return "0"
        return "+".join(terms).replace("+-", "-")


def cyclo_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- pole classification -------------------------------------------------------------


@dataclass(frozen=True)
class AdelicProfile:
    poles: tuple
    offending_factor: QPoly | None
    expansion_at_one: SeriesWindow | None = None
    localized: tuple = ()

    @property
    def passes_regularity(self):
        """Test (iii): no poles away from roots of unity (and 0, infinity)."""
        return self.offending_factor is None

    def pole_order(self, m):
        return dict(self.poles).get(m, 0)


def _cyclotomic_factorization(den):
    rem = den
    poles = []
    deg = den.degree
    M = 1
    while deg > 0 and M <= 2 * den.degree * den.degree + 2:
        phi = cyclotomic_polynomial(M)
        if phi.degree <= rem.degree:
            order = 0
            while rem.degree >= phi.degree:
                quo, r = divmod(rem, phi)
                if r:
                    break
                rem = quo
                order += 1
            if order:
                poles.append((M, order))
        deg = rem.degree
        M += 1
    return tuple(poles), rem


def classify_poles(f, ms=(), window=2):
    """Factor the denominator of f into cyclotomic polynomials.

    ``ms`` optionally lists conductors for which localized expansions (after
    the ``q -> q^(1/m)/zeta`` substitution) are attached to the profile.
    """
    poles, rem = _cyclotomic_factorization(f.den)
    offending = rem.monic() if rem.degree > 0 else None
    at_one = None
    localized = []
    if offending is None:
        p1 = dict(poles).get(1, 0)
        at_one = expand(f, 1, -p1, window)
        for m in ms:
            order = dict(poles).get(m, 0)
            for k in primitive_indices(m):
                e = expand_at_root(f, m, -order, window, root_index=k)
                localized.append(adelic_localize(e, window))
    return AdelicProfile(poles, offending, at_one, tuple(localized))


# -- expansions at roots of unity ----------------------------------------------------


@dataclass(frozen=True)
class RootExpansion:
    """Laurent coefficients of a loop in ``z = q - zeta^{-1}`` over Q(zeta_m)."""

    m: int
    root_index: int
    lo: int
    hi: int
    pole_order: int
    coeffs: tuple
    config: object = None

    @property
    def zeta(self):
        return CycloNumber.zeta(self.m, self.root_index)

    def coefficient(self, j):
        if j < self.lo or j > self.hi:
            raise IndexError(j)
        return self.coeffs[j - self.lo]


def expand_at_root(f, m, lo, hi, root_index=1):
    """Expand f around ``q = 1/zeta`` with ``zeta = zeta_m^root_index``."""
    if m < 1:
        raise ValueError("conductor must be >= 1")
    if igcd(root_index, m) != 1:
        raise ValueError("root index must be coprime to the conductor")
    zero = CycloNumber(m)
    center = CycloNumber.zeta(m, -root_index)
    order, coeffs = f.local_expansion(center, lo, hi, zero)
    return RootExpansion(m, root_index, lo, hi, order, tuple(coeffs), f.config)


class LocalizationError(LoopError):
    def __init__(self, message, required_order):
        super().__init__(message)
        self.required_order = required_order


@dataclass(frozen=True)
class LocalizedWindow:
    """Series in ``u = q - 1`` after substituting ``q -> q^(1/m)/zeta``."""

    m: int
    root_index: int
    lo: int
    hi: int
    coeffs: tuple


def adelic_localize(e, hi):
    """Substitute ``z = zeta^{-1}((1+u)^(1/m) - 1)`` into the expansion e.

    The branch of the m-th root is fixed by ``(1+u)^(1/m) = 1 + u/m + ...``.
    Output orders run from ``-pole_order`` to ``hi``.
    """
    if e.hi < hi:
        raise LocalizationError(f"input window must reach order {hi} (has {e.hi})", hi)
    if e.lo > -e.pole_order:
        raise LocalizationError(f"input window must start at order {-e.pole_order} (starts at {e.lo})", -e.pole_order)
    m = e.m
    zero = CycloNumber(m)
    lo = -e.pole_order
    n = hi - lo + 1
    if n <= 0:
        return LocalizedWindow(m, e.root_index, lo, hi, ())
    b = binomial_series(Fraction(1, m), n + 2)
    w = b[1 : n + 2]  # (1+u)^(1/m) - 1 = u * w(u)
    w_inv = series_inverse(w, n + 1, Fraction(0))
    zeta = CycloNumber.zeta(m, e.root_index)
    zeta_inv = CycloNumber.zeta(m, -e.root_index)
    out = [dict() for _ in range(n)]
    for j in range(lo, hi + 1):
        cj = e.coefficient(j)
        if not cj:
            continue
        length = hi - j + 1
        base, scal = (w, zeta_inv ** j) if j >= 0 else (w_inv, zeta ** (-j))
        series = [Fraction(1)] + [Fraction(0)] * (length - 1)
        for _ in range(abs(j)):
            series = series_mul(series, base, length, Fraction(0))
        for key, c in cj.items():
            cs = c * scal
            for i, s in enumerate(series):
                if s:
                    idx = j + i - lo
                    out[idx][key] = out[idx].get(key, zero) + cs * s
    out = [{k: v for k, v in d.items() if v} for d in out]
    return LocalizedWindow(m, e.root_index, lo, hi, tuple(out))


def psi_localization_check(t, m):
    """Compare the polar parts of ``E(q) = sum Psi^k(t)/k(1-q^k)`` at q=1 and at 1/zeta.

    After ``q -> q^(1/m)/zeta`` the polar part at a primitive m-th root must
    equal ``Psi^m/m`` applied coefficientwise to the polar part at q = 1.
    Every primitive root is checked.
    """
    cfg = t.config
    params = {"t": t, "m": m, "D": cfg.truncation_degree}
    E = adams_exponent(t)
    order1 = E.pole_order_at(1)
    _, at_one = E.local_expansion(Fraction(1), -order1, -1)
    expected_by_order = {}
    for j, d in zip(range(-order1, 0), at_one):
        img = {}
        for (a, mono), c in d.items():
            x = adams(m, LambdaElem._raw(cfg, {mono: Fraction(1)})).scale(c / m)
            for mono2, c2 in x.terms.items():
                img[(a, mono2)] = img.get((a, mono2), 0) + c2
        expected_by_order[j] = {k: v for k, v in img.items() if v}
    for k in primitive_indices(m):
        poles = dict(classify_poles(E).poles)
        e = expand_at_root(E, m, -poles.get(m, 0), -1, root_index=k)
        loc = adelic_localize(e, -1)
        orders = set(range(loc.lo, 0)) | set(expected_by_order)
        for j in sorted(orders):
            got = loc.coeffs[j - loc.lo] if loc.lo <= j <= -1 else {}
            exp = expected_by_order.get(j, {})
            for key in sorted(set(got) | set(exp)):
                g = got.get(key, CycloNumber(m))
                x = exp.get(key, Fraction(0))
                if g != x:
                    detail = {
                        "root_index": k,
                        "u_exponent": j,
                        "monomial": format_mono(cfg, key[1]) or "1",
                        "expected": str(x),
                        "got": str(g),
                    }
                    return verdict("psi_localization", params, detail)
    return verdict("psi_localization", params)

