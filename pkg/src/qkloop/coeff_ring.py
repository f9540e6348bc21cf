"""Truncated lambda-ring of coefficients.

The ring is ``Q[[Q_1..Q_n; N_1..N_R]]`` truncated at total weighted degree D.
Novikov variables carry weight 1 and the symmetric-function generators
``N_r`` carry weight r unless overridden. Adams operations act by
``Q_i^d -> Q_i^(kd)`` and ``N_r -> N_(kr)``; they are ring homomorphisms and
raise the filtration degree for k > 1.

Elements are immutable; every product is re-truncated eagerly.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math


class RingError(ValueError):
    """Raised for config mismatches and violated preconditions."""


INFINITY = math.inf


@dataclass(frozen=True)
class RingConfig:
    novikov_count: int = 1
    sym_cutoff: int | None = None
    truncation_degree: int = 4
    weights: tuple = ()
    names: tuple = field(init=False, compare=False, repr=False)
    gen_weights: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        D = self.truncation_degree
        if D < 1:
            raise RingError("truncation degree must be >= 1")
        if self.novikov_count < 0:
            raise RingError("novikov_count must be >= 0")
        if self.sym_cutoff is None:
            object.__setattr__(self, "sym_cutoff", D)
        if self.sym_cutoff < 0:
            raise RingError("sym_cutoff must be >= 0")
        if self.novikov_count == 1:
            names = ("Q",)
        else:
            names = tuple(f"Q{i}" for i in range(1, self.novikov_count + 1))
        names += tuple(f"N{r}" for r in range(1, self.sym_cutoff + 1))
        default = [1] * self.novikov_count + list(range(1, self.sym_cutoff + 1))
        overrides = dict(self.weights)
        unknown = set(overrides) - set(names)
        if unknown:
            raise RingError(f"weights given for unknown generators {sorted(unknown)}")
        w = tuple(int(overrides.get(nm, d)) for nm, d in zip(names, default))
        if any(x < 1 for x in w):
            raise RingError("all weights must be >= 1")
        n0 = self.novikov_count
        R = self.sym_cutoff
        # Adams must scale weights: w(N_kr) = k w(N_r)
        for r in range(1, R + 1):
            for k in range(2, R // r + 1):
                if w[n0 + k * r - 1] != k * w[n0 + r - 1]:
                    raise RingError(f"weight of N{k * r} must be {k} times weight of N{r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "gen_weights", w)

    @property
    def ngens(self):
        return len(self.names)

    @property
    def min_weight(self):
        return min(self.gen_weights) if self.gen_weights else 1

    def adams_range(self):
        """k values that can contribute to a sum of Adams operations."""
        return range(1, self.truncation_degree // self.min_weight + 1)

    def index(self, name):
        if name == "Q" and self.novikov_count >= 1:
            return 0
        if name == "Q1" and self.novikov_count == 1:
            return 0
        try:
            return self.names.index(name)
        except ValueError:
            raise RingError(f"unknown generator {name!r}") from None

    # -- element constructors -------------------------------------------

    @property
    def unit_mono(self):
        return (0,) * self.ngens

    def zero(self):
        return LambdaElem(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = Fraction(c)
        return LambdaElem(self, {self.unit_mono: c} if c else {})

    def gen(self, name):
        i = self.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.ngens))
        return LambdaElem(self, {mono: Fraction(1)})

    def degree(self, mono):
        return _mono_degree(self.gen_weights, mono)

    def coerce(self, x):
        if isinstance(x, LambdaElem):
            if x.config != self:
                raise RingError("ring config mismatch")
            return x
        return self.const(x)


@lru_cache(maxsize=None)
def _mono_degree(weights, mono):
    return sum(w * e for w, e in zip(weights, mono))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class LambdaElem:
    """Element of the truncated coefficient ring: ``{monomial: Fraction}``."""

    __slots__ = ("config", "terms", "_hash")

    def __init__(self, config, terms):
        D = config.truncation_degree
        self.config = config
        self.terms = {m: Fraction(c) for m, c in terms.items() if c and config.degree(m) <= D}
        self._hash = None

    @classmethod
    def _raw(cls, config, terms):
        e = object.__new__(cls)
        e.config = config
        e.terms = terms
        e._hash = None
        return e

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get(self.config.unit_mono, Fraction(0))

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def filtration_degree(self):
        """Minimal weighted degree of a stored monomial (inf for zero)."""
        if not self.terms:
            return INFINITY
        return min(self.config.degree(m) for m in self.terms)

    def degree_part(self, d):
        cfg = self.config
        return LambdaElem._raw(cfg, {m: c for m, c in self.terms.items() if cfg.degree(m) == d})

    def truncate(self, d):
        """Drop all monomials of weighted degree > d."""
        cfg = self.config
        return LambdaElem._raw(cfg, {m: c for m, c in self.terms.items() if cfg.degree(m) <= d})

    def coefficient(self, mono):
        return self.terms.get(mono, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, LambdaElem):
            return self.config == other.config and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.config.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"LambdaElem({format_lambda(self)})"

    def __str__(self):
        return format_lambda(self)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if isinstance(other, LambdaElem):
            if other.config is not self.config and other.config != self.config:
                raise RingError("ring config mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.config.const(other)
        return None

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return LambdaElem._raw(self.config, out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaElem._raw(self.config, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, s):
        s = Fraction(s)
        if not s:
            return self.config.zero()
        return LambdaElem._raw(self.config, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        if other is None:
            return NotImplemented
        cfg = self.config
        D = cfg.truncation_degree
        deg = cfg.degree
        b_items = sorted(((deg(m), m, c) for m, c in other.terms.items()), key=lambda t: t[0])
        out = {}
        for m1, c1 in self.terms.items():
            d1 = deg(m1)
            for d2, m2, c2 in b_items:
                if d1 + d2 > D:
                    break
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return LambdaElem._raw(cfg, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.config.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        """Inverse of a unit ``c + x`` with c a nonzero rational, x in the positive part."""
        c = self.constant_term()
        if not c:
            raise RingError("element is not a unit (zero constant term)")
        x = (self - c).scale(-1 / c)
        # 1/(c(1-x)) = (1/c) sum x^j
        acc = self.config.one()
        power = self.config.one()
        for _ in range(self.config.truncation_degree):
            power = power * x
            if not power:
                break
            acc = acc + power
        return acc.scale(1 / c)

    def adams(self, k):
        return adams(k, self)


def adams(k, a):
    """Adams operation ``Psi^k`` applied to a."""
    if k < 1:
        raise RingError("Adams operation needs k >= 1")
    if k == 1:
        return a
    cfg = a.config
    out = {}
    for m, c in a.terms.items():
        img = _adams_mono(cfg, k, m)
        if img is None:
            continue
        out[img] = out.get(img, 0) + c
    return LambdaElem._raw(cfg, {m: c for m, c in out.items() if c})


def _adams_mono(cfg, k, mono):
    D = cfg.truncation_degree
    n0 = cfg.novikov_count
    R = cfg.sym_cutoff
    if k * cfg.degree(mono) > D:
        return None
    img = [0] * cfg.ngens
    for i in range(n0):
        img[i] = k * mono[i]
    for r in range(1, R + 1):
        e = mono[n0 + r - 1]
        if not e:
            continue
        if k * r > R:
            raise RingError(f"cutoff too small: Psi^{k}(N{r}) needs N{k * r}")
        img[n0 + k * r - 1] += e
    return tuple(img)


def filtration_degree(a):
    return a.filtration_degree()


def exp_filtered(a):
    """Truncated exponential of an element of positive filtration."""
    if a.filtration_degree() < 1:
        raise RingError("exp needs an argument of positive filtration degree")
    cfg = a.config
    result = cfg.one()
    term = cfg.one()
    for j in range(1, cfg.truncation_degree + 1):
        term = (term * a).scale(Fraction(1, j))
        if not term:
            break
        result = result + term
    return result


def log_filtered(u):
    """Truncated logarithm of an element of the form ``1 + positive``."""
    cfg = u.config
    x = u - 1
    if x.filtration_degree() < 1:
        raise RingError("log needs an argument congruent to 1 modulo the positive part")
    result = cfg.zero()
    power = cfg.one()
    for j in range(1, cfg.truncation_degree + 1):
        power = power * x
        if not power:
            break
        result = result + power.scale(Fraction((-1) ** (j + 1), j))
    return result


# -- printing ------------------------------------------------------------------


def format_mono(cfg, mono):
    parts = []
    for name, e in zip(cfg.names, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_term(coeff, factors):
    """Signed term text, e.g. ``-3*N1*q^2/2``; returns (sign, body)."""
    sign = "-" if coeff < 0 else "+"
    c = abs(coeff)
    num, den = c.numerator, c.denominator
    body = "*".join(f for f in factors if f)
    if not body:
        text = str(num) if den == 1 else f"{num}/{den}"
    else:
        text = body if num == 1 else f"{num}*{body}"
        if den != 1:
            text = f"{text}/{den}"
    return sign, text


def join_terms(terms):
    if not terms:
        return "0"
    out = []
    for i, (sign, text) in enumerate(terms):
        if i == 0:
            out.append(text if sign == "+" else "-" + text)
        else:
            out.append(sign + text)
    return "".join(out)


def mono_sort_key(cfg, mono):
    return (cfg.degree(mono), tuple(-e for e in mono))


def format_lambda(a):
    cfg = a.config
    items = sorted(a.terms.items(), key=lambda mc: mono_sort_key(cfg, mc[0]))
    return join_terms([format_term(c, [format_mono(cfg, m)]) for m, c in items])
