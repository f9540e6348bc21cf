"""Dense univariate polynomials over the rationals.

A polynomial ``a_0 + a_1 q + ... + a_n q^n`` is stored as the tuple
``(a_0, ..., a_n)`` of :class:`fractions.Fraction` with ``a_n != 0``;
the zero polynomial is the empty tuple.

Besides the :class:`QPoly` type this module holds a few helpers that work on
plain coefficient lists over any field-like type (rationals or cyclotomic
numbers): Taylor shifts and truncated power-series division.
"""

from fractions import Fraction


def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class QPoly:
    """Polynomial in one variable with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = _trim([Fraction(a) for a in coeffs])

    @classmethod
    def _raw(cls, coeffs):
        # coeffs must already be Fractions; only trailing zeros are trimmed
        p = object.__new__(cls)
        p.c = _trim(coeffs)
        return p

    @classmethod
    def monomial(cls, k, coeff=1):
        return cls._raw([Fraction(0)] * k + [Fraction(coeff)])

    # -- inspection -------------------------------------------------------

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_one(self):
        return self.c == (1,)

    def lc(self):
        return self.c[-1]

    def valuation(self):
        for i, a in enumerate(self.c):
            if a:
                return i
        return None

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __len__(self):
        return len(self.c)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == _trim([Fraction(other)])
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"QPoly({[str(a) for a in self.c]})"

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly([other])
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return QPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly._raw([-a for a in self.c])

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return QPoly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            s = Fraction(other)
            return QPoly._raw([a * s for a in self.c]) if s else QPoly()
        a, b = self.c, other.c
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = QPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by ``q**k`` (k >= 0) or divide exactly by ``q**-k``."""
        if k >= 0:
            return QPoly._raw([Fraction(0)] * k + list(self.c)) if self.c else self
        assert all(not a for a in self.c[:-k]), "inexact shift"
        return QPoly._raw(list(self.c[-k:]))

    def __divmod__(self, other):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        db = len(other.c) - 1
        inv = 1 / other.c[-1]
        if len(rem) - 1 < db:
            return QPoly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        bc = other.c
        for k in range(len(rem) - 1 - db, -1, -1):
            coef = rem[k + db] * inv
            if coef:
                quo[k] = coef
                for j in range(db + 1):
                    rem[k + j] -= coef * bc[j]
        return QPoly._raw(quo), QPoly._raw(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self):
        if not self.c:
            return self
        inv = 1 / self.c[-1]
        return QPoly._raw([a * inv for a in self.c])

    def normalized(self):
        """Scale so that the constant term is 1 (requires p(0) != 0)."""
        inv = 1 / self.c[0]
        return QPoly._raw([a * inv for a in self.c])

    # -- evaluation and substitutions ---------------------------------------

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def reverse(self, n=None):
        """``q**n * p(1/q)``; n defaults to the degree."""
        if n is None:
            n = self.degree
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.c):
            out[n - i] = a
        return QPoly._raw(out)

    def compose_power(self, k):
        """``p(q**k)``."""
        if k == 1 or not self.c:
            return self
        out = [Fraction(0)] * (k * self.degree + 1)
        for i, a in enumerate(self.c):
            out[k * i] = a
        return QPoly._raw(out)

    def derivative(self):
        return QPoly._raw([i * a for i, a in enumerate(self.c)][1:])


def gcd(a, b):
    """Monic gcd of two polynomials (zero if both vanish)."""
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and g monic."""
    r0, r1 = a, b
    s0, s1 = QPoly([1]), QPoly()
    t0, t1 = QPoly(), QPoly([1])
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def lcm(a, b):
    return (a * b).exact_div(gcd(a, b))


ONE = QPoly([1])
ONE_MINUS_Q = QPoly([1, -1])


def one_minus_q_power(k):
    """The polynomial ``1 - q**k``."""
    return QPoly._raw([Fraction(1)] + [Fraction(0)] * (k - 1) + [Fraction(-1)])


# -- generic coefficient-list helpers ------------------------------------------
#
# These operate on Python lists of elements of any field that supports
# + - * / with rationals mixed in (Fraction or CycloNumber).


def taylor_shift(coeffs, center, zero):
    """Coefficients of ``p(center + z)`` as a list in z."""
    out = [zero]
    for a in reversed(coeffs):
        # out <- out * (center + z) + a
        new = [zero] * (len(out) + 1)
        for i, b in enumerate(out):
            new[i] = new[i] + b * center
            new[i + 1] = new[i + 1] + b
        new[0] = new[0] + a
        out = new
    while len(out) > 1 and _is_zero(out[-1]):
        out.pop()
    return out


def _is_zero(x):
    return not x


def series_inverse(coeffs, n, zero):
    """First n coefficients of ``1/p`` where p(0) is invertible."""
    if n <= 0:
        return []
    inv0 = 1 / coeffs[0]
    out = [inv0]
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            acc = acc + coeffs[j] * out[k - j]
        out.append(-acc * inv0)
    return out


def series_mul(a, b, n, zero):
    """First n coefficients of the product of two series."""
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if _is_zero(x):
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


def binomial_series(alpha, n):
    """Coefficients of ``(1+u)**alpha`` up to ``u**(n-1)``."""
    alpha = Fraction(alpha)
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (alpha - k + 1) / k)
    return out
