"""Exact scalar arithmetic: rationals, Gaussian rationals, cyclotomic numbers.

Rational numbers are stdlib fractions (already in lowest terms with positive
denominator).  GaussianRational is a pair of fractions a + b*i.  Cyclotomic
holds an element of Q(zeta_m) as a coefficient vector on the power basis
1, zeta, ..., zeta^(m-1); equality and inversion reduce modulo the m-th
cyclotomic polynomial, so non-canonical representations compare correctly.

Everything in this module is exact.  Floating point appears only in the
explicit __complex__ conversions, which exist for callers that want a
numeric shadow of an exact value.
"""

from __future__ import annotations

import math
import re as _re
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class GaussianRational:
    """a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- basic predicates -------------------------------------------------

    def is_zero(self):
        return not self.re and not self.im

    @property
    def is_rational(self):
        return not self.im

    def as_fraction(self):
        if self.im:
            raise ValueError(f"{self} is not rational")
        return self.re

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison and hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return other == self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self):
        return (
            self.re.numerator,
            self.re.denominator,
            self.im.numerator,
            self.im.denominator,
        )

    # -- conversions ---------------------------------------------------------

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return gaussian_str(self)


I_GAUSS = GaussianRational(0, 1)


def gaussian_str(x):
    """Exact display string: '3', '-21i', '7+21i', '(7+21i)/8'."""
    if isinstance(x, (int, Fraction)):
        x = GaussianRational(x)
    re_, im_ = x.re, x.im
    if not im_:
        return str(re_)
    if not re_:
        num, den = im_.numerator, im_.denominator
        if num == 1:
            body = "i"
        elif num == -1:
            body = "-i"
        else:
            body = f"{num}i"
        return body if den == 1 else f"{body}/{den}"
    den = math.lcm(re_.denominator, im_.denominator)
    a = re_.numerator * (den // re_.denominator)
    b = im_.numerator * (den // im_.denominator)
    bs = "i" if b == 1 else ("-i" if b == -1 else f"{b:+d}i")
    if b in (1, -1):
        bs = "+i" if b == 1 else "-i"
    body = f"{a}{bs}"
    return body if den == 1 else f"({body})/{den}"


# -- cyclotomic polynomials ----------------------------------------------


def _poly_div_exact(num, den):
    """Divide integer polynomials exactly (den monic, ascending coeffs)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        out[k - dd] = c
        if c:
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Integer coefficients of Phi_m, ascending, monic, degree phi(m)."""
    if m < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def euler_phi(m):
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_mod_cyclotomic(coeffs, m):
    """Reduce a length-m Fraction vector (poly in zeta_m) mod Phi_m."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    work = list(coeffs)
    for k in range(len(work) - 1, deg - 1, -1):
        c = work[k]
        if c:
            work[k] = _ZERO
            for j in range(deg):
                work[k - deg + j] -= c * phi[j]
    return tuple(work[:deg])


class Cyclotomic:
    """Element of Q(zeta_m) on the power basis 1, zeta, ..., zeta^(m-1)."""

    __slots__ = ("order", "coeffs", "_canon")

    def __init__(self, order, coeffs):
        if order < 1:
            raise ValueError("order must be positive")
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > order:
            raise ValueError("coefficient vector longer than order")
        cs.extend([_ZERO] * (order - len(cs)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def root_of_unity(cls, m, k=1):
        c = [_ZERO] * m
        c[k % m] = _ONE
        return cls(m, c)

    @classmethod
    def from_rational(cls, x, order=1):
        c = [_ZERO] * order
        c[0] = _as_fraction(x)
        return cls(order, c)

    @classmethod
    def from_gaussian(cls, g, order=4):
        if order % 4:
            raise ValueError("embedding Q(i) needs 4 | order")
        c = [_ZERO] * order
        c[0] = g.re
        c[order // 4] += g.im
        return cls(order, c)

    # -- promotion -----------------------------------------------------------

    def promote(self, order):
        """Re-express in Q(zeta_order); order must be a multiple of self.order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only promote to a multiple order")
        step = order // self.order
        c = [_ZERO] * order
        for k, v in enumerate(self.coeffs):
            if v:
                c[k * step] = v
        return Cyclotomic(order, c)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other, self.order)
        elif isinstance(other, GaussianRational):
            other = Cyclotomic.from_gaussian(other, math.lcm(self.order, 4))
        elif not isinstance(other, Cyclotomic):
            return None, None
        m = math.lcm(self.order, other.order)
        return self.promote(m), other.promote(m)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            return Cyclotomic(self.order, [f * x for x in self.coeffs])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        m = a.order
        out = [_ZERO] * m
        for j, x in enumerate(a.coeffs):
            if x:
                for k, y in enumerate(b.coeffs):
                    if y:
                        idx = j + k
                        if idx >= m:
                            idx -= m
                        out[idx] += x * y
        return Cyclotomic(m, out)

    __rmul__ = __mul__

    def conjugate(self):
        m = self.order
        out = [_ZERO] * m
        for k, v in enumerate(self.coeffs):
            if v:
                out[(m - k) % m] += v
        return Cyclotomic(m, out)

    def canonical(self):
        """Coefficients on the reduced basis 1, ..., zeta^(phi(m)-1)."""
        c = self._canon
        if c is None:
            c = _reduce_mod_cyclotomic(self.coeffs, self.order)
            object.__setattr__(self, "_canon", c)
        return c

    def compact(self):
        """Equal element re-stored on the reduced basis (small coefficients).

        Long exact eliminations can leave an element with huge unreduced
        power-basis coefficients even when its canonical form is tiny;
        compacting keeps later arithmetic fast.
        """
        return Cyclotomic(self.order, list(self.canonical()))

    def is_zero(self):
        if not any(self.coeffs):
            return True
        return not any(self.canonical())

    def inverse(self):
        # extended Euclid against Phi_m in Q[x]
        m = self.order
        phi = [Fraction(c) for c in cyclotomic_polynomial(m)]
        a = list(self.canonical())
        if not any(a):
            raise ZeroDivisionError("division by zero Cyclotomic")
        r0, r1 = phi, a
        s0, s1 = [_ZERO], [_ONE]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            if len(r1) == 1:
                inv = [c / r1[0] for c in s1]
                out = _reduce_mod_cyclotomic(
                    inv + [_ZERO] * (m - len(inv)) if len(inv) <= m else inv[:m], m
                )
                res = Cyclotomic(m, list(out) + [_ZERO] * (m - len(out)))
                return res
            q, r = _poly_divmod_frac(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, r
            s0, s1 = s1, s
            if not any(r1):
                raise ZeroDivisionError("zero divisor in cyclotomic field")

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            return Cyclotomic(self.order, [x / f for x in self.coeffs])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse().__mul__(other)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.canonical() == b.canonical()

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    # -- conversions -----------------------------------------------------------

    def to_rational(self):
        """Fraction value if the element is rational, else None."""
        c = self.canonical()
        if any(c[1:]):
            return None
        return c[0] if c else _ZERO

    def to_gaussian(self):
        """GaussianRational value if the element lies in Q(i), else None."""
        r = self.to_rational()
        if r is not None:
            return GaussianRational(r)
        if self.order % 4:
            return None
        half = Fraction(1, 2)
        conj = self.conjugate()
        re_part = (self + conj) * half
        re_rat = re_part.to_rational()
        if re_rat is None:
            return None
        i = Cyclotomic.root_of_unity(self.order, self.order // 4)
        im_part = (self - conj) * half * i.conjugate()
        im_rat = im_part.to_rational()
        if im_rat is None:
            return None
        return GaussianRational(re_rat, im_rat)

    def __complex__(self):
        out = 0j
        m = self.order
        for k, v in enumerate(self.coeffs):
            if v:
                ang = 2.0 * math.pi * k / m
                out += float(v) * complex(math.cos(ang), math.sin(ang))
        return out

    def __repr__(self):
        return f"Cyclotomic({self.order}, {list(self.coeffs)!r})"

    def __str__(self):
        return cyclotomic_str(self)


def _poly_divmod_frac(num, den):
    num = list(num)
    den = list(den)
    while den and not den[-1]:
        den.pop()
    dd = len(den) - 1
    lead = den[-1]
    q = [_ZERO] * max(len(num) - dd, 1)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] / lead
        if c:
            q[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    return q, num[:dd] if dd else [_ZERO]


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def cyclotomic_str(x):
    """Power-basis polynomial string, e.g. '1+2*z3' for sqrt(-3)."""
    g = x.to_gaussian()
    if g is not None:
        return gaussian_str(g)
    m = x.order
    terms = []
    for k, v in enumerate(x.canonical()):
        if not v:
            continue
        if k == 0:
            terms.append(str(v))
            continue
        if v == 1:
            coef = ""
        elif v == -1:
            coef = "-"
        else:
            coef = f"{v}*"
        power = f"z{m}" if k == 1 else f"z{m}^{k}"
        terms.append(coef + power)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


# -- universal helpers -------------------------------------------------------


def conj(x):
    """Complex conjugate for any supported exact scalar."""
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def is_zero(x):
    if isinstance(x, (int, Fraction)):
        return not x
    return x.is_zero()


def to_complex(x):
    if isinstance(x, (int, Fraction)):
        return complex(x)
    return complex(x)


def as_rational(x):
    """Fraction value of x, or None if x is irrational."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, GaussianRational):
        return x.re if not x.im else None
    if isinstance(x, Cyclotomic):
        return x.to_rational()
    return None


def as_gaussian(x):
    """GaussianRational value of x, or None if x is outside Q(i)."""
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, Cyclotomic):
        return x.to_gaussian()
    return None


def exact_str(x):
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, GaussianRational):
        return gaussian_str(x)
    if isinstance(x, Cyclotomic):
        return cyclotomic_str(x)
    raise TypeError(f"no exact string form for {type(x).__name__}")


_RAT_RE = _re.compile(r"^[+-]?\d+(?:/\d+)?$")
_IMAG_RE = _re.compile(r"^([+-]?)(\d*)i(?:/(\d+))?$")
_MIXED_RE = _re.compile(r"^\(?([+-]?\d+)([+-]\d*)i\)?(?:/(\d+))?$")
_CYC_TERM_RE = _re.compile(
    r"^([+-]?)(?:(\d+(?:/\d+)?)\*?)?z(\d+)(?:\^(\d+))?$|^([+-]?\d+(?:/\d+)?)$"
)


def parse_exact(s):
    """Parse the strings produced by exact_str back into exact scalars."""
    s = s.strip().replace(" ", "")
    if _RAT_RE.match(s):
        return Fraction(s)
    m = _IMAG_RE.match(s)
    if m:
        sign, digits, den = m.groups()
        num = int(digits) if digits else 1
        if sign == "-":
            num = -num
        return GaussianRational(0, Fraction(num, int(den) if den else 1))
    m = _MIXED_RE.match(s)
    if m and ("(" in s) == (")" in s):
        a, bs, den = m.groups()
        b = int(bs) if bs not in ("+", "-") else (1 if bs == "+" else -1)
        d = int(den) if den else 1
        return GaussianRational(Fraction(int(a), d), Fraction(b, d))
    if "z" in s:
        return _parse_cyclotomic(s)
    raise ValueError(f"cannot parse exact scalar from {s!r}")


def _parse_cyclotomic(s):
    # split into signed terms at top level (no parentheses in this grammar)
    terms = _re.findall(r"[+-]?[^+-]+(?:/\d+)?", s)
    # the regex above may split fractions; rebuild carefully
    parts = []
    buf = ""
    for ch in s:
        if ch in "+-" and buf and buf[-1] not in "*^/":
            parts.append(buf)
            buf = ch
        else:
            buf += ch
    if buf:
        parts.append(buf)
    order = 1
    for p in parts:
        m = _re.search(r"z(\d+)", p)
        if m:
            order = math.lcm(order, int(m.group(1)))
    total = Cyclotomic.from_rational(0, order)
    for p in parts:
        m = _CYC_TERM_RE.match(p)
        if not m:
            raise ValueError(f"cannot parse cyclotomic term {p!r}")
        sign, coef, zord, power, plain = m.groups()
        if plain is not None:
            total = total + Fraction(plain)
            continue
        c = Fraction(coef) if coef else _ONE
        if sign == "-":
            c = -c
        k = int(power) if power else 1
        total = total + Cyclotomic.root_of_unity(int(zord), k) * c
    return total


# -- square roots of integers inside cyclotomic fields -----------------------


def _factor_int(n):
    """Prime factorization of n >= 1 as {p: e} by trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def sqrt_in_cyclotomic(d):
    """An exact square root of the integer d as a Cyclotomic element.

    Uses quadratic Gauss sums: for an odd prime p the sum of
    legendre(a, p) * zeta_p^a equals sqrt(p) or i*sqrt(p) according to
    p mod 4.  The result is verified by exact squaring before return.
    """
    if d == 0:
        return Cyclotomic.from_rational(0, 1)
    neg = d < 0
    n = -d if neg else d
    fac = _factor_int(n)
    root = Cyclotomic.from_rational(1, 1)
    quarter_turns = 1 if neg else 0
    for p, e in fac.items():
        root = root * (p ** (e // 2))
        if e % 2 == 0:
            continue
        if p == 2:
            z8 = Cyclotomic.root_of_unity(8)
            root = root * (z8 + z8 ** 7)
        else:
            # gauss sum is sqrt(p) for p = 1 mod 4, i*sqrt(p) for p = 3
            root = root * _gauss_sum(p)
            if p % 4 == 3:
                quarter_turns -= 1
    # settle the leftover power of i without widening the field when the
    # power is even
    quarter_turns %= 4
    if quarter_turns == 2:
        root = -root
    elif quarter_turns:
        root = root * Cyclotomic.root_of_unity(4, quarter_turns)
    check = root * root
    if not (check - d).is_zero():
        raise ArithmeticError(f"gauss-sum square root failed for {d}")
    return root


def _gauss_sum(p):
    total = Cyclotomic.from_rational(0, p)
    for a in range(1, p):
        leg = pow(a, (p - 1) // 2, p)
        sign = 1 if leg == 1 else -1
        total = total + Cyclotomic.root_of_unity(p, a) * sign
    return total
