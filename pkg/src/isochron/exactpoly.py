"""
Exact univariate and (minimal) bivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` values stored densely in
ascending degree order.  The zero polynomial has an empty coefficient
tuple and degree ``NEG_INF``.

Text form
---------
A rational is ``"n"`` or ``"n/d"`` with an optional leading minus sign.
A polynomial is a list of such strings, index ``i`` holding the
coefficient of ``x**i``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonExactDivision, UndefinedGcd

Rational = Fraction
NEG_INF = float("-inf")

_RATIONAL_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")

Coercible = Union[int, Fraction, str]


def parse_rational(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"`` into a Fraction (lowest terms)."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    value = text.strip()
    if "/" in value and int(value.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(value)


def format_rational(r: Fraction) -> str:
    return str(Fraction(r))


def _coerce(c: Coercible) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(r: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    if r < 0 or not (_is_square(r.numerator) and _is_square(r.denominator)):
        return None
    return Fraction(math.isqrt(r.numerator), math.isqrt(r.denominator))


class Polynomial:
    """Immutable dense polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coercible] = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # construction helpers
    @classmethod
    def constant(cls, c: Coercible) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c: Coercible = 1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Polynomial":
        return cls(parse_rational(s) for s in items)

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    # basic properties
    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({self.to_strings()})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic
    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Coercible) -> "Polynomial":
        c = _coerce(c)
        return Polynomial(c * a for a in self.coeffs)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lc = 1 / other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise NonExactDivision(f"{self} is not divisible by {other} (remainder {r})")
        return q

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def shift(self, s: Coercible) -> "Polynomial":
        return poly_shift(self, s)

    # evaluation
    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int, float otherwise."""
        acc = 0 if isinstance(x, (int, Fraction)) else 0.0
        if isinstance(acc, float):
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
        else:
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _as_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (int, Fraction)):
        return Polynomial([p])
    raise TypeError(f"expected Polynomial, got {type(p).__name__}")


# module-level operations

def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.exact_div(b)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over Q."""
    if a.is_zero() and b.is_zero():
        raise UndefinedGcd("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
        # keep coefficient growth in check
        b = b.monic()
    return a.monic()


def poly_shift(p: Polynomial, s: Coercible) -> Polynomial:
    """Return ``p(x + s)`` via repeated synthetic division (Taylor shift)."""
    s = _coerce(s)
    if s == 0 or p.degree < 1:
        return p
    c = list(p.coeffs)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            c[k] += s * c[k + 1]
    return Polynomial(c)


def poly_sqrt(p: Polynomial) -> Polynomial | None:
    """Exact square root with positive leading coefficient, if one exists."""
    if p.is_zero():
        return p
    n = int(p.degree)
    if n % 2:
        return None
    top = rational_sqrt(p.lc)
    if top is None:
        return None
    m = n // 2
    r = [Fraction(0)] * (m + 1)
    r[m] = top
    two_top = 2 * top
    # coefficients of x^(m+k), k = m-1 .. 0, determine r[k]
    for k in range(m - 1, -1, -1):
        acc = p.coeffs[m + k]
        for i in range(k + 1, m):
            acc -= r[i] * r[m + k - i]
        r[k] = acc / two_top
    # remaining coefficients x^(m-1) .. x^0 must match
    for d in range(m - 1, -1, -1):
        acc = Fraction(0)
        for i in range(0, d + 1):
            acc += r[i] * r[d - i]
        if acc != p.coeffs[d]:
            return None
    return Polynomial(r)


def squarefree_part(p: Polynomial) -> Polynomial:
    """``p / gcd(p, p')`` made monic; same roots, all simple."""
    if p.degree < 1:
        return Polynomial([1]) if not p.is_zero() else p
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def rational_roots(p: Polynomial) -> list[Fraction]:
    """Rational roots of ``p`` (rational root test), sorted, without repetition."""
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    cs = list(p.coeffs)
    roots: set[Fraction] = set()
    # factor out x^k
    while cs and cs[0] == 0:
        roots.add(Fraction(0))
        cs.pop(0)
    if len(cs) <= 1:
        return sorted(roots)
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    a0, an = abs(ints[0]), abs(ints[-1])
    q = Polynomial(cs)
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and q(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [0]
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


class BivariatePolynomial:
    """Sparse polynomial in (x, z); only what the identity checker needs."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[tuple[int, int], Coercible] | None = None):
        clean = {}
        for key, c in (coeffs or {}).items():
            c = _coerce(c)
            if c != 0:
                clean[(int(key[0]), int(key[1]))] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePolynomial is immutable")

    @classmethod
    def from_x(cls, p: Polynomial) -> "BivariatePolynomial":
        return cls({(i, 0): c for i, c in enumerate(p.coeffs)})

    @classmethod
    def z(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def substitute_shift(cls, p: Polynomial, k: Coercible = 2) -> "BivariatePolynomial":
        """``p(x + k z)`` expanded in x and z."""
        k = _coerce(k)
        out: dict[tuple[int, int], Fraction] = {}
        for n, c in enumerate(p.coeffs):
            if c == 0:
                continue
            for j in range(n + 1):
                key = (n - j, j)
                out[key] = out.get(key, Fraction(0)) + c * math.comb(n, j) * k**j
        return cls(out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BivariatePolynomial(out)

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, Fraction(0)) + a * b
        return BivariatePolynomial(out)

    def __repr__(self):
        items = sorted(self.coeffs.items())
        return "BivariatePolynomial({" + ", ".join(f"{k}: {v}" for k, v in items) + "})"

    def to_json(self) -> list[list]:
        return [[i, j, format_rational(c)] for (i, j), c in sorted(self.coeffs.items())]
