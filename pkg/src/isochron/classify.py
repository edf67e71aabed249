"""
Exact decision procedure for rational isochronous potentials.

Up to a shift of x and an additive constant a rational potential has
energy-independent oscillation period only when it is

* harmonic:  ``U = omega_sq/2 * (x - s)**2 + k``, or
* singular:  ``U = omega_sq/8 * (x - s)**2 + c_sq/(x - s)**2 + k`` with ``c_sq > 0``.

In both cases the period is ``2*pi/sqrt(omega_sq)``.  :func:`classify`
matches these two canonical forms exactly over Q; the polynomial pair
(alpha, beta) with ``U = alpha**2/beta**2`` and the functional identity
behind it are available through :func:`check_functional_equation` and
:func:`solve_functional_equation_family`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import NotLowestTerms, NotReconstructible
from .exactpoly import (
    BivariatePolynomial,
    Coercible,
    Polynomial,
    _coerce,
    format_rational,
    parse_rational,
    poly_gcd,
    poly_shift,
    poly_sqrt,
    rational_sqrt,
)


@dataclass(frozen=True)
class RationalPotential:
    """``U = p/q`` in lowest terms with monic denominator."""

    p: Polynomial
    q: Polynomial

    def __post_init__(self):
        if self.q.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        if self.q.lc != 1:
            raise NotLowestTerms(f"denominator {self.q} is not monic")
        if not self.p.is_zero() and poly_gcd(self.p, self.q).degree > 0:
            raise NotLowestTerms(f"({self.p})/({self.q}) shares a common factor")

    @classmethod
    def reduced(cls, p: Polynomial, q: Polynomial) -> "RationalPotential":
        """Reduce ``p/q`` to lowest terms with monic denominator."""
        if q.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        if p.is_zero():
            return cls(Polynomial(), Polynomial([1]))
        g = poly_gcd(p, q)
        p, q = p.exact_div(g), q.exact_div(g)
        lc = q.lc
        return cls(p.scale(1 / lc), q.scale(1 / lc))

    @classmethod
    def polynomial(cls, p: Polynomial) -> "RationalPotential":
        return cls(p, Polynomial([1]))

    def shifted(self, s: Coercible) -> "RationalPotential":
        """The potential ``x -> U(x + s)``."""
        return RationalPotential(poly_shift(self.p, s), poly_shift(self.q, s))

    def plus_constant(self, k: Coercible) -> "RationalPotential":
        return RationalPotential(self.p + self.q.scale(k), self.q)

    def __call__(self, x):
        return self.p(x) / self.q(x)

    def to_json(self) -> dict:
        return {"num": self.p.to_strings(), "den": self.q.to_strings()}


class Refusal(str, enum.Enum):
    """Why a rational potential is not isochronous.

    ``NonPositiveCSquared`` covers ``c_sq < 0`` (the pole is repulsive
    toward the minimum only when ``c_sq > 0``); ``c_sq == 0`` would leave
    a common factor ``(x - s)**2`` and is excluded by lowest terms.
    """

    DenominatorDegree = "DenominatorDegree"
    DenominatorNotPerfectSquareOfLinear = "DenominatorNotPerfectSquareOfLinear"
    NumeratorDegree = "NumeratorDegree"
    OddShiftedCoefficients = "OddShiftedCoefficients"
    NonPositiveLeadingTerm = "NonPositiveLeadingTerm"
    NonPositiveCSquared = "NonPositiveCSquared"


@dataclass(frozen=True)
class Harmonic:
    omega_sq: Fraction
    shift: Fraction
    offset: Fraction

    @property
    def period(self) -> float:
        return 2 * math.pi / math.sqrt(self.omega_sq)


@dataclass(frozen=True)
class SingularIsochronous:
    omega_sq: Fraction
    c_sq: Fraction
    shift: Fraction
    offset: Fraction

    @property
    def period(self) -> float:
        return 2 * math.pi / math.sqrt(self.omega_sq)


@dataclass(frozen=True)
class NotIsochronous:
    reason: Refusal


Classification = Union[Harmonic, SingularIsochronous, NotIsochronous]


def is_isochronous(c: Classification) -> bool:
    return isinstance(c, (Harmonic, SingularIsochronous))


def classify(u: RationalPotential) -> Classification:
    """Decide exactly whether ``u`` is one of the two isochronous forms."""
    p, q = u.p, u.q
    dq = q.degree
    if dq == 0:
        if p.degree != 2:
            return NotIsochronous(Refusal.NumeratorDegree)
        a = p.coeffs[2]
        if a <= 0:
            return NotIsochronous(Refusal.NonPositiveLeadingTerm)
        shift = -p.coeffs[1] / (2 * a)
        return Harmonic(omega_sq=2 * a, shift=shift, offset=p(shift))

    if dq in (1, 2):
        # a simple pole can never be the square of a linear factor
        root = poly_sqrt(q) if dq == 2 else None
        if root is None or root.degree != 1:
            return NotIsochronous(Refusal.DenominatorNotPerfectSquareOfLinear)
        s = -root.coeffs[0] / root.coeffs[1]
        pt = poly_shift(p, s)
        if pt.degree != 4:
            return NotIsochronous(Refusal.NumeratorDegree)
        b0, b1, e, b3, a = pt.coeffs
        if b1 != 0 or b3 != 0:
            return NotIsochronous(Refusal.OddShiftedCoefficients)
        if a <= 0:
            return NotIsochronous(Refusal.NonPositiveLeadingTerm)
        if b0 <= 0:
            return NotIsochronous(Refusal.NonPositiveCSquared)
        return SingularIsochronous(omega_sq=8 * a, c_sq=b0, shift=s, offset=e)

    return NotIsochronous(Refusal.DenominatorDegree)


def reconstruct(c: Classification) -> RationalPotential:
    """Inverse of :func:`classify` on positive verdicts."""
    if isinstance(c, Harmonic):
        y = Polynomial([-c.shift, 1])
        p = (y * y).scale(c.omega_sq / 2) + Polynomial([c.offset])
        return RationalPotential(p, Polynomial([1]))
    if isinstance(c, SingularIsochronous):
        y2 = Polynomial([c.shift**2, -2 * c.shift, 1])
        p = (y2 * y2).scale(c.omega_sq / 8) + y2.scale(c.offset) + Polynomial([c.c_sq])
        return RationalPotential(p, y2)
    raise NotReconstructible(f"cannot rebuild a potential from {c!r}")


@dataclass(frozen=True)
class FunctionalEquationWitness:
    alpha: Polynomial
    beta: Polynomial
    holds: bool
    residual: BivariatePolynomial


def check_functional_equation(alpha: Polynomial, beta: Polynomial) -> FunctionalEquationWitness:
    """Test ``alpha(x+2z) - beta(x+2z) z == alpha(x) + beta(x) z`` identically."""
    z = BivariatePolynomial.z()
    lhs = BivariatePolynomial.substitute_shift(alpha, 2) - BivariatePolynomial.substitute_shift(beta, 2) * z
    rhs = BivariatePolynomial.from_x(alpha) + BivariatePolynomial.from_x(beta) * z
    residual = lhs - rhs
    return FunctionalEquationWitness(alpha, beta, residual.is_zero(), residual)


def solve_functional_equation_family(
    C: Coercible, C1: Coercible, C0: Coercible
) -> tuple[Polynomial, Polynomial]:
    """The polynomial solutions: beta linear, alpha its antiderivative plus C0."""
    C, C1, C0 = _coerce(C), _coerce(C1), _coerce(C0)
    alpha = Polynomial([C0, C1, C / 2])
    beta = Polynomial([C1, C])
    return alpha, beta


def potential_from_family(C: Coercible, C1: Coercible, C0: Coercible) -> RationalPotential:
    """``U = alpha**2 / beta**2`` reduced to lowest terms."""
    alpha, beta = solve_functional_equation_family(C, C1, C0)
    if beta.is_zero():
        raise ValueError("beta vanishes identically")
    return RationalPotential.reduced(alpha * alpha, beta * beta)


def square_witness(c: SingularIsochronous) -> tuple[Polynomial, Polynomial, Fraction] | None:
    """Exhibit ``U - k' = alpha**2 / beta**2`` in shifted coordinates.

    With ``A = omega_sq/8`` and ``y = x - shift`` the shifted potential obeys
    ``U - k' = alpha**2 / (A * beta**2)`` where ``alpha = A*y**2 + sqrt(A*c_sq)``
    and ``beta = y``, so ``alpha'`` is proportional to ``beta``.  Returns
    ``(alpha, beta, k')`` or None when ``sqrt(A*c_sq)`` is irrational.
    """
    a = c.omega_sq / 8
    r = rational_sqrt(a * c.c_sq)
    if r is None:
        return None
    shift_level = c.offset - 2 * r
    u = reconstruct(c)
    pt = poly_shift(u.p, c.shift)
    qt = poly_shift(u.q, c.shift)
    # a * (pt - shift_level * qt) == (a*y^2 + r)^2
    alpha = poly_sqrt((pt - qt.scale(shift_level)).scale(a))
    beta = poly_sqrt(qt)
    if alpha is None or beta is None:
        return None
    return alpha, beta, shift_level


# JSON form

def classification_to_json(c: Classification) -> dict:
    if isinstance(c, Harmonic):
        return {
            "verdict": "harmonic",
            "omega_sq": format_rational(c.omega_sq),
            "shift": format_rational(c.shift),
            "offset": format_rational(c.offset),
        }
    if isinstance(c, SingularIsochronous):
        return {
            "verdict": "singular",
            "omega_sq": format_rational(c.omega_sq),
            "c_sq": format_rational(c.c_sq),
            "shift": format_rational(c.shift),
            "offset": format_rational(c.offset),
        }
    return {"verdict": "not_isochronous", "reason": c.reason.value}


def classification_from_json(d: dict) -> Classification:
    verdict = d["verdict"]
    if verdict == "harmonic":
        return Harmonic(*(parse_rational(d[k]) for k in ("omega_sq", "shift", "offset")))
    if verdict == "singular":
        return SingularIsochronous(*(parse_rational(d[k]) for k in ("omega_sq", "c_sq", "shift", "offset")))
    if verdict == "not_isochronous":
        return NotIsochronous(Refusal(d["reason"]))
    raise ValueError(f"unknown verdict {verdict!r}")
