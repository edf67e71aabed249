"""
Numeric views of one-dimensional potentials.

An :class:`EvaluablePotential` bundles ``U``, ``U'`` and what is known about
the domain (open interval, interior poles).  Rational potentials also carry
exact hooks: critical points come from the real roots of the numerator of
``U'`` and limits at infinity from the degrees of ``p`` and ``q``.  Other
potentials fall back to sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .classify import RationalPotential
from .exactpoly import Polynomial, poly_shift, rational_roots, squarefree_part

inf = math.inf


@dataclass(frozen=True)
class EvaluablePotential:
    eval: Callable[[float], float]
    eval_deriv: Callable[[float], float]
    domain: tuple[float, float] = (-inf, inf)
    well_hint: Optional[float] = None
    poles: tuple[float, ...] = ()
    name: str = "potential"
    # exact hooks (rational potentials); None means "sample numerically"
    critical_points: Optional[Callable[[], list[float]]] = field(default=None, repr=False)
    limit_at_infinity: Optional[Callable[[int], float]] = field(default=None, repr=False)
    source: Optional[RationalPotential] = field(default=None, repr=False)

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def with_hint(self, hint: float | None) -> "EvaluablePotential":
        return EvaluablePotential(
            self.eval, self.eval_deriv, self.domain, hint, self.poles, self.name,
            self.critical_points, self.limit_at_infinity, self.source,
        )


def real_roots(p: Polynomial) -> list[float]:
    """Distinct real roots of an exact polynomial, ascending.

    Rational roots are found exactly; the remaining factor is squarefree
    and handed to ``numpy.roots`` with a Newton polish.
    """
    if p.degree < 1:
        return []
    sf = squarefree_part(p)
    exact = rational_roots(sf)
    rest = sf
    for r in exact:
        rest = rest.exact_div(Polynomial([-r, 1]))
    out = [float(r) for r in exact]
    if rest.degree >= 1:
        cs = rest.float_coeffs()
        cands = np.roots(cs[::-1])
        d_cs = rest.derivative().float_coeffs()
        for z in cands:
            if abs(z.imag) > 1e-7 * max(1.0, abs(z.real)):
                continue
            x = float(z.real)
            for _ in range(4):
                fx = np.polyval(cs[::-1], x)
                dfx = np.polyval(d_cs[::-1], x)
                if dfx == 0:
                    break
                step = fx / dfx
                x -= step
                if abs(step) <= 1e-16 * max(1.0, abs(x)):
                    break
            out.append(x)
    return sorted(out)


def _horner(cs: list[float]):
    rev = cs[::-1]

    def f(y):
        acc = 0.0
        for c in rev:
            acc = acc * y + c
        return acc

    return f


def from_rational(u: RationalPotential, well_hint: float | None = None,
                  name: str = "rational") -> EvaluablePotential:
    """Float evaluation of ``p/q``, re-centred at a rational pole when one exists."""
    p, q = u.p, u.q
    center = Fraction(0)
    if q.degree >= 1:
        rr = rational_roots(q)
        if rr:
            center = rr[0]
    elif p.degree >= 2:
        rr = rational_roots(p.derivative())
        if rr:
            center = rr[len(rr) // 2]
    pt, qt = poly_shift(p, center), poly_shift(q, center)
    num = pt.derivative() * qt - pt * qt.derivative()
    fp, fq, fn = _horner(pt.float_coeffs()), _horner(qt.float_coeffs()), _horner(num.float_coeffs())
    c = float(center)

    def U(x):
        y = x - c
        return fp(y) / fq(y)

    def dU(x):
        y = x - c
        qy = fq(y)
        return fn(y) / (qy * qy)

    poles = tuple(r + c for r in real_roots(qt))
    crit = tuple(r + c for r in real_roots(num)) if not num.is_zero() else ()

    dp, dq = p.degree, q.degree
    lc_ratio = float(p.lc / q.lc) if not p.is_zero() else 0.0

    def limit(direction: int) -> float:
        if p.is_zero() or dp < dq:
            return 0.0
        if dp == dq:
            return lc_ratio
        sign = math.copysign(1.0, lc_ratio) * (direction ** int(dp - dq))
        return sign * inf

    return EvaluablePotential(
        eval=U, eval_deriv=dU, domain=(-inf, inf), well_hint=well_hint, poles=poles,
        name=name, critical_points=lambda: list(crit), limit_at_infinity=limit, source=u,
    )


def algebraic_example() -> EvaluablePotential:
    """Branch of ``(y + x)**2 = y`` through the origin, on ``x <= 1/4``.

    ``u(x) = (1 - 2x - sqrt(1 - 4x))/2``, written as ``2x**2/(1 - 2x + sqrt(1 - 4x))``
    to avoid cancellation near the minimum.  Turning points at energy ``y``
    are ``-y -+ sqrt(y)``.
    """

    def U(x):
        s = math.sqrt(max(1.0 - 4.0 * x, 0.0))
        return 2.0 * x * x / (1.0 - 2.0 * x + s)

    def dU(x):
        s = math.sqrt(1.0 - 4.0 * x)
        if s == 0.0:
            return inf
        # -1 + 1/s, rearranged
        return 4.0 * x / (s * (1.0 + s))

    return EvaluablePotential(U, dU, domain=(-inf, 0.25), well_hint=0.0, name="algebraic_example")


def from_polynomial(coeffs, name="polynomial", well_hint=None) -> EvaluablePotential:
    return from_rational(RationalPotential.polynomial(Polynomial(coeffs)), well_hint, name)


def harmonic(omega_sq: float = 1.0) -> EvaluablePotential:
    return EvaluablePotential(
        lambda x: 0.5 * omega_sq * x * x, lambda x: omega_sq * x, name="harmonic", well_hint=0.0,
    )


def singular(a: float, b: float) -> EvaluablePotential:
    """``a*x**2 + b/x**2`` on the positive half-line."""
    return EvaluablePotential(
        lambda x: a * x * x + b / (x * x),
        lambda x: 2 * a * x - 2 * b / (x * x * x),
        domain=(0.0, inf),
        name="singular",
    )


BUILTINS = ("algebraic_example", "double_well", "quartic", "anharmonic")


def builtin(name: str, well_hint: float | None = None) -> EvaluablePotential:
    if name == "algebraic_example":
        u = algebraic_example()
        return u if well_hint is None else u.with_hint(well_hint)
    if name == "double_well":
        return from_polynomial([1, 0, -2, 0, 1], name, well_hint)
    if name == "quartic":
        return from_polynomial([0, 0, 0, 0, 1], name, well_hint)
    if name == "anharmonic":
        return from_polynomial([0, 0, 1, 0, 1], name, well_hint)
    raise KeyError(f"unknown builtin potential {name!r}; choose from {', '.join(BUILTINS)}")
