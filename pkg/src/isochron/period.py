"""
Period function of a one-dimensional well.

``T(E) = sqrt(2) * integral dx / sqrt(E - U(x))`` between the turning
points.  The integral is computed after the substitution
``x = x1 + (x2 - x1) * (1 + sin(phi)) / 2``, which cancels the inverse
square-root singularity at simple turning points so that the integrand is
smooth on ``[-pi/2, pi/2]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize

from .errors import (
    AmbiguousWell,
    EnergyOutOfRange,
    NoBarrier,
    NoMinimumFound,
    NotAMinimum,
    QuadratureBudgetExceeded,
)
from .potentials import EvaluablePotential

inf = math.inf

ROOT_RTOL = 1e-13
QUAD_TOL = 1e-10
QUAD_LIMIT = 400
# near a barrier T(E) is only defined to ~eps/(e_max - E); monotonicity needs less
PROBE_TOL = 1e-8
ISOCHRONOUS_THRESHOLD = 1e-6
SCAN_POINTS = 4001


@dataclass(frozen=True)
class Well:
    x_min: float
    u_min: float
    left_limit: float
    right_limit: float
    e_max: float
    # "barrier", "pole", "end" or "infinity"
    left_kind: str = "infinity"
    right_kind: str = "infinity"

    def to_json(self) -> dict:
        return {
            "x_min": self.x_min,
            "u_min": self.u_min,
            "left_limit": self.left_limit,
            "right_limit": self.right_limit,
            "e_max": self.e_max,
            "left_kind": self.left_kind,
            "right_kind": self.right_kind,
        }


class TurningPair(NamedTuple):
    x1: float
    x2: float
    energy: float


@dataclass(frozen=True)
class PeriodSample:
    energy: float
    period: float
    err_estimate: float
    diverged: bool = False


class DeltaResult(NamedTuple):
    delta: float
    delta_harmonic: float


@dataclass(frozen=True)
class ScanResult:
    max_rel_period_spread: float
    samples: list[PeriodSample]

    @property
    def spread(self) -> float:
        return self.max_rel_period_spread


# ---------------------------------------------------------------------------
# well location


def _intervals(u: EvaluablePotential) -> list[tuple[float, float, str, str]]:
    """Pole-free open sub-intervals of the domain with their end kinds."""
    lo, hi = u.domain
    cuts = sorted(p for p in u.poles if lo < p < hi)
    edges = [lo] + cuts + [hi]
    kinds = ["infinity" if math.isinf(lo) else "end"] + ["pole"] * len(cuts) + [
        "infinity" if math.isinf(hi) else "end"
    ]
    return [(edges[i], edges[i + 1], kinds[i], kinds[i + 1]) for i in range(len(edges) - 1)]


def _sample_points(a: float, b: float, center: float, n: int = SCAN_POINTS) -> np.ndarray:
    if math.isfinite(a) and math.isfinite(b):
        t = np.linspace(0.0, 1.0, n + 2)[1:-1]
        return a + (b - a) * t
    if math.isinf(a) and math.isinf(b):
        th = np.linspace(-np.pi / 2, np.pi / 2, n + 2)[1:-1]
        return center + np.tan(th)
    th = np.linspace(0.0, np.pi / 2, n + 2)[1:-1]
    if math.isfinite(a):
        return a + np.tan(th)
    return b - np.tan(th)[::-1]


def _scan_critical_points(u: EvaluablePotential, a: float, b: float) -> list[float]:
    center = u.well_hint if u.well_hint is not None else 0.0
    xs = _sample_points(a, b, center)
    with np.errstate(all="ignore"):
        ds = np.array([_safe(u.eval_deriv, x) for x in xs])
    out = []
    for i in range(len(xs) - 1):
        d0, d1 = ds[i], ds[i + 1]
        if not (np.isfinite(d0) and np.isfinite(d1)):
            continue
        if d0 == 0.0:
            out.append(float(xs[i]))
        elif (d0 < 0) != (d1 < 0) and d1 != 0.0:
            out.append(optimize.brentq(u.eval_deriv, xs[i], xs[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps))
    return out


def _safe(f, x):
    try:
        return f(x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.nan


def _classified_critical_points(u: EvaluablePotential, a: float, b: float) -> list[tuple[float, str]]:
    """Critical points in (a, b) tagged 'min', 'max' or 'flat' (no sign change)."""
    if u.critical_points is not None:
        crit = sorted(x for x in u.critical_points() if a < x < b)
    else:
        crit = _scan_critical_points(u, a, b)
    if not crit:
        return []
    probes = []
    pts = [a] + crit + [b]
    for i in range(len(pts) - 1):
        left, right = pts[i], pts[i + 1]
        if math.isinf(left):
            m = right - max(1.0, abs(right))
        elif math.isinf(right):
            m = left + max(1.0, abs(left))
        else:
            m = 0.5 * (left + right)
        probes.append(math.copysign(1.0, _safe(u.eval_deriv, m)))
    out = []
    for i, x in enumerate(crit):
        before, after = probes[i], probes[i + 1]
        if before < 0 < after:
            out.append((x, "min"))
        elif before > 0 > after:
            out.append((x, "max"))
        else:
            out.append((x, "flat"))
    return out


def _side_limit(u: EvaluablePotential, x_min: float, bound: float, kind: str, direction: int) -> float:
    """Supremum of U approached monotonically from the minimum toward ``bound``."""
    if kind == "pole":
        return inf
    if kind == "end":
        v = _safe(u.eval, bound)
        return v if math.isfinite(v) else inf
    if u.limit_at_infinity is not None:
        return u.limit_at_infinity(direction)
    far = x_min + direction * 1e8 * max(1.0, abs(x_min))
    v = _safe(u.eval, far)
    u0 = u.eval(x_min)
    if not math.isfinite(v) or v - u0 > 1e6 * (1.0 + abs(u0)):
        return inf
    return v


def _wells_in(u, a, b, ka, kb) -> list[Well]:
    crit = _classified_critical_points(u, a, b)
    wells = []
    for i, (x, kind) in enumerate(crit):
        if kind != "min":
            continue
        left = next((c for c in reversed(crit[:i]) if c[1] == "max"), None)
        right = next((c for c in crit[i + 1:] if c[1] == "max"), None)
        if left is not None:
            ll, lk, el = left[0], "barrier", u.eval(left[0])
        else:
            ll, lk = a, ka
            el = _side_limit(u, x, a, ka, -1)
        if right is not None:
            rl, rk, er = right[0], "barrier", u.eval(right[0])
        else:
            rl, rk = b, kb
            er = _side_limit(u, x, b, kb, +1)
        wells.append(Well(float(x), float(u.eval(x)), float(ll), float(rl), float(min(el, er)), lk, rk))
    return wells


def find_wells(u: EvaluablePotential) -> list[Well]:
    """Every strict local minimum with its well, left to right."""
    out = []
    for a, b, ka, kb in _intervals(u):
        out.extend(_wells_in(u, a, b, ka, kb))
    return out


def find_well(u: EvaluablePotential, hint: float | None = None) -> Well:
    """Locate the well containing ``hint`` (or ``u.well_hint``).

    Without a hint the potential must have a single minimum per pole-free
    interval; the rightmost such well is returned.
    """
    hint = u.well_hint if hint is None else hint
    if hint is not None:
        for a, b, ka, kb in _intervals(u):
            if a < hint < b or (ka == "end" and hint == a) or (kb == "end" and hint == b):
                wells = _wells_in(u, a, b, ka, kb)
                if not wells:
                    raise NoMinimumFound(f"no minimum of {u.name} between {a} and {b}")
                for w in wells:
                    if w.left_limit < hint < w.right_limit or hint == w.x_min:
                        return w
                raise NotAMinimum(f"hint {hint} of {u.name} does not lie inside any well")
        raise NoMinimumFound(f"hint {hint} lies outside the domain of {u.name}")

    by_interval = [_wells_in(u, *iv) for iv in _intervals(u)]
    if not any(by_interval):
        raise NoMinimumFound(f"{u.name} has no local minimum")
    if any(len(ws) > 1 for ws in by_interval):
        xs = ", ".join(f"{w.x_min:.6g}" for ws in by_interval for w in ws)
        raise AmbiguousWell(f"{u.name} has several minima ({xs}); supply a well hint")
    return [ws for ws in by_interval if ws][-1][0]


# ---------------------------------------------------------------------------
# turning points and period


def _check_energy(w: Well, E: float) -> None:
    if not (w.u_min < E < w.e_max):
        raise EnergyOutOfRange(f"energy {E!r} outside ({w.u_min!r}, {w.e_max!r})")


def _bracket_outer(u: EvaluablePotential, w: Well, E: float, direction: int) -> tuple[float, float]:
    """Points (inner, outer) around the turning point on one side of the minimum."""
    bound = w.right_limit if direction > 0 else w.left_limit
    kind = w.right_kind if direction > 0 else w.left_kind
    inner = w.x_min
    if kind == "barrier" or (kind == "end" and math.isfinite(_safe(u.eval, bound))):
        return inner, bound
    if kind in ("pole", "end"):
        span = bound - w.x_min
        for k in range(1, 400):
            x = bound - span * 2.0 ** (-k)
            v = _safe(u.eval, x)
            if not math.isfinite(v) or v >= E:
                return inner, x
            inner = x
    else:
        step = 1e-2 * max(1.0, abs(w.x_min))
        for k in range(0, 1100):
            x = w.x_min + direction * step * 2.0 ** k
            v = _safe(u.eval, x)
            if not math.isfinite(v) or v >= E:
                return inner, x
            inner = x
    raise EnergyOutOfRange(f"no turning point of {u.name} at energy {E!r}")


def _solve_side(u: EvaluablePotential, w: Well, E: float, direction: int) -> float:
    inner, outer = _bracket_outer(u, w, E, direction)
    f = lambda x: u.eval(x) - E
    fo = _safe(f, outer)
    if not math.isfinite(fo):
        # pole or singular end: pull back until finite and above E
        lo_, hi_ = inner, outer
        for _ in range(200):
            mid = 0.5 * (lo_ + hi_)
            v = _safe(f, mid)
            if math.isfinite(v) and v >= 0:
                outer = mid
                break
            if math.isfinite(v):
                lo_ = mid
            else:
                hi_ = mid
        inner = lo_
    if f(outer) == 0.0:
        return outer
    a, b = (inner, outer) if inner < outer else (outer, inner)
    x = optimize.brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return x


def turning_points(u: EvaluablePotential, w: Well, E: float) -> TurningPair:
    _check_energy(w, E)
    x1 = _solve_side(u, w, E, -1)
    x2 = _solve_side(u, w, E, +1)
    return TurningPair(x1, x2, E)


def _period_integrand(u: EvaluablePotential, tp: TurningPair):
    x1, x2, E = tp
    span = x2 - x1
    slope1 = -u.eval_deriv(x1)
    slope2 = u.eval_deriv(x2)
    quarter = math.pi / 4

    def g(phi: float) -> float:
        if phi < 0.0:
            d = span * math.sin(quarter + 0.5 * phi) ** 2
            x, slope = x1 + d, slope1
        else:
            d = span * math.sin(quarter - 0.5 * phi) ** 2
            x, slope = x2 - d, slope2
        gap = E - u.eval(x)
        if d <= 1e-9 * span or gap <= 0.0:
            # first-order expansion at the turning point
            gap = slope * d
            if gap <= 0.0:
                return 0.0
        return math.cos(phi) / math.sqrt(gap)

    return g


def period_at(u: EvaluablePotential, w: Well, E: float, tol: float = QUAD_TOL) -> PeriodSample:
    """Period at energy E; flags divergence near a barrier."""
    tp = turning_points(u, w, E)
    g = _period_integrand(u, tp)
    factor = math.sqrt(2.0) * 0.5 * (tp.x2 - tp.x1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info, *rest = integrate.quad(
            g, -math.pi / 2, math.pi / 2, epsabs=tol, epsrel=tol, limit=QUAD_LIMIT, full_output=1
        )
    # quad appends a message only when it failed to converge
    if rest:
        if math.isfinite(w.e_max):
            return PeriodSample(E, inf, inf, True)
        raise QuadratureBudgetExceeded(f"quadrature for {u.name} at E={E!r}: {rest[0]}")
    return PeriodSample(E, factor * val, factor * err, False)


def delta_criterion(u: EvaluablePotential, w: Well, E: float, T_target: float) -> DeltaResult:
    """Turning-point separation vs. that of a harmonic well with period T_target."""
    tp = turning_points(u, w, E)
    harmonic = (T_target / math.pi) * math.sqrt(2.0 * (E - w.u_min))
    return DeltaResult(tp.x2 - tp.x1, harmonic)


def scan_energies(w: Well, e_lo: float, e_hi: float, n: int) -> np.ndarray:
    lo, hi = e_lo - w.u_min, e_hi - w.u_min
    if hi / lo >= 10.0:
        return w.u_min + np.geomspace(lo, hi, n)
    return np.linspace(e_lo, e_hi, n)


def isochronicity_scan(u: EvaluablePotential, w: Well, e_lo: float, e_hi: float,
                       n: int = 10) -> ScanResult:
    """Max relative deviation of T(E) from T(e_lo) over n energies."""
    if n < 3:
        raise ValueError("a scan needs at least 3 energies")
    if not (w.u_min < e_lo < e_hi < w.e_max):
        raise EnergyOutOfRange(f"scan range [{e_lo!r}, {e_hi!r}] not inside ({w.u_min!r}, {w.e_max!r})")
    samples = [period_at(u, w, float(E)) for E in scan_energies(w, e_lo, e_hi, n)]
    if any(s.diverged for s in samples):
        return ScanResult(inf, samples)
    t0 = samples[0].period
    spread = max(abs(s.period - t0) / t0 for s in samples)
    return ScanResult(spread, samples)


def divergence_probe(u: EvaluablePotential, w: Well, k_max: int = 6) -> list[tuple[float, float]]:
    """Periods at ``E = e_max (1 - 10^-k) + u_min 10^-k`` for k = 1..k_max."""
    if not math.isfinite(w.e_max):
        raise NoBarrier(f"the well of {u.name} at x={w.x_min:.6g} has no barrier")
    out = []
    for k in range(1, k_max + 1):
        eps = 10.0 ** (-k)
        E = w.e_max * (1.0 - eps) + w.u_min * eps
        out.append((eps, period_at(u, w, E, tol=PROBE_TOL).period))
    return out


def default_scan_range(w: Well, decades: float = 4.0) -> tuple[float, float]:
    """Energies above the minimum used for automated scans.

    Unbounded wells: ``[1e-2, 1e2]`` above ``u_min``.  Wells under a
    barrier: from ``1e-4`` to ``0.5`` of the depth.
    """
    if math.isfinite(w.e_max):
        depth = w.e_max - w.u_min
        return w.u_min + 1e-4 * depth, w.u_min + 0.5 * depth
    half = 10.0 ** (decades / 2)
    return w.u_min + 1.0 / half, w.u_min + half
