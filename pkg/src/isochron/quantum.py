"""
Spectra of ``L = -d^2/dx^2 + A x^2 + B/x^2`` on the half-line.

Two independent solvers:

* ``spectrum_fd``: second-order finite differences on a uniform grid, with
  the lowest eigenvalues of the tridiagonal matrix found by Sturm-count
  multisection.
* ``spectrum_shooting``: the regular power series at the origin is matched
  against the decaying solution at large x.  For ``-1/4 < B < 0`` the
  regular branch ``x**kappa`` with ``kappa = (1 + sqrt(1+4B))/2`` fixes the
  boundary condition at 0 (the Friedrichs extension).

The closed form ``E_n = sqrt(A) (4n + 2 + sqrt(1+4B))`` is exposed as
``closed_form_levels`` so tests can compare against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize
from scipy.integrate import solve_ivp

from .errors import (
    AsymptoticCutoffTooLarge,
    DomainTooSmall,
    GridTooCoarse,
    MatchingFailure,
    ParameterRangeError,
)

DEFAULT_POINTS = 2000
DEFAULT_TOL = 1e-10
DEVIATION_TOL = 1e-4  # extrapolated gap deviation counted as "tends to 0"
# error ratio under grid halving once asymptotic: 4 for smooth eigenfunctions,
# 2**(2 kappa - 1) when the x**kappa behaviour at 0 limits the order
RATIO_RANGE = (1.5, 8.0)
MULTISECTION = 128  # probe points per bracket per Sturm sweep
DECAY_MARGIN = 40.0  # extra sqrt(A) x_max^2 beyond 3 E/sqrt(A) in default cutoffs
MAX_EXPONENT = 600.0


@dataclass(frozen=True)
class QuantumPotential:
    """``u(x) = A x^2 + B/x^2 (+ perturbation(x))`` on ``x > 0``.

    ``perturbation`` is a test hook for non-family potentials such as
    ``x^2 + x^4``; only the finite-difference solver accepts it.
    """

    A: float
    B: float
    perturbation: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A > 0):
            raise ParameterRangeError(f"A must be positive, got {self.A!r}")
        if not (math.isfinite(self.B) and self.B > -0.25):
            raise ParameterRangeError(f"B must exceed -1/4, got {self.B!r}")

    @property
    def kappa(self) -> float:
        return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * self.B))

    @property
    def in_family(self) -> bool:
        return self.perturbation is None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = self.A * x * x + self.B / (x * x)
        if self.perturbation is not None:
            u = u + self.perturbation(x)
        return u

    def to_json(self) -> dict:
        d = {"A": self.A, "B": self.B}
        if self.label:
            d["label"] = self.label
        return d


def closed_form_levels(qp: QuantumPotential, m: int) -> np.ndarray:
    return math.sqrt(qp.A) * (4.0 * np.arange(m) + 2.0 + math.sqrt(1.0 + 4.0 * qp.B))


@dataclass(frozen=True)
class Discretization:
    method: str
    x_max: float
    n_points: Optional[int] = None
    step: Optional[float] = None
    x0: Optional[float] = None
    tol: Optional[float] = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    gaps: np.ndarray
    max_gap_deviation: float
    discretization: Discretization
    potential: Optional[QuantumPotential] = None

    @classmethod
    def build(cls, eigenvalues, discretization, potential=None) -> "SpectrumResult":
        ev = np.asarray(eigenvalues, dtype=float)
        gaps = np.diff(ev)
        return cls(ev, gaps, gap_deviation(gaps), discretization, potential)

    @property
    def mean_gap(self) -> float:
        return float(np.mean(self.gaps)) if len(self.gaps) else math.nan


def gap_deviation(gaps: np.ndarray) -> float:
    if len(gaps) == 0:
        return math.nan
    mean = float(np.mean(gaps))
    return float(np.max(np.abs(gaps - mean)) / mean)


def richardson(coarse, fine, order: float = 2.0, ratio: float = 2.0):
    """Eliminate the leading ``h**order`` term from two step sizes ``h`` and ``h/ratio``."""
    coarse, fine = np.asarray(coarse, dtype=float), np.asarray(fine, dtype=float)
    return fine + (fine - coarse) / (ratio ** order - 1.0)


def default_cutoff(qp: QuantumPotential, m: int) -> float:
    """Cutoff where u exceeds three times the m-th level plus a decay margin."""
    e_top = closed_form_levels(qp, m)[-1]
    s = math.sqrt(qp.A)
    return math.sqrt((3.0 * e_top + DECAY_MARGIN * s) / qp.A)


def _check_domain(qp: QuantumPotential, x_max: float, e_top: float):
    if not float(qp(x_max)) > 3.0 * e_top:
        raise DomainTooSmall(
            f"u(x_max) = {float(qp(x_max)):.6g} does not exceed 3 * {e_top:.6g}"
        )


# -- finite differences ---------------------------------------------------------

def sturm_count(diag: np.ndarray, off_sq: float, lam: np.ndarray) -> np.ndarray:
    """Eigenvalues below each ``lam`` of the tridiagonal matrix with constant off-diagonal.

    Counts negative pivots of the LDL^T factorization of ``T - lam``.
    """
    lam = np.asarray(lam, dtype=float)
    tiny = np.finfo(float).tiny ** 0.5
    count = np.zeros(lam.shape, dtype=np.int64)
    q = diag[0] - lam
    for d in diag[1:]:
        q = np.where(q == 0.0, tiny, q)
        count += q < 0
        q = d - lam - off_sq / q
    count += q < 0
    return count


def lowest_eigenvalues(diag: np.ndarray, off: float, m: int, rtol: float = 4e-16) -> np.ndarray:
    """Lowest ``m`` eigenvalues of a symmetric tridiagonal matrix by multisection."""
    n = len(diag)
    if m > n:
        raise ParameterRangeError(f"requested {m} eigenvalues of a {n}x{n} matrix")
    # Gershgorin bounds
    lo = float(np.min(diag) - 2.0 * abs(off))
    hi = float(np.max(diag) + 2.0 * abs(off))
    off_sq = off * off
    a = np.full(m, lo)
    b = np.full(m, hi)
    k = np.arange(m)
    frac = np.linspace(0.0, 1.0, MULTISECTION + 2)[1:-1]
    while True:
        width = b - a
        if np.all(width <= rtol * np.maximum(np.abs(a), np.abs(b)) + 1e-300):
            break
        probes = a[:, None] + width[:, None] * frac[None, :]
        counts = sturm_count(diag, off_sq, probes)
        # eigenvalue k lies where the count first exceeds k
        above = counts > k[:, None]
        first = np.where(above.any(axis=1), above.argmax(axis=1), MULTISECTION)
        new_a = np.where(first > 0, probes[k, np.maximum(first - 1, 0)], a)
        new_b = np.where(first < MULTISECTION, probes[k, np.minimum(first, MULTISECTION - 1)], b)
        if np.array_equal(new_a, a) and np.array_equal(new_b, b):
            break  # float resolution reached
        a, b = new_a, new_b
    return 0.5 * (a + b)


def _fd_levels(qp: QuantumPotential, m: int, x_max: float, n: int) -> np.ndarray:
    h = x_max / n
    x = h * np.arange(1, n)  # psi(0) = psi(x_max) = 0
    diag = 2.0 / (h * h) + qp(x)
    return lowest_eigenvalues(diag, -1.0 / (h * h), m)


def spectrum_fd(qp: QuantumPotential, m: int, grid: tuple[float, int] | None = None,
                check: bool = True) -> SpectrumResult:
    """Lowest ``m`` levels from second-order finite differences.

    The grid is ``x_k = k * x_max / n_points`` with Dirichlet conditions at 0
    and ``x_max``.  With ``check`` the run is repeated on a half and a
    quarter of the points; unless successive differences shrink at a
    consistent algebraic rate, the discretization error is not yet in its
    asymptotic regime and the grid is rejected as too coarse.
    """
    if qp.B < 0:
        raise ParameterRangeError("finite differences need B >= 0; use the shooting solver")
    if m < 1:
        raise ParameterRangeError("m must be at least 1")
    x_max, n = grid if grid is not None else (default_cutoff(qp, m), DEFAULT_POINTS)
    n = int(n)
    if m > n / 10:
        raise GridTooCoarse(f"m = {m} exceeds n_points/10 = {n / 10:g}")
    _check_domain(qp, x_max, closed_form_levels(qp, m)[-1])

    ev = _fd_levels(qp, m, x_max, n)
    _check_domain(qp, x_max, ev[-1])
    if check:
        quarter, half = (_fd_levels(qp, m, x_max, k) for k in (n // 4, n // 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (quarter - half) / (half - ev)
        if not np.all((ratio >= RATIO_RANGE[0]) & (ratio <= RATIO_RANGE[1])):
            raise GridTooCoarse(
                f"error ratios {np.round(ratio, 3).tolist()} under grid halving are not in "
                f"the asymptotic range {RATIO_RANGE}")
    disc = Discretization("fd", float(x_max), n_points=n, step=float(x_max / n))
    return SpectrumResult.build(ev, disc, qp)


def fd_ladder(qp: QuantumPotential, m: int, x_max: float | None = None, n0: int = DEFAULT_POINTS,
              levels: int = 2) -> list[SpectrumResult]:
    """``spectrum_fd`` on ``n0, 2 n0, ...`` points with a common cutoff."""
    x_max = default_cutoff(qp, m) if x_max is None else x_max
    return [spectrum_fd(qp, m, (x_max, n0 * 2 ** i), check=(i == 0)) for i in range(levels)]


def extrapolated_levels(ladder: Sequence[SpectrumResult]) -> np.ndarray:
    """Richardson limit of the two finest members of an fd ladder."""
    coarse, fine = ladder[-2], ladder[-1]
    ratio = coarse.discretization.step / fine.discretization.step
    return richardson(coarse.eigenvalues, fine.eigenvalues, 2.0, ratio)


# -- shooting ------------------------------------------------------------------

class _Shooter:
    """Regular outward and decaying inward solutions at trial energy E."""

    def __init__(self, qp: QuantumPotential, x_max: float, tol: float):
        self.qp = qp
        self.A, self.B, self.kappa = qp.A, qp.B, qp.kappa
        self.x_max = x_max
        self.tol = tol
        scale = qp.A ** -0.25
        # The series is summed to convergence, so x0 only needs E x0^2 small:
        # the first correction E x0^2 / (2(2 kappa + 1)) stays below 0.05 for
        # every level requested here.
        self.x0 = 0.05 * scale
        # potential minimum, or the oscillator length when B <= 0
        self.x_match = max(scale, (max(qp.B, 0.0) / qp.A) ** 0.25)

    def rhs(self, x, y, E):
        return (y[1], (self.A * x * x + self.B / (x * x) - E) * y[0])

    def series(self, E: float, x: float) -> tuple[float, float]:
        """``psi = x^kappa sum c_k x^(2k)`` and its derivative at ``x``."""
        k2 = 2.0 * self.kappa
        c_prev, c = 0.0, 1.0  # c_{k-1}, c_k
        s, ds = 0.0, 0.0
        x2 = x * x
        pw = 1.0
        for k in range(200):
            if k > 0:
                # 2k (2 kappa + 2k - 1) c_k = A c_{k-2} - E c_{k-1}
                c_prev, c = c, (self.A * c_prev - E * c) / (2 * k * (k2 + 2 * k - 1))
            term = c * pw
            s += term
            ds += (self.kappa + 2 * k) * term
            pw *= x2
            if k > 3 and abs(term) <= 1e-18 * abs(s):
                break
        xk = x ** self.kappa
        return xk * s, xk * ds / x

    def outward(self, E: float, x_end: float, **kw):
        y0 = self.series(E, self.x0)
        norm = math.hypot(*y0)
        return solve_ivp(self.rhs, (self.x0, x_end), [y0[0] / norm, y0[1] / norm], args=(E,),
                         method="DOP853", rtol=self.tol, atol=1e-300, **kw)

    def inward(self, E: float, x_end: float):
        s = math.sqrt(self.A)
        nu = E / (2.0 * s) - 0.5
        x = self.x_max
        y0 = [1.0, nu / x - s * x]
        return solve_ivp(self.rhs, (x, x_end), y0, args=(E,), method="DOP853",
                         rtol=self.tol, atol=1e-300)

    def count(self, E: float) -> int:
        """Zeros of the regular solution in (x0, x_max): levels below E."""
        event = lambda x, y, E: y[0]
        sol = self.outward(E, self.x_max, events=event)
        return len(sol.t_events[0])

    def mismatch(self, E: float) -> float:
        """Normalized Wronskian of the two solutions at the matching point."""
        a = self.outward(E, self.x_match).y[:, -1]
        b = self.inward(E, self.x_match).y[:, -1]
        return float((a[0] * b[1] - a[1] * b[0]) / (math.hypot(*a) * math.hypot(*b)))


def spectrum_shooting(qp: QuantumPotential, m: int, x_max: float | None = None,
                      tol: float = DEFAULT_TOL) -> SpectrumResult:
    if not qp.in_family:
        raise ParameterRangeError("the shooting solver needs the pure A x^2 + B/x^2 form")
    if not (1e-12 <= tol <= 1e-6):
        raise ParameterRangeError(f"tol {tol!r} outside [1e-12, 1e-6]")
    if m < 1:
        raise ParameterRangeError("m must be at least 1")
    x_max = default_cutoff(qp, m) if x_max is None else float(x_max)
    if 0.5 * math.sqrt(qp.A) * x_max * x_max > MAX_EXPONENT:
        raise AsymptoticCutoffTooLarge(
            f"x_max = {x_max:g}: inward solution would overflow")
    sh = _Shooter(qp, x_max, tol)
    if not sh.x0 < sh.x_match < x_max:
        raise DomainTooSmall(f"x_max = {x_max:g} does not exceed the matching point")

    # bracket the first m levels by node counting
    hi = 4.0 * math.sqrt(qp.A)
    while sh.count(hi) < m:
        hi *= 2.0
        if hi > 1e12:
            raise MatchingFailure("could not bracket the requested levels")
    _check_domain(qp, x_max, hi / 2.0)
    brackets = {}

    def split(a, ca, b, cb):
        if cb <= ca or ca >= m:
            return
        if cb - ca == 1:
            brackets[ca] = (a, b)
            return
        mid = 0.5 * (a + b)
        cm = sh.count(mid)
        split(a, ca, mid, cm)
        split(mid, cm, b, cb)

    split(0.0, 0, hi, sh.count(hi))
    levels = []
    for k in range(m):
        if k not in brackets:
            raise MatchingFailure(f"no bracket for level {k}")
        a, b = brackets[k]
        fa, fb = sh.mismatch(a), sh.mismatch(b)
        if fa * fb > 0:
            raise MatchingFailure(f"mismatch does not change sign on [{a:.6g}, {b:.6g}]")
        levels.append(optimize.brentq(sh.mismatch, a, b, xtol=tol * b, rtol=max(tol, 4e-16)))
    disc = Discretization("shooting", x_max, x0=sh.x0, tol=tol)
    return SpectrumResult.build(levels, disc, qp)


# -- reporting -------------------------------------------------------------------

@dataclass
class MemberReport:
    potential: Optional[QuantumPotential]
    method: str
    mean_gaps: list[float]
    deviations: list[float]
    ladder: list[dict]
    extrapolated_gap: Optional[float]
    extrapolated_deviation: Optional[float]
    trend: str
    flagged: bool

    def to_json(self) -> dict:
        return {
            "potential": self.potential.to_json() if self.potential else None,
            "method": self.method,
            "mean_gaps": self.mean_gaps,
            "deviations": self.deviations,
            "ladder": self.ladder,
            "extrapolated_gap": self.extrapolated_gap,
            "extrapolated_deviation": self.extrapolated_deviation,
            "trend": self.trend,
            "flagged": self.flagged,
        }


@dataclass
class EquidistanceReport:
    members: list[MemberReport]

    @property
    def flagged(self) -> list[MemberReport]:
        return [r for r in self.members if r.flagged]

    def to_json(self) -> dict:
        return {"members": [r.to_json() for r in self.members],
                "flagged": len(self.flagged)}


def _group_key(r: SpectrumResult):
    p = r.potential
    return (r.discretization.method, None if p is None else (p.A, p.B, p.label, id(p.perturbation)))


def equidistance_report(results: Sequence[SpectrumResult]) -> EquidistanceReport:
    """Gap statistics per potential, extrapolated across each discretization ladder.

    Results sharing a potential and method form a ladder.  Finite-difference
    ladders are Richardson-extrapolated from their two finest members;
    shooting ladders take the tightest tolerance.  A member is flagged when
    its extrapolated gap deviation exceeds ``DEVIATION_TOL``.
    """
    groups: dict = {}
    for r in results:
        if len(r.eigenvalues) < 3:
            raise ParameterRangeError("each result needs at least 3 eigenvalues")
        groups.setdefault(_group_key(r), []).append(r)

    members = []
    for (method, _), rs in groups.items():
        if method == "fd":
            rs = sorted(rs, key=lambda r: -r.discretization.step)
        else:
            rs = sorted(rs, key=lambda r: -r.discretization.tol)
        gaps = [r.mean_gap for r in rs]
        devs = [r.max_gap_deviation for r in rs]
        ladder = [r.discretization.to_json() for r in rs]
        if len(rs) < 2:
            members.append(MemberReport(rs[0].potential, method, gaps, devs, ladder,
                                        None, None, "insufficient data", False))
            continue
        if method == "fd":
            ev = extrapolated_levels(rs)
        else:
            ev = rs[-1].eigenvalues
        g = np.diff(ev)
        dev = gap_deviation(g)
        flagged = not dev <= DEVIATION_TOL
        trend = "not converging" if flagged else "converging"
        members.append(MemberReport(rs[0].potential, method, gaps, devs, ladder,
                                    float(np.mean(g)), dev, trend, flagged))
    return EquidistanceReport(members)
