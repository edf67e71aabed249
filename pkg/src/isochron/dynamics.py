"""
Hamiltonian trajectories for 1-D wells and the Calogero-Moser system.

Integration uses an embedded Runge-Kutta pair of order 8 (DOP853) with
dense output.  Energy drift over the run is the accuracy proxy and is
checked against ``100 * tol``.  Crossing times for period measurement
are refined by root-finding on the dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize
from scipy.integrate import solve_ivp

from .errors import EnergyBlowup, InsufficientCrossings, IntegrationError, ParameterRangeError, StepUnderflow
from .period import find_well, period_at
from .potentials import EvaluablePotential, singular

DRIFT_FACTOR = 100.0
SUBSAMPLES_PER_STEP = 8


@dataclass(frozen=True)
class State1D:
    q: float
    p: float
    t: float = 0.0


@dataclass(frozen=True)
class StateND:
    x: tuple[float, ...]
    p: tuple[float, ...]
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        if len(self.x) != len(self.p):
            raise ValueError("positions and momenta differ in length")
        if any(b <= a for a, b in zip(self.x, self.x[1:])):
            raise ParameterRangeError("particle positions must be strictly increasing")


@dataclass(frozen=True)
class CMSystem:
    """``H = |p|^2/2 + omega^2 |x|^2/2 + C * sum_{i<j} (x_i - x_j)^-2``."""

    n: int
    omega: float
    C: float

    def __post_init__(self):
        if self.n < 2:
            raise ParameterRangeError("need at least two particles")
        if not self.omega > 0:
            raise ParameterRangeError("omega must be positive")
        if not self.C > 0:
            raise ParameterRangeError("only the repulsive case C > 0 is supported")

    @property
    def period(self) -> float:
        return math.pi / self.omega

    def forces(self, x: np.ndarray) -> np.ndarray:
        d = x[:, None] - x[None, :]
        np.fill_diagonal(d, np.inf)
        return -self.omega ** 2 * x + 2.0 * self.C * np.sum(d ** -3, axis=1)

    def energy(self, x: np.ndarray, p: np.ndarray) -> float:
        i, j = np.triu_indices(self.n, 1)
        return float(
            0.5 * p @ p + 0.5 * self.omega ** 2 * x @ x + self.C * np.sum((x[i] - x[j]) ** -2.0)
        )


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # rows are states (q..., p...)
    energy_drift: float
    measured_period: Optional[float] = None
    dense: Optional[Callable] = field(default=None, repr=False)
    step_times: Optional[np.ndarray] = field(default=None, repr=False)
    min_gap: Optional[float] = None

    @property
    def dim(self) -> int:
        return self.y.shape[1] // 2

    @property
    def samples(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.t, self.y))

    def return_distance(self, target: np.ndarray | None = None) -> float:
        """Scale-relative max-norm distance from the final state to ``target``.

        ``target`` defaults to the initial state (phase-space return).
        """
        y0, y1 = self.y[0], self.y[-1]
        ref = y0 if target is None else np.asarray(target, dtype=float)
        return float(np.max(np.abs(y1 - ref)) / max(1.0, float(np.max(np.abs(y0)))))

    def fine_times(self) -> np.ndarray:
        ts = self.step_times if self.step_times is not None else self.t
        sub = np.linspace(0.0, 1.0, SUBSAMPLES_PER_STEP + 1)[:-1]
        fine = (ts[:-1, None] + np.diff(ts)[:, None] * sub[None, :]).ravel()
        return np.append(fine, ts[-1])


def _run(rhs, y0, t0, t_end, tol, energy, n_out):
    if not (1e-13 <= tol <= 1e-6):
        raise ParameterRangeError(f"tol {tol!r} outside [1e-13, 1e-6]")
    scale = max(1.0, float(np.max(np.abs(y0))))
    sol = solve_ivp(
        rhs, (t0, t_end), y0, method="DOP853", rtol=tol, atol=tol * scale, dense_output=True,
    )
    if sol.status != 0:
        msg = str(sol.message)
        if "step size" in msg.lower():
            raise StepUnderflow(msg)
        raise IntegrationError(msg)
    if not np.all(np.isfinite(sol.y)):
        raise EnergyBlowup("non-finite state encountered")
    e0 = energy(np.asarray(y0))
    es = np.array([energy(col) for col in sol.y.T])
    if not np.all(np.isfinite(es)):
        raise EnergyBlowup("energy became non-finite")
    drift = float(np.max(np.abs(es - e0)) / max(abs(e0), 1e-300))
    if drift > DRIFT_FACTOR * tol:
        raise EnergyBlowup(f"relative energy drift {drift:.3g} exceeds {DRIFT_FACTOR * tol:.3g}")
    t = np.linspace(t0, t_end, n_out)
    y = sol.sol(t).T
    return Trajectory(t=t, y=y, energy_drift=drift, dense=sol.sol, step_times=sol.t)


def integrate_1d(u: EvaluablePotential, s0: State1D, t_end: float, tol: float = 1e-10,
                 n_out: int = 1001) -> Trajectory:
    """Integrate ``q' = p, p' = -U'(q)`` from ``s0`` to ``t_end``."""
    if not math.isfinite(u.eval(s0.q)):
        raise ParameterRangeError(f"initial position {s0.q!r} is at a singularity")

    def rhs(t, y):
        return (y[1], -u.eval_deriv(y[0]))

    def energy(y):
        return 0.5 * y[1] * y[1] + u.eval(y[0])

    return _run(rhs, np.array([s0.q, s0.p], dtype=float), s0.t, t_end, tol, energy, n_out)


def integrate_cm(sys: CMSystem, s0: StateND, t_end: float, tol: float = 1e-10,
                 n_out: int = 1001) -> Trajectory:
    if len(s0.x) != sys.n:
        raise ParameterRangeError(f"expected {sys.n} particles, got {len(s0.x)}")
    n = sys.n

    def rhs(t, y):
        x, p = y[:n], y[n:]
        return np.concatenate([p, sys.forces(x)])

    def energy(y):
        return sys.energy(y[:n], y[n:])

    y0 = np.array(s0.x + s0.p, dtype=float)
    traj = _run(rhs, y0, s0.t, t_end, tol, energy, n_out)
    xs = traj.dense(traj.fine_times())[:n]
    traj.min_gap = float(np.min(np.diff(xs, axis=0))) if n > 1 else math.inf
    return traj


def _upward_crossings(f: Callable[[float], float], times: np.ndarray) -> list[float]:
    vals = np.array([f(t) for t in times])
    out = []
    for i in range(len(times) - 1):
        a, b = vals[i], vals[i + 1]
        if a < 0.0 <= b:
            if b == 0.0:
                out.append(float(times[i + 1]))
            else:
                out.append(optimize.brentq(f, times[i], times[i + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps))
    # a crossing landing exactly on a grid point is seen once
    return sorted(set(out))


def measure_period(traj: Trajectory, section_q: float, coord: int = 0) -> float:
    """Mean interval between upward crossings of ``q = section_q``."""
    f = lambda t: float(traj.dense(t)[coord]) - section_q
    times = _upward_crossings(f, traj.fine_times())
    if len(times) < 2:
        raise InsufficientCrossings(f"{len(times)} upward crossing(s) of {section_q!r}")
    period = (times[-1] - times[0]) / (len(times) - 1)
    traj.measured_period = period
    return period


def crossing_periods(traj: Trajectory, section_q: float, coord: int = 0) -> np.ndarray:
    """Individual gaps between successive upward crossings."""
    f = lambda t: float(traj.dense(t)[coord]) - section_q
    return np.diff(_upward_crossings(f, traj.fine_times()))


def mirror_state(y: np.ndarray) -> np.ndarray:
    """``(x, p) -> (-reversed(x), -reversed(p))``, the ordered CM state after half a period."""
    n = len(y) // 2
    return np.concatenate([-y[:n][::-1], -y[n:][::-1]])


def random_cm_start(n: int, rng: np.random.Generator, min_gap: float = 0.3) -> StateND:
    """Collision-free start: gaps >= min_gap, momenta uniform in [-1, 1]."""
    gaps = min_gap + rng.uniform(0.0, 1.0, n - 1)
    x = np.concatenate([[0.0], np.cumsum(gaps)])
    x -= x.mean()
    x += rng.uniform(-0.5, 0.5)
    return StateND(tuple(x), tuple(rng.uniform(-1.0, 1.0, n)))


@dataclass(frozen=True)
class ReductionResult:
    effective_c_sq: float
    measured_period: Optional[float]
    quadrature_period: Optional[float]
    equilibrium: bool = False


def isotropic_oscillator_reduction_demo(omega: float, L: float, r0: float | None = None,
                                        periods: int = 10, tol: float = 1e-11) -> ReductionResult:
    """Radial motion of the planar isotropic oscillator.

    With angular momentum ``L`` the distance ``r`` moves in
    ``omega^2 r^2/2 + (L^2/2)/r^2``; its period is measured from the planar
    trajectory and compared with the quadrature period of that potential.
    ``r0`` defaults to twice the circular-orbit radius ``sqrt(L/omega)``.
    """
    if not omega > 0 or L == 0:
        raise ParameterRangeError("need omega > 0 and L != 0")
    c_eff = 0.5 * L * L
    r_circ = math.sqrt(abs(L) / omega)
    r0 = 2.0 * r_circ if r0 is None else float(r0)
    y0 = np.array([r0, 0.0, 0.0, L / r0])

    def rhs(t, y):
        return (y[2], y[3], -omega ** 2 * y[0], -omega ** 2 * y[1])

    def energy(y):
        return 0.5 * (y[2] ** 2 + y[3] ** 2) + 0.5 * omega ** 2 * (y[0] ** 2 + y[1] ** 2)

    t_end = periods * math.pi / omega
    traj = _run(rhs, y0, 0.0, t_end, tol, energy, 2001)
    radius = lambda t: math.hypot(*traj.dense(t)[:2])
    rs = np.array([radius(t) for t in traj.fine_times()])
    if rs.max() - rs.min() <= 1e-9 * r_circ:
        return ReductionResult(c_eff, None, None, equilibrium=True)

    times = _upward_crossings(lambda t: radius(t) - r_circ, traj.fine_times())
    if len(times) < 2:
        raise InsufficientCrossings("radial motion did not cross the circular radius twice")
    measured = (times[-1] - times[0]) / (len(times) - 1)

    u = singular(0.5 * omega ** 2, c_eff)
    w = find_well(u)
    quad = period_at(u, w, u.eval(r0)).period
    return ReductionResult(c_eff, measured, quad)
