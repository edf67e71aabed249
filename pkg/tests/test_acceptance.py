"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import itertools
import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from isochron.classify import Harmonic, RationalPotential, SingularIsochronous, classify, reconstruct
from isochron.corpus import crossvalidate
from isochron.dynamics import CMSystem, integrate_cm, isotropic_oscillator_reduction_demo, random_cm_start
from isochron.exactpoly import Polynomial as P
from isochron.period import (
    default_scan_range,
    delta_criterion,
    divergence_probe,
    find_well,
    isochronicity_scan,
    period_at,
)
from isochron.potentials import algebraic_example, builtin, from_rational, singular
from isochron.quantum import (
    QuantumPotential,
    extrapolated_levels,
    fd_ladder,
    spectrum_shooting,
)

SQRT2PI = math.sqrt(2) * math.pi


def test_01_theorem_round_trip(criterion):
    omega = [F(1, 2), F(1), F(2), F(9, 2), F(8)]
    c_sq = [F(1, 4), F(1), F(7)]
    shift = [F(-2), F(0), F(3, 2)]
    offset = [F(-1), F(0), F(5)]
    grid = list(itertools.product(omega, c_sq, shift, offset))
    bad = [v for v in (SingularIsochronous(*g) for g in grid) if classify(reconstruct(v)) != v]
    criterion(1, len(grid) == 135 and not bad, f"{len(grid)} grid points, {len(bad)} mismatches")


def test_02_unit_normalisation(criterion):
    v = classify(RationalPotential(P([0, 0, 1]), P([1])))
    u = from_rational(RationalPotential(P([0, 0, 1]), P([1])))
    w = find_well(u)
    errs = [abs(period_at(u, w, E).period - SQRT2PI) for E in (0.1, 1, 7, 100)]
    ok = v == Harmonic(F(2), F(0), F(0)) and v.period == pytest.approx(SQRT2PI, abs=1e-15) and max(errs) <= 1e-9
    criterion(2, ok, f"omega_sq = {v.omega_sq}, max |T - sqrt(2) pi| = {max(errs):.2e}")


def test_03_family_isochronicity(criterion):
    rng = random.Random(2024)
    worst_spread, worst_T = 0.0, 0.0
    for _ in range(20):
        v = SingularIsochronous(F(rng.randint(1, 40), rng.randint(1, 5)), F(rng.randint(1, 40), rng.randint(1, 5)),
                                F(rng.randint(-9, 9), rng.randint(1, 3)), F(rng.randint(-9, 9), rng.randint(1, 3)))
        u = from_rational(reconstruct(v))
        w = find_well(u)
        e_lo, e_hi = default_scan_range(w)
        assert (e_hi - w.u_min) / (e_lo - w.u_min) >= 100
        res = isochronicity_scan(u, w, e_lo, e_hi, 20)
        worst_spread = max(worst_spread, res.spread)
        worst_T = max(worst_T, max(abs(s.period / v.period - 1) for s in res.samples))
    ok = worst_spread <= 1e-8 and worst_T <= 1e-8
    criterion(3, ok, f"20 members, max spread {worst_spread:.2e}, max |T/(2pi/omega) - 1| {worst_T:.2e}")


def test_04_branch_difference(criterion):
    u = singular(0.5, 1.0)
    w = find_well(u)
    closed = math.sqrt(3 + math.sqrt(7)) - math.sqrt(3 - math.sqrt(7))
    harmonic = math.sqrt(2 * (3 - math.sqrt(2)))
    d = delta_criterion(u, w, 3.0, math.pi)
    q = builtin("quartic")
    wq = find_well(q)
    dq = delta_criterion(q, wq, 1.0, period_at(q, wq, 1.0).period)
    gap = abs(dq.delta - dq.delta_harmonic)
    ok = (abs(closed - harmonic) <= 1e-8 and abs(d.delta - closed) <= 1e-8
          and abs(d.delta - d.delta_harmonic) <= 1e-8 and gap >= 0.3)
    criterion(4, ok, f"singular |delta - harmonic| = {abs(d.delta - d.delta_harmonic):.2e}, quartic gap = {gap:.3f}")


def test_05_algebraic_example(criterion):
    u = algebraic_example()
    w = find_well(u)
    res = isochronicity_scan(u, w, 0.01, 0.24, 10)
    t_err = max(abs(s.period - SQRT2PI) for s in res.samples)
    criterion(5, res.spread <= 1e-6 and t_err <= 1e-6, f"spread {res.spread:.2e}, max |T - sqrt(2) pi| {t_err:.2e}")


def test_06_barrier_divergence(criterion):
    u = builtin("double_well", 1.0)
    w = find_well(u, 1.0)
    probe = divergence_probe(u, w, 6)
    periods = [t for _, t in probe]
    energies = [w.e_max * (1 - e) + w.u_min * e for e, _ in probe]
    ok = (np.allclose(energies, [1 - 10.0 ** -k for k in range(1, 7)], rtol=0, atol=1e-15)
          and all(b > a for a, b in zip(periods, periods[1:])) and periods[-1] / periods[0] >= 2)
    criterion(6, ok, f"T(k=1..6) = {', '.join(f'{t:.4f}' for t in periods)}")


def test_07_calogero_moser_period(criterion):
    worst, drift = 0.0, 0.0
    for n in (2, 3, 4):
        rng = np.random.default_rng(700 + n)
        system = CMSystem(n, 2.0, 0.5)
        for _ in range(5):
            tr = integrate_cm(system, random_cm_start(n, rng), system.period, tol=1e-10)
            worst = max(worst, tr.return_distance())
            drift = max(drift, tr.energy_drift)
    ok = worst <= 1e-5 and drift <= 1e-7
    criterion(7, ok, f"max return distance at pi/omega {worst:.2e}, max drift {drift:.2e}")


def test_08_isotropic_reduction(criterion):
    errs = []
    for omega, L in ((1.0, 1.0), (2.0, 3.0)):
        r = isotropic_oscillator_reduction_demo(omega, L)
        errs.append(max(abs(r.measured_period - math.pi / omega), abs(r.measured_period - r.quadrature_period)))
    criterion(8, max(errs) <= 1e-6, f"max period error {max(errs):.2e}")


def test_09_quantum_equidistance(criterion):
    cross = 0.0
    gap_err, ground_err = 0.0, 0.0
    for A in (0.25, 1.0, 4.0):
        for B in (-3 / 16, 0.0, 2.0, 6.0):
            qp = QuantumPotential(A, B)
            shoot = spectrum_shooting(qp, 4).eigenvalues
            if B >= 0:
                ev = extrapolated_levels(fd_ladder(qp, 4))
                cross = max(cross, float(np.max(np.abs(ev / shoot - 1))))
            else:
                ev = shoot
            gap_err = max(gap_err, float(np.max(np.abs(np.diff(ev) / (4 * math.sqrt(A)) - 1))))
            ground_err = max(ground_err, abs(ev[0] / (math.sqrt(A) * (2 + math.sqrt(1 + 4 * B))) - 1))
    ok = cross <= 1e-5 and gap_err <= 1e-4 and ground_err <= 1e-4
    criterion(9, ok, f"fd vs shooting {cross:.2e}, gap error {gap_err:.2e}, ground-state error {ground_err:.2e}")


def test_10_corpus_cross_validation(criterion):
    t0 = time.perf_counter()
    rep = crossvalidate(200, 7)
    elapsed = time.perf_counter() - t0
    ok = rep.disagreements == [] and elapsed <= 120
    t = rep.totals
    criterion(10, ok, f"{t['count']} potentials, {t['positive']} positive, {t['disagree']} disagreements, {elapsed:.1f} s")
