import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from isochron.classify import (
    Harmonic,
    NotIsochronous,
    RationalPotential,
    Refusal,
    SingularIsochronous,
    check_functional_equation,
    classification_from_json,
    classification_to_json,
    classify,
    is_isochronous,
    potential_from_family,
    reconstruct,
    solve_functional_equation_family,
    square_witness,
)
from isochron.errors import NotLowestTerms, NotReconstructible
from isochron.exactpoly import BivariatePolynomial, Polynomial as P, poly_shift, poly_sqrt

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=9)
positive = st.fractions(min_value=F(1, 9), max_value=16, max_denominator=9)


def rp(p, q=(1,)):
    return RationalPotential(P(p), P(q))


# -- construction ----------------------------------------------------------------

def test_rejects_non_lowest_terms():
    with pytest.raises(NotLowestTerms):
        rp([0, 0, 0, 0, 1], [0, 0, 1])
    with pytest.raises(NotLowestTerms):
        rp([1], [0, 2])  # not monic
    assert RationalPotential.reduced(P([0, 0, 0, 0, 1]), P([0, 0, 1])) == rp([0, 0, 1])
    assert RationalPotential.reduced(P([2]), P([0, 2])) == rp([1], [0, 1])


# -- classify examples --------------------------------------------------------------

def test_unit_normalised_harmonic():
    c = classify(rp([0, 0, 1]))
    assert c == Harmonic(omega_sq=F(2), shift=F(0), offset=F(0))
    assert c.period == pytest.approx(math.sqrt(2) * math.pi, rel=1e-15)


def test_singular_example():
    c = classify(rp([1, 0, 0, 0, 1], [0, 0, 1]))
    assert c == SingularIsochronous(omega_sq=F(8), c_sq=F(1), shift=F(0), offset=F(0))


def test_harmonic_shift_and_offset():
    # 1/2 (x-1)^2 + 3 = 1/2 x^2 - x + 7/2
    assert classify(rp([F(7, 2), -1, F(1, 2)])) == Harmonic(F(1), F(1), F(3))


@pytest.mark.parametrize(
    "u,reason",
    [
        (rp([0, 0, 0, 1]), Refusal.NumeratorDegree),
        (rp([1], [0, 1]), Refusal.DenominatorNotPerfectSquareOfLinear),
        (rp([0, 0, -1]), Refusal.NonPositiveLeadingTerm),
        (rp([1], [1, 0, 1]), Refusal.DenominatorNotPerfectSquareOfLinear),
        (rp([1], [0, 0, 0, 1]), Refusal.DenominatorDegree),
        (rp([1, 1, 0, 0, 1], [0, 0, 1]), Refusal.OddShiftedCoefficients),
        (rp([1, 0, 0, 0, -1], [0, 0, 1]), Refusal.NonPositiveLeadingTerm),
        (rp([-1, 0, 0, 0, 1], [0, 0, 1]), Refusal.NonPositiveCSquared),
        (rp([1, 0, 1], [0, 0, 1]), Refusal.NumeratorDegree),
        (rp([0, 0, 1, 0, 1]), Refusal.NumeratorDegree),
    ],
)
def test_refusals(u, reason):
    assert classify(u) == NotIsochronous(reason)


# -- reconstruct -----------------------------------------------------------------

def test_reconstruct_examples():
    assert reconstruct(Harmonic(F(2), F(0), F(0))) == rp([0, 0, 1])
    assert reconstruct(SingularIsochronous(F(8), F(1), F(0), F(0))) == rp([1, 0, 0, 0, 1], [0, 0, 1])
    # (x-2)^4 + 5(x-2)^2 + 1 over (x-2)^2
    y = P([-2, 1])
    expected = rp((y ** 4 + (y * y).scale(5) + P([1])).coeffs, (y * y).coeffs)
    assert reconstruct(SingularIsochronous(F(8), F(1), F(2), F(5))) == expected


def test_reconstruct_refuses_negative_verdict():
    with pytest.raises(NotReconstructible):
        reconstruct(NotIsochronous(Refusal.NumeratorDegree))


OMEGA = [F(1, 2), F(1), F(2), F(8), F(9)]
CSQ = [F(1, 4), F(1), F(7)]
SHIFT = [F(-2), F(0), F(3, 2)]
OFFSET = [F(-1), F(0), F(5)]


def test_round_trip_grid():
    for w, c, s, k in itertools.product(OMEGA, CSQ, SHIFT, OFFSET):
        v = SingularIsochronous(w, c, s, k)
        assert classify(reconstruct(v)) == v
    for w, s, k in itertools.product(OMEGA, SHIFT, OFFSET):
        v = Harmonic(w, s, k)
        assert classify(reconstruct(v)) == v


@settings(max_examples=200, deadline=None)
@given(positive, positive, rationals, rationals, rationals)
def test_shift_and_offset_equivariance(w, c, s, k, t):
    v = SingularIsochronous(w, c, s, k)
    u = reconstruct(v)
    assert classify(u.shifted(t)) == SingularIsochronous(w, c, s - t, k)
    assert classify(u.plus_constant(t)) == SingularIsochronous(w, c, s, k + t)
    h = reconstruct(Harmonic(w, s, k))
    assert classify(h.shifted(t)) == Harmonic(w, s - t, k)
    assert classify(h.plus_constant(t)) == Harmonic(w, s, k + t)


def test_json_round_trip():
    for v in (Harmonic(F(2), F(0), F(0)), SingularIsochronous(F(9, 2), F(7), F(-3, 2), F(1)),
              NotIsochronous(Refusal.OddShiftedCoefficients)):
        assert classification_from_json(classification_to_json(v)) == v
    assert classification_to_json(Harmonic(F(2), F(0), F(0))) == {
        "verdict": "harmonic", "omega_sq": "2", "shift": "0", "offset": "0"}


# -- functional equation --------------------------------------------------------------

def test_functional_equation_examples():
    assert check_functional_equation(P([1, 1, F(1, 2)]), P([1, 1])).holds
    assert check_functional_equation(P([0, 0, 1]), P([0, 2])).holds
    w = check_functional_equation(P([0, 0, 0, 1]), P([0, 0, 3]))
    assert not w.holds
    assert w.residual == BivariatePolynomial({(0, 3): -4})


def test_family_examples():
    assert solve_functional_equation_family(1, 0, 0) == (P([0, 0, F(1, 2)]), P([0, 1]))
    assert solve_functional_equation_family(0, 1, 0) == (P([0, 1]), P([1]))
    assert solve_functional_equation_family(1, 1, 1) == (P([1, 1, F(1, 2)]), P([1, 1]))


@settings(max_examples=100, deadline=None)
@given(rationals, rationals, rationals)
def test_family_always_satisfies_identity(C, C1, C0):
    alpha, beta = solve_functional_equation_family(C, C1, C0)
    assert check_functional_equation(alpha, beta).holds


@settings(max_examples=100, deadline=None)
@given(rationals.filter(lambda r: r != 0), rationals, rationals)
def test_family_potentials_are_the_singular_form(C, C1, C0):
    # alpha = C/2 y^2 - g, beta = C y with y = x + C1/C
    u = potential_from_family(C, C1, C0)
    g = C1 * C1 / (2 * C) - C0
    v = classify(u)
    if g == 0:
        # alpha^2/beta^2 collapses to a harmonic potential
        assert isinstance(v, Harmonic)
    else:
        assert isinstance(v, SingularIsochronous)
        assert v.shift == -C1 / C
        assert v.omega_sq == 2
        assert v.c_sq == g * g / (C * C)


def test_harmonic_family_member():
    # C = 0: alpha = C1 x + C0, beta = C1 -> U = (x + C0/C1)^2
    assert classify(potential_from_family(0, 1, 3)) == Harmonic(F(2), F(-3), F(0))


@settings(max_examples=200, deadline=None)
@given(positive, positive, rationals, rationals)
def test_square_witness_soundness(A, r, s, k):
    # choose A, c_sq with A*c_sq a rational square
    c_sq = r * r / A
    v = SingularIsochronous(8 * A, c_sq, s, k)
    assert classify(reconstruct(v)) == v
    alpha, beta, level = square_witness(v)
    assert alpha.degree == 2 and beta.degree == 1
    ratio = alpha.derivative().coeff(1) / beta.coeff(1)
    assert alpha.derivative() == beta.scale(ratio)
    u = reconstruct(v)
    pt, qt = poly_shift(u.p, s), poly_shift(u.q, s)
    assert (pt - qt.scale(level)).scale(A) == alpha * alpha
    assert qt == beta * beta
    assert poly_sqrt(qt) == beta


def test_completeness_on_random_potentials():
    """Random potentials outside the canonical families are refused."""
    rng = random.Random(11)
    refused = 0
    for _ in range(1000):
        dp, dq = rng.randint(0, 6), rng.randint(0, 4)
        p = P([F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dp + 1)])
        q = P([F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dq)] + [1])
        if p.is_zero():
            continue
        u = RationalPotential.reduced(p, q)
        v = classify(u)
        if is_isochronous(v):
            # must then be exactly reproducible, i.e. genuinely canonical
            assert reconstruct(v) == u
        else:
            refused += 1
    assert refused > 900
