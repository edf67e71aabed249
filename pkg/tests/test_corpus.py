import math
from fractions import Fraction as F

import pytest

from isochron.classify import RationalPotential, SingularIsochronous, reconstruct
from isochron.corpus import crossvalidate, evaluate, generate
from isochron.exactpoly import Polynomial as P


def test_strata_ratio_and_determinism():
    a = generate(40, 3)
    assert [s for s, _ in a[:4]] == ["family", "perturbed", "random", "random"]
    assert generate(40, 3) == a


def test_family_member_row():
    v = SingularIsochronous(F(9, 2), F(7, 4), F(-1), F(2))
    row = evaluate(reconstruct(v))
    assert row.agree and row.verdict["verdict"] == "singular"
    assert row.spread <= 1e-8


def test_perturbed_member_detected():
    u = reconstruct(SingularIsochronous(F(8), F(1), F(0), F(0)))
    pert = RationalPotential.reduced(u.p + P.monomial(3, F(1, 1000)), u.q)
    row = evaluate(pert)
    assert row.verdict == {"verdict": "not_isochronous", "reason": "OddShiftedCoefficients"}
    assert row.spread > 1e-6 and row.agree


def test_negative_without_well_agrees():
    row = evaluate(RationalPotential(P([0, 1]), P([1])))
    assert row.well is None and row.agree


def test_crossvalidate_small():
    rep = crossvalidate(50, 7)
    assert rep.disagreements == []
    assert rep.totals["positive"] >= 10
    digests = [r.digest for r in rep.rows]
    assert digests == sorted(digests)


def test_single_family_row():
    rep = crossvalidate(1, 1)
    (row,) = rep.rows
    assert row.stratum == "family" and row.agree
    assert row.spread <= 1e-8
