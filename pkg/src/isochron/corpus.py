"""
Seeded corpus for cross-validating the exact classifier against the
numeric period oracle.

Strata by index ``i mod 4``: 0 is a reconstructed canonical-family member,
1 is a family member with ``x^3/1000`` added to the numerator, 2 and 3 are
random rational potentials (numerator degree up to ``max_deg``, denominator
degree 0 or 2) that have at least one well.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classify import (
    Harmonic,
    RationalPotential,
    SingularIsochronous,
    classification_to_json,
    classify,
    is_isochronous,
    reconstruct,
)
from .errors import IsochronError, NoMinimumFound
from .exactpoly import Polynomial
from .formats import PotentialSpec
from .period import ISOCHRONOUS_THRESHOLD, default_scan_range, find_wells, isochronicity_scan
from .potentials import from_rational

PERTURBATION = Fraction(1, 1000)
SCAN_N = 10
MAX_DRAWS = 200  # random candidates tried per row before giving up on a well


def _frac(rng: random.Random, lo: int, hi: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def _positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.randint(1, 4))


def family_member(rng: random.Random):
    """A canonical form with random exact parameters (one in four harmonic)."""
    shift, offset = _frac(rng, -3, 3, 2), _frac(rng, -3, 3, 2)
    if rng.random() < 0.25:
        return Harmonic(_positive(rng), shift, offset)
    return SingularIsochronous(_positive(rng), _positive(rng), shift, offset)


def perturbed_member(rng: random.Random) -> RationalPotential:
    u = reconstruct(family_member(rng))
    return RationalPotential.reduced(u.p + Polynomial.monomial(3, PERTURBATION), u.q)


def random_potential(rng: random.Random, max_deg: int) -> RationalPotential:
    while True:
        dp = rng.randint(2, max(2, max_deg))
        p = Polynomial([_frac(rng, -5, 5, 3) for _ in range(dp + 1)])
        if rng.random() < 0.5:
            q = Polynomial([1])
        else:
            q = Polynomial([_frac(rng, -4, 4, 2), _frac(rng, -4, 4, 2), 1])
        if not p.is_zero():
            return RationalPotential.reduced(p, q)


def generate(count: int, seed: int, max_deg: int = 6) -> list[tuple[str, RationalPotential]]:
    """``count`` (stratum, potential) pairs; deterministic in ``seed``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    out = []
    for i in range(count):
        s = i % 4
        if s == 0:
            out.append(("family", reconstruct(family_member(rng))))
        elif s == 1:
            out.append(("perturbed", perturbed_member(rng)))
        else:
            for _ in range(MAX_DRAWS):
                u = random_potential(rng, max_deg)
                if find_wells(from_rational(u)):
                    break
            out.append(("random", u))
    return out


@dataclass
class CorpusRow:
    spec: dict
    digest: str
    stratum: str
    verdict: dict
    spread: Optional[float]
    agree: bool
    well: Optional[dict] = None
    energy_range: Optional[tuple[float, float]] = None
    error: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "hash": self.digest,
            "stratum": self.stratum,
            "verdict": self.verdict,
            "spread": self.spread,
            "agree": self.agree,
            "well": self.well,
            "energy_range": list(self.energy_range) if self.energy_range else None,
            "error": self.error,
        }


@dataclass
class CorpusReport:
    rows: list[CorpusRow]
    seed: int
    threshold: float = ISOCHRONOUS_THRESHOLD
    disagreements: list[str] = field(init=False)

    def __post_init__(self):
        self.disagreements = [r.digest for r in self.rows if not r.agree]

    @property
    def totals(self) -> dict:
        pos = sum(1 for r in self.rows if r.verdict["verdict"] != "not_isochronous")
        return {
            "count": len(self.rows),
            "positive": pos,
            "negative": len(self.rows) - pos,
            "agree": len(self.rows) - len(self.disagreements),
            "disagree": len(self.disagreements),
        }

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "threshold": self.threshold,
            "totals": self.totals,
            "disagreements": self.disagreements,
            "rows": [r.to_json() for r in self.rows],
        }


def evaluate(u: RationalPotential, stratum: str = "") -> CorpusRow:
    """Classify ``u`` exactly and scan its well numerically.

    Agreement: positive verdict with spread within the threshold, negative
    verdict with spread above it, or negative verdict and no well.  With
    several wells the rightmost is scanned.
    """
    spec = PotentialSpec("rational", rational=u)
    verdict = classify(u)
    positive = is_isochronous(verdict)
    row = CorpusRow(spec.to_json(), spec.digest, stratum, classification_to_json(verdict), None, False)
    ev = from_rational(u)
    wells = find_wells(ev)
    if not wells:
        row.error = NoMinimumFound.__name__
        row.agree = not positive
        return row
    w = wells[-1]
    row.well = w.to_json()
    try:
        e_lo, e_hi = default_scan_range(w)
        row.energy_range = (e_lo, e_hi)
        row.spread = isochronicity_scan(ev, w, e_lo, e_hi, SCAN_N).spread
    except IsochronError as e:
        row.error = f"{type(e).__name__}: {e}"
        return row
    numeric = row.spread <= ISOCHRONOUS_THRESHOLD
    row.agree = numeric == positive
    return row


def crossvalidate(count: int, seed: int, max_deg: int = 6) -> CorpusReport:
    rows = [evaluate(u, s) for s, u in generate(count, seed, max_deg)]
    rows.sort(key=lambda r: r.digest)
    return CorpusReport(rows, seed)
