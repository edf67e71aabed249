"""
Input specs and output formats shared by the command-line tools.

Exact rationals travel as strings (``"-3/4"``).  CSV floats are written
with 17 significant digits; JSON floats use Python's shortest round-trip
repr, with non-finite values spelled ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .classify import RationalPotential
from .errors import SpecParseError, UnsupportedForExactClassification
from .exactpoly import Polynomial, parse_rational
from .potentials import BUILTINS, EvaluablePotential, builtin, from_rational


@dataclass(frozen=True)
class PotentialSpec:
    kind: str  # "rational" or "builtin"
    rational: Optional[RationalPotential] = None
    name: Optional[str] = None
    reduced: bool = False  # lowest-terms reduction changed the input

    def evaluable(self, well_hint: float | None = None) -> EvaluablePotential:
        if self.kind == "builtin":
            return builtin(self.name, well_hint)
        return from_rational(self.rational, well_hint)

    def exact(self) -> RationalPotential:
        if self.kind != "rational":
            raise UnsupportedForExactClassification(
                f"builtin potential {self.name!r} has no exact rational form")
        return self.rational

    def to_json(self) -> dict:
        if self.kind == "builtin":
            return {"kind": "builtin", "name": self.name}
        return {"kind": "rational", **self.rational.to_json()}

    @property
    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _locate(text: str, token: str) -> tuple[int, int]:
    """Line and column (1-based) of the first occurrence of ``token``, or (0, 0)."""
    i = text.find(token)
    if i < 0:
        return 0, 0
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


def _error(text: str, msg: str, token: str | None = None) -> SpecParseError:
    if token is not None:
        line, col = _locate(text, token)
        if line:
            return SpecParseError(f"line {line}, column {col}: {msg}")
    return SpecParseError(msg)


def _coefficients(text: str, data: dict, key: str) -> Polynomial:
    raw = data.get(key)
    if not isinstance(raw, list) or not raw:
        raise _error(text, f"{key!r} must be a non-empty array of rational strings", f'"{key}"')
    out = []
    for i, c in enumerate(raw):
        if not isinstance(c, str):
            raise _error(text, f"{key}[{i}] must be a string, got {c!r}", json.dumps(c))
        try:
            out.append(parse_rational(c))
        except ValueError:
            raise _error(text, f"{key}[{i}] = {c!r} is not a rational", json.dumps(c)) from None
    return Polynomial(out)


def parse_spec(text: str) -> PotentialSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise SpecParseError("line 1, column 1: a potential spec must be a JSON object")
    kind = data.get("kind", "builtin" if "name" in data else "rational")
    if kind == "builtin":
        name = data.get("name")
        if name not in BUILTINS:
            raise _error(text, f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}",
                         json.dumps(name) if isinstance(name, str) else '"name"')
        return PotentialSpec("builtin", name=name)
    if kind != "rational":
        raise _error(text, f"unknown kind {kind!r}", json.dumps(kind))
    p = _coefficients(text, data, "num")
    q = _coefficients(text, data, "den") if "den" in data else Polynomial([1])
    if q.is_zero():
        raise _error(text, "denominator is zero", '"den"')
    u = RationalPotential.reduced(p, q)
    return PotentialSpec("rational", rational=u, reduced=(u.p != p or u.q != q))


def load_spec(path: str | Path) -> PotentialSpec:
    if str(path) == "-":
        return parse_spec(sys.stdin.read())
    return parse_spec(Path(path).read_text())


def builtin_spec(name: str) -> PotentialSpec:
    if name not in BUILTINS:
        raise SpecParseError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    return PotentialSpec("builtin", name=name)


# -- output ----------------------------------------------------------------------

def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False)


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format_float(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_text(path: str | Path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# producers -----------------------------------------------------------------------

def scan_csv(samples) -> str:
    return csv_text(("energy", "period", "err_estimate", "diverged"),
                    ((s.energy, s.period, s.err_estimate, s.diverged) for s in samples))


def trajectory_csv(traj) -> str:
    n = traj.dim
    if n == 1:
        header = ["t", "q", "p"]
    else:
        header = ["t"] + [f"x{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
    return csv_text(header, ([t, *y] for t, y in zip(traj.t, traj.y)))


def spectrum_csv(eigenvalues) -> str:
    ev = list(map(float, eigenvalues))
    rows = [(k, e, None if k == 0 else e - ev[k - 1]) for k, e in enumerate(ev)]
    return csv_text(("n", "eigenvalue", "gap"), rows)
