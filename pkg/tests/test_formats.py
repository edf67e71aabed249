import json
import math
from fractions import Fraction as F

import pytest

from isochron.classify import RationalPotential
from isochron.errors import SpecParseError, UnsupportedForExactClassification
from isochron.exactpoly import Polynomial as P
from isochron.formats import csv_text, dumps, jsonable, parse_spec, spectrum_csv


def test_rational_spec_reduced_on_load():
    spec = parse_spec('{"num": ["0", "0", "0", "0", "2"], "den": ["0", "0", "2"]}')
    assert spec.rational == RationalPotential(P([0, 0, 1]), P([1]))
    assert spec.reduced
    assert not parse_spec('{"num": ["0", "0", "1"]}').reduced


def test_builtin_spec():
    spec = parse_spec('{"kind": "builtin", "name": "double_well"}')
    assert spec.kind == "builtin"
    with pytest.raises(UnsupportedForExactClassification):
        spec.exact()
    assert spec.evaluable(1.0)(0.0) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "text,where",
    [
        ('{"num": ["1", "x"]}', "line 1, column 15"),
        ('{"num": ["1",\n  2]}', "line 2, column 3"),
        ('{"num": ["1"]\n "den": ["1"]}', "line 2, column 2"),
        ('{"kind": "builtin", "name": "cubic"}', "line 1, column 29"),
        ('{"num": ["1"], "den": ["0"]}', "denominator is zero"),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(SpecParseError, match=where):
        parse_spec(text)


def test_digest_is_canonical():
    a = parse_spec('{"num": ["0", "0", "1"], "den": ["1"]}')
    b = parse_spec('{"den": ["1"], "num": ["0", "0", "1"]}')
    assert a.digest == b.digest and len(a.digest) == 64


def test_json_non_finite_as_strings():
    assert jsonable({"a": math.inf, "b": -math.inf, "c": math.nan, "d": (1, 2.5)}) == {
        "a": "inf", "b": "-inf", "c": "nan", "d": [1, 2.5]}
    x = 0.1 + 0.2
    assert json.loads(dumps({"x": x}))["x"] == x  # shortest round trip


def test_csv_seventeen_digits():
    text = csv_text(["a", "b"], [(0.1, True), (1 / 3, False)])
    lines = text.splitlines()
    assert lines[1] == "0.10000000000000001,true"
    assert float(lines[2].split(",")[0]) == 1 / 3
    assert spectrum_csv([3.0, 7.0]).splitlines() == ["n,eigenvalue,gap", "0,3,", "1,7,4"]
