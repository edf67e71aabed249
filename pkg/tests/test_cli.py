import json
import math
import subprocess
import sys

import pytest

from isochron.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def spec(tmp_path):
    def make(num, den=("1",)):
        p = tmp_path / f"spec{len(list(tmp_path.iterdir()))}.json"
        p.write_text(json.dumps({"num": list(num), "den": list(den)}))
        return str(p)
    return make


def test_classify_examples(capsys, spec):
    code, out, _ = run(capsys, "classify", spec(["0", "0", "1"]))
    assert code == 0
    assert json.loads(out) == {"verdict": "harmonic", "omega_sq": "2", "shift": "0", "offset": "0"}
    code, out, _ = run(capsys, "classify", spec(["1", "0", "0", "0", "1"], ["0", "0", "1"]))
    assert json.loads(out)["verdict"] == "singular" and json.loads(out)["c_sq"] == "1"
    code, out, _ = run(capsys, "classify", spec(["0", "0", "0", "1"]))
    assert code == 0 and json.loads(out) == {"verdict": "not_isochronous", "reason": "NumeratorDegree"}


def test_classify_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"num": ["0",\n "1.5"]}')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 1 and "line 2, column 2" in err
    b = tmp_path / "b.json"
    b.write_text('{"kind": "builtin", "name": "quartic"}')
    assert run(capsys, "classify", str(b))[0] == 1
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 1


def test_scan_algebraic_example(capsys, tmp_path):
    csv_path = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--builtin", "algebraic_example", "--emin", "0.01",
                       "--emax", "0.24", "--csv", str(csv_path))
    s = json.loads(out)
    assert code == 0 and s["spread"] <= 1e-6
    assert s["mean_period"] == pytest.approx(math.sqrt(2) * math.pi, abs=1e-6)
    assert "divergence" not in s  # domain end, not a barrier
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "energy,period,err_estimate,diverged" and len(lines) == 11


def test_scan_double_well(capsys):
    assert run(capsys, "scan", "--builtin", "double_well")[0] == 2
    code, out, _ = run(capsys, "scan", "--builtin", "double_well", "--well-hint", "1")
    periods = [r["period"] for r in json.loads(out)["divergence"]]
    assert code == 0 and periods == sorted(periods) and len(periods) == 6


def test_scan_family_member(capsys, spec):
    # x^2/2 + 2/x^2 = (x^4 + 4) / (2 x^2)
    code, out, _ = run(capsys, "scan", spec(["4", "0", "0", "0", "1"], ["0", "0", "2"]))
    assert code == 0 and json.loads(out)["spread"] <= 1e-8


def test_scan_energy_out_of_range(capsys):
    assert run(capsys, "scan", "--builtin", "quartic", "--emin", "-1", "--emax", "2")[0] == 4


def test_delta(capsys, spec):
    code, out, _ = run(capsys, "delta", spec(["2", "0", "0", "0", "1/2"], ["0", "0", "1"]), "--energy", "3")
    d = json.loads(out)
    assert d["T_target"] == pytest.approx(math.pi)
    assert abs(d["difference"]) <= 1e-8
    code, out, _ = run(capsys, "delta", "--builtin", "quartic", "--energy", "1", "--period", "1")
    assert json.loads(out)["delta"] == pytest.approx(2.0)


def test_simulate_cm(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "simulate", "--cm", "2", "1.0", "1.0", "--x0", "-1,1", "--mom0", "0,0",
                       "--tend", "3.14159265358979", "--csv", str(csv_path))
    assert code == 0 and json.loads(out)["return_distance"] <= 1e-6
    assert csv_path.read_text().splitlines()[0] == "t,x1,x2,p1,p2"


def test_simulate_1d(capsys, spec):
    code, out, _ = run(capsys, "simulate", "--potential", spec(["2", "0", "0", "0", "1/2"], ["0", "0", "1"]),
                       "--q0", "2", "--tend", "31.5")
    assert code == 0 and json.loads(out)["measured_period"] == pytest.approx(math.pi, abs=1e-7)
    periods = []
    for q0 in ("1", "2"):
        _, out, _ = run(capsys, "simulate", "--builtin", "quartic", "--q0", q0, "--tend", "60", "--tol", "1e-11")
        periods.append(json.loads(out)["measured_period"])
    assert periods[0] / periods[1] == pytest.approx(2.0, abs=1e-4)


def test_simulate_tolerance_out_of_range(capsys):
    assert run(capsys, "simulate", "--builtin", "quartic", "--q0", "1", "--tend", "1", "--tol", "1e-3")[0] == 4


def test_spectrum(capsys, tmp_path):
    code, out, _ = run(capsys, "spectrum", "--A", "1", "--B", "2", "--m", "5", "--method", "fd")
    s = json.loads(out)
    assert code == 0 and s["mean_gap"] == pytest.approx(4.0, rel=1e-6)
    assert not s["report"]["flagged"]
    code, out, _ = run(capsys, "spectrum", "--A", "1", "--B", "-0.1875", "--m", "3", "--method", "shooting")
    assert json.loads(out)["eigenvalues"][0] == pytest.approx(2.5, rel=1e-8)
    assert run(capsys, "spectrum", "--A", "1", "--B", "-0.25")[0] == 4
    assert run(capsys, "spectrum", "--A", "1", "--B", "-0.1", "--method", "fd")[0] == 4


def test_crossvalidate_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "crossvalidate", "--count", "50", "--seed", "7", "--json", str(a), "--quiet")[0] == 0
    assert run(capsys, "crossvalidate", "--count", "50", "--seed", "7", "--json", str(b), "--quiet")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["disagreements"] == [] and rep["totals"]["positive"] >= 10


def test_usage_error_is_input_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["scan"])
    assert e.value.code == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "isochron", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "crossvalidate" in r.stdout
