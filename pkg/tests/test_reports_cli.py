import json
import math
import subprocess
import sys

import numpy as np
import pytest

from paracocycle.cli import main, read_config
from paracocycle.errors import InvalidInputError
from paracocycle.reports import (ReportRecord, certified, estimate, strip_wall_time, write_csv)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_record_rejects_shared_keys():
    with pytest.raises(ValueError):
        ReportRecord("x", {}, certified={"a": certified(0, 1, "m")}, estimates={"a": estimate(0.5, "m")})


def test_record_serialization():
    rec = ReportRecord("x", {"t": -1.0}, certified={"p": certified(0.1, math.inf, "m")},
                       estimates={"e": estimate(np.float64(0.2), "h")})
    d = json.loads(rec.to_json())
    assert d["schema_version"] == 1
    assert d["certified"]["p"]["upper"] == "inf"
    assert d["certified"]["p"]["rounding"] == "outward"
    assert d["estimates"]["e"]["estimate"] is True
    assert "wall_time" in d and "wall_time" not in rec.to_dict(wall_time=False)
    assert rec.to_csv().splitlines()[0] == "key,lower,upper,value,estimate"


def test_float_round_trip_in_csv():
    x = 0.1 + 0.2
    text = write_csv(["v"], [[x]])
    assert float(text.splitlines()[1]) == x


def test_strip_wall_time():
    a = ReportRecord("x", {}, wall_time=1.0).to_json()
    b = ReportRecord("x", {}, wall_time=2.0).to_json()
    assert a != b and strip_wall_time(a) == strip_wall_time(b)


def test_pressure_anchor(capsys):
    code, out, _ = run(["pressure", "--t", "0", "--n-max", "8"], capsys)
    assert code == 0
    p = json.loads(out)["certified"]["pressure"]
    assert p["lower"] == p["upper"] == math.log(2)


def test_pressure_negative_and_positive(capsys):
    code, out, _ = run(["pressure", "--t", "-3", "--n-max", "16", "--no-induced"], capsys)
    seq = json.loads(out)["certified"]["fekete_sequence"]["lower"]
    assert all(x <= 0 for x in seq) and all(b >= a for a, b in zip(seq, seq[1:]))
    code, out, _ = run(["pressure", "--t", "1", "--n-max", "16"], capsys)
    seq = json.loads(out)["certified"]["fekete_sequence"]["upper"]
    assert all(b <= a for a, b in zip(seq, seq[1:]))


def test_pressure_with_induced_truncation(capsys):
    code, out, _ = run(["pressure", "--t", "-2", "--n-max", "6", "--no-induced", "--N", "3",
                        "--k-max", "3"], capsys)
    d = json.loads(out)
    b, e = d["certified"]["induced_truncated"], d["estimates"]["induced_transfer"]
    assert b["lower"] <= e["value"] <= b["upper"]


def test_critical_tstar_tprime(capsys):
    for which, lo, hi in (("tstar", -2.18, -2.17), ("tprime", -1.83, -1.82)):
        code, out, _ = run(["critical", "--which", which], capsys)
        d = json.loads(out)
        assert code == 0
        assert lo < d["certified"][which]["lower"] < d["certified"][which]["upper"] < hi
        assert d["diagnostics"]["inside_coarse_bracket"] is True


def test_measure_feasible_and_infeasible(capsys):
    code, out, _ = run(["measure", "--t", "-1.5", "--symbols", "100000", "--seeds", "4"], capsys)
    assert code == 0
    assert json.loads(out)["certified"]["pressure_witness"]["lower"] > 0
    code, out, err = run(["measure", "--t", "-1.9"], capsys)
    assert code == 1
    assert json.loads(out)["error"]["type"] == "InfeasibleError"


def test_gibbs_single_cylinder(capsys):
    code, out, _ = run(["gibbs", "--t", "-2.0", "--N", "1", "--P", "0"], capsys)
    d = json.loads(out)["estimates"]
    assert d["gibbs"]["value"]["weights"] == [[1.0]]
    assert d["return_time"]["value"] == 2.0


def test_verify_alias_and_exit(capsys):
    code, out, _ = run(["verify", "--suite", "lemma34", "--trials", "50"], capsys)
    assert code == 0
    assert json.loads(out)["certified"]["almost-additivity"]["value"] == 0


def test_validation_errors_exit_one(capsys):
    for argv in (["pressure"], ["pressure", "--t", "nan"], ["curve", "--step", "-1"],
                 ["verify", "--suite", "nope"], ["gibbs", "--t", "-2", "--P", "x"],
                 ["gibbs", "--t", "-2", "--P", "-1"], ["bogus"]):
        code, out, _ = run(argv, capsys)
        assert code == 1, argv
        assert json.loads(out)["error"]["exit_code"] == 1


def test_budget_exit_two(capsys):
    code, out, _ = run(["pressure", "--t", "-1", "--n-max", "24", "--no-induced",
                        "--budget-sec", "0.000001"], capsys)
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ResourceLimitError"


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nt = -3\nn-max = 4\ninduced = false\n")
    code, out, _ = run(["pressure", "--config", str(cfg)], capsys)
    d = json.loads(out)
    assert d["inputs"]["t"] == -3.0 and d["inputs"]["n_max"] == 4
    code, out, _ = run(["pressure", "--config", str(cfg), "--n-max", "5"], capsys)
    assert json.loads(out)["inputs"]["n_max"] == 5


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 3\n")
    with pytest.raises(InvalidInputError):
        main_args = ["pressure", "--t", "0", "--config", str(cfg)]
        from paracocycle.cli import parse_args
        parse_args(main_args)
    cfg.write_text("no equals sign\n")
    with pytest.raises(InvalidInputError):
        read_config(cfg)


def test_out_file_and_csv(tmp_path, capsys):
    path = tmp_path / "p.csv"
    code, out, _ = run(["pressure", "--t", "0", "--n-max", "3", "--csv", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text().startswith("key,lower,upper,value,estimate")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "paracocycle", "pressure", "--t", "0", "--n-max", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["command"] == "pressure"
