import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from lindyn.artifacts import report_schema, svg_plot
from lindyn.cli import main

SYSTEMS = Path(__file__).resolve().parent.parent / "demos" / "systems"


def run(argv, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)]) if "--report" not in argv else main(argv)
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def validate(report):
    jsonschema.validate(report, report_schema())


def test_classify_grid_exits_zero_with_valid_report(tmp_path):
    code, rep = run(["classify", "--system", str(SYSTEMS / "grid.json")], tmp_path)
    assert code == 0
    validate(rep)
    res = rep["result"]
    assert all(res[k]["verdict"] == "yes"
               for k in ("dissipative", "chaotic", "frequently_hypercyclic", "topologically_mixing"))
    assert rep["manifest"]["inputs"][str(SYSTEMS / "grid.json")]


def test_unknown_verdicts_exit_three(tmp_path):
    code, rep = run(["classify", "--system", str(SYSTEMS / "mixed_rates.json")], tmp_path)
    assert code == 3
    validate(rep)


def test_manifests_are_byte_identical(tmp_path):
    argv = ["sc", "--system", str(SYSTEMS / "grid.json"), "--window", "3"]
    out = tmp_path / "a.json"
    main(argv + ["--out", str(out)])
    first = out.read_bytes()
    main(argv + ["--out", str(out)])
    assert out.read_bytes() == first


def test_dn_writes_csv(tmp_path):
    code, rep = run(["dn", "--system", str(SYSTEMS / "line_w1.json"), "--range", "5",
                     "--csv", str(tmp_path / "dn.csv"), "--svg", str(tmp_path / "dn.svg")], tmp_path)
    assert code == 0
    validate(rep)
    rows = list(csv.DictReader(open(tmp_path / "dn.csv")))
    assert len(rows) == 11 and all(r["exact"] == "1" for r in rows)
    assert (tmp_path / "dn.svg").read_text().startswith("<svg")


@pytest.mark.parametrize("argv", [
    ["classify", "--system", "missing.json"],
    ["classify"],
    ["odometer", "period", "--cylinder", "[7]"],
    ["affine", "--a", "2", "--b", "0", "verify-star"],
    ["affine", "--a", "1", "--b", "1", "sc-witness"],
    ["shift", "classify", "--mode", "sideways"],
    ["nonsense"],
])
def test_input_errors_exit_two(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "r.json")]) == 2


def test_odometer_and_affine_commands(tmp_path):
    code, rep = run(["odometer", "period", "--cylinder", "[0,1,2]"], tmp_path)
    assert code == 0 and rep["result"]["N"] == 24
    validate(rep)
    code, rep = run(["affine", "--a", "1", "--b", "1", "sc-witness", "--B", "[0,1]",
                     "--csv", str(tmp_path / "w.csv")], tmp_path, "w.json")
    assert code == 0
    validate(rep)
    assert abs(rep["result"]["total_upper"] - 1) < 1e-9


def test_shift_and_br_commands(tmp_path):
    code, rep = run(["shift", "classify", "--mode", "unilateral", "--value", "2"], tmp_path)
    assert code == 0 and rep["result"]["frequently_hypercyclic"]["verdict"] == "yes"
    validate(rep)
    code, rep = run(["br-lemma", "--horizon", "1000"], tmp_path, "br.json")
    assert code == 0 and rep["result"]["max_beta"] <= 3 + 1e-9
    validate(rep)


def test_construct_fhc_and_density(tmp_path):
    vec = tmp_path / "x.json"
    rep_path = tmp_path / "fhc.json"
    code = main(["construct-fhc", "--system", str(SYSTEMS / "line_half.json"), "--horizon", "5000",
                 "--out", str(vec), "--report", str(rep_path)])
    assert code == 0
    rep = json.loads(rep_path.read_text())
    validate(rep)
    target = tmp_path / "t.json"
    target.write_text(json.dumps([{"orbit": 0, "index": 0, "amp": "1"}]))
    code, d = run(["density", "--system", str(SYSTEMS / "line_half.json"), "--vector", str(vec),
                   "--target", str(target), "--horizon", "5000"], tmp_path, "d.json")
    assert code == 0
    validate(d)
    assert d["result"]["lower_estimate"] > 0


def test_config_file_overrides_defaults(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dn_range": 2}))
    monkeypatch.setenv("LINDYN_CONFIG", str(cfg))
    run(["dn", "--system", str(SYSTEMS / "grid.json"), "--csv", str(tmp_path / "dn.csv")], tmp_path)
    assert len((tmp_path / "dn.csv").read_text().splitlines()) == 1 + 5
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["classify", "--system", str(SYSTEMS / "grid.json"), "--out", str(tmp_path / "r.json")]) == 2


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "lindyn.cli", "odometer", "measure", "--cylinder", "[0]"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]


def test_svg_plot_without_data():
    assert "no data" in svg_plot({"a": []}, "empty")
