import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from fiducial.cli import main
from fiducial.report import REGISTRY, RunConfig, check_seed, run_verify
from fiducial.serialize import complex_to_json


def _write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# --- convert ----------------------------------------------------------------


def test_rho_to_p(tmp_path, capsys):
    src = _write_json(tmp_path / "rho.json", {"rho": complex_to_json(np.diag([1, 0]))})
    code, out, _ = _run(["convert", "rho-to-p", src], capsys)
    d = json.loads(out)
    assert code == 0 and d["valid"] and d["type"] == "state"
    assert np.abs(np.array(d["entries"]) - [1, 0, 0.5, 0.5]).max() <= 1e-12


def test_p_to_rho_null(tmp_path, capsys):
    src = _write_json(tmp_path / "p.json", {"kind": "quantum", "n": 2, "type": "state", "entries": [0, 0, 0, 0]})
    code, out, _ = _run(["convert", "p-to-rho", src], capsys)
    d = json.loads(out)
    assert code == 0 and d["valid"]
    assert np.abs(np.array(d["rho"])).max() == 0.0


def test_p_to_rho_flags_invalid(tmp_path, capsys):
    src = _write_json(tmp_path / "p.json", {"kind": "quantum", "n": 2, "entries": [1, 1, 1, 1]})
    code, out, _ = _run(["convert", "p-to-rho", src], capsys)
    d = json.loads(out)
    assert code == 0 and d["valid"] is False and d["reason"]


def test_op_to_effect(tmp_path, capsys):
    src = _write_json(tmp_path / "a.json", {"operator": complex_to_json(np.eye(2))})
    out = tmp_path / "out.json"
    assert main(["convert", "op-to-effect", src, "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["type"] == "effect" and d["valid"]
    # the unit effect gives probability 1 on every normalized qubit state
    assert abs(np.dot(d["entries"], [1, 0, 0.5, 0.5]) - 1) <= 1e-12
    assert abs(np.dot(d["entries"], [0.5, 0.5, 1, 0.5]) - 1) <= 1e-12


def test_channel_to_z_identity(tmp_path, capsys):
    src = _write_json(tmp_path / "c.json", {"kraus": [complex_to_json(np.eye(2))]})
    code, out, _ = _run(["convert", "channel-to-z", src], capsys)
    assert code == 0
    assert np.allclose(json.loads(out)["entries"], np.eye(4), atol=1e-12)


def test_channel_to_z_rejects_transpose(tmp_path, capsys):
    choi = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            choi[2 * a + b, 2 * b + a] = 1.0
    src = _write_json(tmp_path / "t.json", {"choi": complex_to_json(choi)})
    code, out, err = _run(["convert", "channel-to-z", src], capsys)
    assert code == 1 and out == ""
    assert "-0.5" in err


def test_schema_mismatch_names_field(tmp_path, capsys):
    src = _write_json(tmp_path / "bad.json", {"kind": "quantum", "n": 2, "entries": [1, 0]})
    code, _, err = _run(["convert", "p-to-rho", src], capsys)
    assert code == 2 and "entries" in err


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = _run(["convert", "rho-to-p", str(p)], capsys)
    assert code == 2 and "invalid JSON" in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = _run(["convert", "rho-to-p", str(tmp_path / "nope.json")], capsys)
    assert code == 1


# --- figures ----------------------------------------------------------------


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_triangle_data(tmp_path):
    out = tmp_path / "tri.csv"
    assert main(["emit-figure-data", "triangle", "--resolution", "2", "--out", str(out)]) == 0
    rows = _read_csv(out)
    verts = {(float(r["p1"]), float(r["p2"])) for r in rows if r["kind"] == "vertex"}
    assert verts == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}
    grid = {(float(r["p1"]), float(r["p2"])): r["valid"] for r in rows if r["kind"] == "grid"}
    assert grid == {(0.0, 0.0): "1", (1.0, 0.0): "1", (0.0, 1.0): "1", (1.0, 1.0): "0"}


def test_ball_data(tmp_path):
    out = tmp_path / "ball.csv"
    assert main(["emit-figure-data", "ball", "--resolution", "2", "--out", str(out)]) == 0
    rows = _read_csv(out)
    assert list(rows[0]) == ["kind", "p_x+", "p_y+", "p_z+", "pure"]
    mesh = [r for r in rows if r["kind"] == "mesh"]
    interior = [r for r in rows if r["kind"] == "interior"]
    assert len(mesh) == 4 and len(interior) == 4
    for r in mesh:
        v = np.array([float(r[k]) for k in ("p_x+", "p_y+", "p_z+")]) - 0.5
        assert abs(np.linalg.norm(v) - 0.5) <= 1e-9 and r["pure"] == "1"
    for r in interior:
        v = np.array([float(r[k]) for k in ("p_x+", "p_y+", "p_z+")]) - 0.5
        assert np.linalg.norm(v) <= 0.5 + 1e-9


def test_figure_resolution_guard(tmp_path, capsys):
    code, _, _ = _run(["emit-figure-data", "ball", "--resolution", "1", "--out", str(tmp_path / "x.csv")], capsys)
    assert code == 1


# --- simulate ---------------------------------------------------------------


def test_simulate(tmp_path, capsys):
    cfg = _write_json(tmp_path / "sim.json", {"model": {"kind": "quantum", "n": 2}, "state": [0.5, 0.5, 1, 0.5], "n": 2000, "seed": 3})
    code, out, _ = _run(["simulate", "--config", cfg], capsys)
    d = json.loads(out)
    assert code == 0 and d["n"] == 2000 and set(d["counts"]) == {"1", "2", "null"}
    code, out2, _ = _run(["simulate", "--config", cfg], capsys)
    assert out2 == out
    code, csv_out, _ = _run(["simulate", "--config", cfg, "--format", "csv", "--n", "10"], capsys)
    assert csv_out.splitlines()[0] == "outcome,count,frequency,target"


def test_simulate_custom_instrument(tmp_path, capsys):
    cfg = _write_json(tmp_path / "sim.json", {
        "model": {"kind": "classical", "n": 2},
        "state": [0.25, 0.5],
        "instrument": {"transforms": [[[1, 0], [0, 1]]], "labels": ["seen"]},
        "n": 100,
    })
    code, out, _ = _run(["simulate", "--config", cfg], capsys)
    assert code == 0 and json.loads(out)["target"] == {"seen": 0.75, "null": 0.25}


def test_simulate_bad_key(tmp_path, capsys):
    cfg = _write_json(tmp_path / "sim.json", {"model": {"kind": "quantum", "n": 2}, "state": [0] * 4, "trials": 5})
    code, _, _ = _run(["simulate", "--config", cfg], capsys)
    assert code == 2


# --- verify -----------------------------------------------------------------


@pytest.fixture(scope="module")
def default_report():
    return run_verify(RunConfig())


def test_default_verify_passes(default_report):
    failing = [(r.name, r.measured, r.error) for r in default_report.records if not r.passed]
    assert not failing
    assert default_report.exit_code == 0
    assert [r.name for r in default_report.records] == sorted(REGISTRY)


def test_verify_cli_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    timing = tmp_path / "t.json"
    code = main(["verify", "--checks", "roundtrip,k_rank", "--format", "json", "--out", str(out), "--timing", str(timing)])
    d = json.loads(out.read_text())
    assert code == 0 and d["verdict"] == "pass"
    assert [c["name"] for c in d["checks"]] == ["k_rank", "roundtrip"]
    assert "runtime" not in d["checks"][0] and "timing" not in d
    assert set(json.loads(timing.read_text())) == {"k_rank", "roundtrip"}


def test_tight_tolerance_fails(tmp_path, capsys):
    cfg = _write_json(tmp_path / "c.json", {"checks": ["trace_formula"], "tolerances": {"trace_formula": 1e-20}})
    code, out, _ = _run(["verify", "--config", cfg], capsys)
    assert code == 1 and "FAIL" in out


def test_empty_check_list(tmp_path, capsys):
    cfg = _write_json(tmp_path / "c.json", {"checks": []})
    code, out, _ = _run(["verify", "--config", cfg, "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 0 and d["checks"] == [] and d["verdict"] == "pass"


@pytest.mark.parametrize(
    "cfg,fragment",
    [
        ({"bogus": 1}, "bogus"),
        ({"checks": ["nope"]}, "$.checks[0]"),
        ({"tolerances": {"nope": 1}}, "$.tolerances.nope"),
        ({"seed": -1}, "$.seed"),
        ({"theories": [{"kind": "quantum"}]}, "theories[0]"),
    ],
)
def test_config_errors(tmp_path, capsys, cfg, fragment):
    path = _write_json(tmp_path / "c.json", cfg)
    code, _, err = _run(["verify", "--config", path], capsys)
    assert code == 2 and fragment in err


def test_unknown_check_flag(capsys):
    code, _, _ = _run(["verify", "--checks", "nope"], capsys)
    assert code == 2


def test_verify_deterministic(tmp_path):
    cfg = RunConfig(checks=["frequency_convergence", "distinguishability", "affinity"], seed=9)
    a = run_verify(cfg).dumps()
    b = run_verify(cfg).dumps()
    assert a == b


def test_jobs_do_not_change_output(default_report):
    parallel = run_verify(RunConfig(jobs=4))
    assert parallel.dumps() == default_report.dumps()


def test_seeds_recorded(default_report):
    d = default_report.to_json()
    assert d["seeds"] == {name: check_seed(0, name) for name in REGISTRY}
    assert len(set(d["seeds"].values())) == len(REGISTRY)


def test_anchors_present():
    assert all(c.anchor.strip() for c in REGISTRY.values())


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fiducial", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("fiducial ")
