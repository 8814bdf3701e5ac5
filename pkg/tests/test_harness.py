import json
import subprocess
import sys

import pytest

from ratpoints.enumeration import CountSeries
from ratpoints.harness import ExperimentConfig, build_series, fit_exponent, run_experiment


def test_fit_examples():
    s = CountSeries("t", [(10, 10), (100, 100), (1000, 1000)])
    assert abs(fit_exponent(s).slope - 1.0) < 1e-12
    s2 = CountSeries("t", [(10, 100), (100, 10000), (1000, 1000000)])
    assert abs(fit_exponent(s2).slope - 2.0) < 1e-12
    with pytest.raises(ValueError, match="insufficient"):
        fit_exponent(CountSeries("t", [(10, 5), (100, 7)]))


def test_fit_skips_zero_counts():
    s = CountSeries("t", [(1, 0), (10, 10), (100, 100), (1000, 1000)])
    fr = fit_exponent(s)
    assert fr.points_used == 3
    assert abs(fr.slope - 1.0) < 1e-12


def test_fit_closed_form_parabola_counts():
    # M(t1 - t2^2; B) = 2*floor(sqrt(B)) + 1
    from math import isqrt

    entries = [(B, 2 * isqrt(B) + 1) for B in (100, 1000, 10000)]
    fr = fit_exponent(CountSeries("parabola", entries))
    assert abs(fr.slope - 0.5) < 0.02


def test_fit_rescale_invariance():
    s = CountSeries("t", [(10, 7), (100, 53), (1000, 431), (10000, 3701)])
    s10 = CountSeries("t", [(b, 10 * c) for b, c in s.entries])
    assert abs(fit_exponent(s).slope - fit_exponent(s10).slope) < 1e-9


def test_config_validation():
    cfg = ExperimentConfig(poly="x0*x2 - x1^2", function="N", bmax=16,
                           degree=3)
    with pytest.raises(ValueError, match="degree"):
        build_series(cfg)
    bad = ExperimentConfig(poly="x0*x2 - x1^2", function="N", bmax=16,
                           grid=[4, 4, 8])
    with pytest.raises(ValueError, match="increasing"):
        bad.resolved_grid()
    with pytest.raises(ValueError, match="empty"):
        ExperimentConfig(poly="x0", function="N", bmax=0).resolved_grid()


def test_run_experiment_deterministic_across_threads(tmp_path):
    blobs = []
    for threads in (1, 4):
        out = tmp_path / f"run{threads}"
        cfg = ExperimentConfig(poly="x0*x2 - x1^2", function="N", bmax=64,
                               grid_count=4, out_dir=str(out),
                               threads=threads, target_exponent=1.0)
        run_experiment(cfg)
        blobs.append(((out / "series.csv").read_bytes(),
                      (out / "report.json").read_bytes()))
    assert blobs[0] == blobs[1]
    report = json.loads(blobs[0][1])
    assert report["fit"]["slope"] > 0


def test_run_experiment_rerun_identical(tmp_path):
    cfg = ExperimentConfig(poly="t1 - t2^2", function="M", bmax=100,
                           grid_count=3, out_dir=str(tmp_path / "a"))
    run_experiment(cfg)
    first = (tmp_path / "a" / "report.json").read_bytes()
    cfg2 = ExperimentConfig(poly="t1 - t2^2", function="M", bmax=100,
                            grid_count=3, out_dir=str(tmp_path / "b"))
    run_experiment(cfg2)
    assert first == (tmp_path / "b" / "report.json").read_bytes()


def test_config_json_roundtrip():
    text = json.dumps({
        "poly": "x0^3 + x1^3 + x2^3 + x3^3",
        "function": "Naff",
        "bmax": 20,
        "filters": [[2, [0, 0, 0]]],
    })
    cfg = ExperimentConfig.from_json(text)
    assert cfg.filters == [(2, (0, 0, 0))]
    series = build_series(cfg)
    assert all(c >= 0 for _, c in series.entries)


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "ratpoints.cli", *args],
                          capture_output=True, text=True)


def test_cli_slice():
    r = run_cli("slice", "--form", "x0*x2 - x1^2", "--b", "1")
    assert r.returncode == 0
    assert r.stdout.strip() == "-t1^2 + t2"


def test_cli_conic_param():
    r = run_cli("conic-param", "--plane", "1,0,0,1",
                "--quadric", "x0*x1 - x2^2", "--bound", "100")
    data = json.loads(r.stdout)
    assert data["count"] == 21
    assert data["classes"][0]["double_r"] == ["2*t1^2", "2*t1", "2"]


def test_cli_project_and_fit(tmp_path):
    r = run_cli("project", "--gens",
                "x0*x2 - x1^2; x0*x3 - x1*x2; x1*x3 - x2^2",
                "--bound", "10")
    data = json.loads(r.stdout)
    assert data["passed"]
    series = tmp_path / "s.csv"
    series.write_text("B,count\n10,10\n100,100\n1000,1000\n")
    r2 = run_cli("fit", "--series", str(series), "--target", "1.0")
    assert json.loads(r2.stdout)["verdict"] == "pass"


def test_cli_count_writes_outputs(tmp_path):
    out = tmp_path / "out"
    r = run_cli("count", "--variety", "x0*x2 - x1^2", "--function", "N",
                "--bmax", "32", "--grid", "geometric:3",
                "--out", str(out), "--target", "1.0", "--tol", "0.5")
    assert r.returncode == 0
    lines = (out / "series.csv").read_text().strip().splitlines()
    assert lines[0] == "B,count" and len(lines) == 4
    rep = json.loads((out / "report.json").read_text())
    assert rep["fit"]["verdict"] in ("pass", "fail")


def test_cli_conic_param_rejection_branches():
    r = run_cli("conic-param", "--plane", "0,1,0,-1",
                "--quadric", "x1*x3 - x2^2", "--bound", "10")
    data = json.loads(r.stdout)
    assert "not integral" in data["verdict"]
    r2 = run_cli("conic-param", "--plane", "1,0,0,1",
                 "--quadric", "x0^2 - x1^2 - x2^2", "--bound", "10")
    data2 = json.loads(r2.stdout)
    assert data2["tangency_rank"] == 2
    assert "not tangent" in data2["verdict"]


def test_cli_count_points_csv(tmp_path):
    out = tmp_path / "pts"
    r = run_cli("count", "--variety", "x0*x2 - x1^2", "--function", "N",
                "--bmax", "16", "--grid", "geometric:2", "--out", str(out),
                "--points")
    assert r.returncode == 0
    rows = (out / "points.csv").read_text().strip().splitlines()
    from ratpoints.enumeration import count_projective
    from ratpoints.poly import parse_poly

    assert len(rows) == count_projective(parse_poly("x0*x2 - x1^2"), 16)
    assert all(len(row.split(",")) == 3 for row in rows)


def test_cli_detmethod(tmp_path):
    r = run_cli("detmethod", "--form", "x0^3 + x1^3 + x2^3 + x3^3",
                "--bound", "25", "--epsilon", "0.05", "--min-primes", "2")
    data = json.loads(r.stdout)
    assert data["points"] > 0
    for rec in data["classes"]:
        if rec["class_size"] >= 2:
            assert rec["aux_form"]
