import json
import os

import numpy as np
import pytest

from tlasso.cli import main


@pytest.fixture()
def data_csv(tmp_path):
    rng = np.random.default_rng(0)
    n, p = 40, 5
    X = rng.standard_normal((n, p))
    beta = np.array([1.2, 0.0, -0.7, 0.0, 0.4])
    y = X @ beta + 0.3 * rng.standard_normal(n)
    path = tmp_path / "data.csv"
    header = ",".join([f"f{j}" for j in range(p)] + ["y"])
    rows = [",".join(repr(float(v)) for v in list(X[i]) + [y[i]]) for i in range(n)]
    path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return path


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_fit_writes_outputs_and_exit_codes(data_csv, tmp_path):
    out = tmp_path / "out"
    rc = main([
        "fit", "--data", str(data_csv), "--response", "y",
        "--lambda", "0.1", "--alpha", "0.5", "--out-dir", str(out),
    ])
    assert rc == 0
    coef = (out / "coefficients.csv").read_text().strip().split("\n")
    assert coef[0] == "feature,beta" and len(coef) == 6
    doc = json.loads((out / "fit.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["converged"] is True
    assert doc["kkt_residual"] <= 1e-6


def test_fit_missing_flag_exits_2(data_csv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--response", "y", "--lambda", "0.1", "--alpha", "0.5"])
    assert exc.value.code == 2
    err = capsys.readouterr().err
    assert "--data" in err


def test_fit_missing_file_exits_1(tmp_path):
    rc = main([
        "fit", "--data", str(tmp_path / "nope.csv"), "--response", "y",
        "--lambda", "0.1", "--alpha", "0.5", "--out-dir", str(tmp_path),
    ])
    assert rc == 1


def test_fit_bad_response_exits_2(data_csv, tmp_path):
    rc = main([
        "fit", "--data", str(data_csv), "--response", "zz",
        "--lambda", "0.1", "--alpha", "0.5", "--out-dir", str(tmp_path),
    ])
    assert rc == 2


def test_fit_nonconvergence_exits_3(data_csv, tmp_path):
    rc = main([
        "fit", "--data", str(data_csv), "--response", "y",
        "--lambda", "0.0001", "--alpha", "0.5", "--max-sweeps", "1",
        "--tol", "1e-14", "--out-dir", str(tmp_path),
    ])
    assert rc == 3


def test_fit_deterministic_outputs(data_csv, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["fit", "--data", str(data_csv), "--response", "y", "--lambda", "0.05", "--alpha", "0.25"]
    assert main(args + ["--out-dir", str(out1)]) == 0
    assert main(args + ["--out-dir", str(out2)]) == 0
    assert _read(out1 / "coefficients.csv") == _read(out2 / "coefficients.csv")
    assert _read(out1 / "fit.json") == _read(out2 / "fit.json")


def test_fit_alpha_one_matches_oracle_fixture(data_csv, tmp_path):
    import tlasso as tl
    from tlasso.solver import PenaltySpec
    from tlasso.theory import brute_force_fit

    out = tmp_path / "out"
    rc = main([
        "fit", "--data", str(data_csv), "--response", "y",
        "--lambda", "0.1", "--alpha", "1.0", "--out-dir", str(out), "--tol", "1e-10",
    ])
    assert rc == 0
    rows = (out / "coefficients.csv").read_text().strip().split("\n")[1:]
    got = np.array([float(r.split(",")[1]) for r in rows])
    d = tl.load_csv(data_csv, "y")
    std, s = tl.standardize(d)
    oracle = brute_force_fit(std, PenaltySpec(0.1, 1.0), tl.Coefficients.zeros(d.p))
    expect = tl.destandardize(oracle, s)
    np.testing.assert_allclose(got, expect.beta, atol=1e-6)


def test_path_command(data_csv, tmp_path):
    out = tmp_path / "out"
    rc = main([
        "path", "--data", str(data_csv), "--response", "y", "--alpha", "0.75",
        "--n-lambda", "20", "--out-dir", str(out),
    ])
    assert rc == 0
    lines = (out / "path.csv").read_text().strip().split("\n")
    assert len(lines) == 21
    lams = [float(l.split(",")[0]) for l in lines[1:]]
    assert all(a > b for a, b in zip(lams, lams[1:]))
    doc = json.loads((out / "path.json").read_text())
    assert doc["lambda_max"] == pytest.approx(lams[0])


def test_cv_command_and_init_roundtrip(data_csv, tmp_path):
    out = tmp_path / "cv"
    rc = main([
        "cv", "--data", str(data_csv), "--response", "y", "--alphas", "0.5,1.0",
        "--k", "4", "--n-lambda", "10", "--seed", "1", "--out-dir", str(out),
    ])
    assert rc == 0
    doc = json.loads((out / "cv.json").read_text())
    assert doc["best_alpha"] in (0.5, 1.0)
    table = (out / "cv_table.csv").read_text().strip().split("\n")
    assert len(table) == 1 + 2 * 10

    # feed the refit coefficients back in as the anchor
    out2 = tmp_path / "fit2"
    rc = main([
        "fit", "--data", str(data_csv), "--response", "y", "--lambda", "0.05",
        "--alpha", "0.0", "--init", str(out / "coefficients.csv"), "--out-dir", str(out2),
    ])
    assert rc == 0


def test_simulate_deterministic(tmp_path):
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    base = [
        "simulate", "--scenario", "abrupt", "--trials", "1", "--seed", "7",
        "--n", "25", "--p", "15", "--steps", "4", "--s-active", "4",
        "--switch-count", "2", "--alphas", "0.5,1.0", "--k", "3", "--n-lambda", "8",
    ]
    assert main(base + ["--out-dir", str(out1)]) == 0
    assert main(base + ["--out-dir", str(out2)]) == 0
    assert _read(out1 / "report_l2_error.csv") == _read(out2 / "report_l2_error.csv")
    assert _read(out1 / "report.json") == _read(out2 / "report.json")


def test_simulate_unknown_scenario_exits_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--scenario", "sideways", "--trials", "1", "--seed", "1"])
    assert exc.value.code == 2


def test_verify_threshold_suite(tmp_path, monkeypatch):
    # shrink the suite for test runtime; full scale runs in acceptance
    import tlasso.verify as v

    monkeypatch.setitem(v.SUITES, "threshold", lambda seed=0: v.threshold_suite(seed, n_params=40, n_grid=1500, oracle_per_param=3))
    out = tmp_path / "verify.json"
    rc = main(["verify", "--suite", "threshold", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["all_pass"] is True
    assert doc["suites"][0]["suite"] == "threshold"


def test_verify_failure_exit_code(monkeypatch, tmp_path):
    import tlasso.verify as v

    monkeypatch.setitem(
        v.SUITES, "threshold",
        lambda seed=0: {"suite": "threshold", "pass": False, "counts": {}, "params": {}, "failures": ["x"]},
    )
    rc = main(["verify", "--suite", "threshold", "--out", str(tmp_path / "v.json")])
    assert rc == 4
