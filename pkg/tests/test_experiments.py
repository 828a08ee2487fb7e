import json

import numpy as np
import pytest

from tlasso.cv import CvSpec
from tlasso.errors import DegenerateLabelsError, InvalidSpecError
from tlasso.experiments import (
    DriftScenario,
    gen_abrupt,
    gen_classification_drift,
    gen_gradual,
    gen_transfer,
    run_concept_drift,
    run_transfer,
    write_report_csv,
    write_report_json,
)
from tlasso.metrics import auc
from tlasso.solver import FitConfig

FAST_CV = CvSpec(k=3, alphas=(0.5, 1.0), n_lambda=12, seed=0)
FAST_FIT = FitConfig(tol=1e-4, max_sweeps=2000)
SMALL = dict(n_per_step=25, p=20, n_steps=6, s_active=5, switch_count=3)


def _support(beta):
    return set(np.flatnonzero(beta).tolist())


def test_abrupt_protocol():
    spec = DriftScenario(kind="abrupt")
    steps = gen_abrupt(spec, seed=3)
    assert len(steps) == 10
    supports = [_support(s.beta_true.beta) for s in steps]
    assert supports[0] == supports[4]
    assert supports[5] == supports[9]
    assert len(supports[4] & supports[5]) == 10 - 5
    for s in steps:
        active = s.beta_true.beta[s.beta_true.beta != 0]
        assert len(active) == 10 and np.all(np.abs(active) <= 1.0)
        assert s.dataset.n == 50 and s.dataset.p == 100
    again = gen_abrupt(spec, seed=3)
    assert all(np.array_equal(a.dataset.X, b.dataset.X) for a, b in zip(steps, again))
    other = gen_abrupt(spec, seed=4)
    assert not np.array_equal(steps[0].dataset.X, other[0].dataset.X)


def test_gradual_protocol():
    spec = DriftScenario(kind="gradual", **SMALL)
    steps = gen_gradual(spec, seed=5)
    supports = [_support(s.beta_true.beta) for s in steps]
    for a, b in zip(supports, supports[1:]):
        assert len(a ^ b) == 2
        assert len(a) == spec.s_active and len(b) == spec.s_active


def test_transfer_protocol():
    spec = DriftScenario(kind="transfer", n_per_step=30, p=40, s_active=8, n_source=100)
    src, tgt = gen_transfer(spec, seed=6)
    assert src.dataset.n == 100 and tgt.dataset.n == 30

    # rate 0: identical coefficients
    s0, t0 = gen_transfer(spec, seed=7)
    np.testing.assert_array_equal(s0.beta_true.beta, t0.beta_true.beta)

    # rate 1: disjoint supports
    spec1 = DriftScenario(kind="transfer", n_per_step=30, p=40, s_active=8, n_source=100, transfer_rate=1.0)
    s1, t1 = gen_transfer(spec1, seed=8)
    assert not (_support(s1.beta_true.beta) & _support(t1.beta_true.beta))

    # expected switch count ~ rate * s_active over many seeds
    spec_half = DriftScenario(kind="transfer", n_per_step=30, p=40, s_active=8, n_source=100, transfer_rate=0.5)
    switched = []
    for seed in range(300):
        s, t = gen_transfer(spec_half, seed=seed)
        switched.append(len(_support(s.beta_true.beta) - _support(t.beta_true.beta)))
    mean = np.mean(switched)
    assert abs(mean - 4.0) < 0.35  # 3-sigma band for 300 draws of Binomial(8, .5)


def test_classification_protocol():
    spec = DriftScenario(kind="classification_drift", n_per_step=60, p=20, n_steps=8, s_active=5)
    steps = gen_classification_drift(spec, seed=9)
    for s in steps:
        assert set(np.unique(s.dataset.y)) <= {0.0, 1.0}
        assert set(np.unique(s.dataset.X)) <= {0.0, 1.0}
    betas = [s.beta_true.beta for s in steps]
    for k in range(0, 8, 2):
        np.testing.assert_array_equal(betas[k], betas[k + 1])
    assert len(_support(betas[0]) ^ _support(betas[2])) == 2
    again = gen_classification_drift(spec, seed=9)
    assert all(np.array_equal(a.dataset.y, b.dataset.y) for a, b in zip(steps, again))


def test_scenario_validation():
    with pytest.raises(InvalidSpecError):
        DriftScenario(kind="weird")
    with pytest.raises(InvalidSpecError):
        DriftScenario(kind="abrupt", s_active=11, p=10)
    with pytest.raises(InvalidSpecError):
        DriftScenario(kind="abrupt", switch_count=11)
    with pytest.raises(InvalidSpecError):
        run_concept_drift(DriftScenario(kind="abrupt"), ("nope",), 1, FAST_CV)


def test_run_concept_drift_deterministic_and_uncontaminated():
    spec = DriftScenario(kind="abrupt", **SMALL)
    r1 = run_concept_drift(spec, ("lasso_single",), 1, FAST_CV, FAST_FIT, seed=21)
    r2 = run_concept_drift(spec, ("lasso_all", "lasso_single", "transfer_lasso"), 1, FAST_CV, FAST_FIT, seed=21)
    np.testing.assert_array_equal(
        r1.values["l2_error"]["lasso_single"], r2.values["l2_error"]["lasso_single"]
    )
    r3 = run_concept_drift(spec, ("lasso_single",), 1, FAST_CV, FAST_FIT, seed=21)
    np.testing.assert_array_equal(
        r1.values["l2_error"]["lasso_single"], r3.values["l2_error"]["lasso_single"]
    )


def test_report_aggregation_and_persistence(tmp_path):
    spec = DriftScenario(kind="gradual", **SMALL)
    rep = run_concept_drift(spec, ("lasso_single", "transfer_lasso"), 3, FAST_CV, FAST_FIT, seed=22)
    vals = rep.values["l2_error"]["lasso_single"]
    assert vals.shape == (3, 6)
    np.testing.assert_allclose(rep.stderr("l2_error", "lasso_single"),
                               vals.std(axis=0, ddof=1) / np.sqrt(3))
    csv_path = tmp_path / "rep.csv"
    write_report_csv(rep, csv_path, "l2_error")
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "method,step_or_rate,mean,stderr,trials"
    assert len(lines) == 1 + 2 * 6
    json_path = tmp_path / "rep.json"
    write_report_json(rep, json_path)
    doc = json.loads(json_path.read_text())
    assert doc["schema_version"] == 1
    assert doc["trials"] == 3
    assert len(doc["metrics"]["l2_error"]["transfer_lasso"]) == 3


def test_run_transfer_small():
    spec = DriftScenario(kind="transfer", n_per_step=25, p=20, s_active=5, n_source=80)
    rep = run_transfer(spec, (0.0, 1.0), 2, FAST_CV, FAST_FIT, seed=23)
    assert rep.x_values == (0.0, 1.0)
    assert set(rep.metrics) == {"l2_error", "correct_features"}
    for m in rep.methods:
        assert rep.values["correct_features"][m].shape == (2, 2)
        assert np.all(rep.values["correct_features"][m] <= 5)


def test_auc_examples_and_errors():
    assert auc([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0]) == 1.0
    assert auc([0.1, 0.2, 0.9, 0.8], [1, 1, 0, 0]) == 0.0
    assert auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == 0.5
    with pytest.raises(DegenerateLabelsError):
        auc([0.1, 0.2], [1, 1])


def test_auc_matches_pairwise_counting():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(5, 40))
        scores = np.round(rng.standard_normal(n), 1)  # force ties
        labels = (rng.uniform(size=n) < 0.5).astype(int)
        if labels.sum() in (0, n):
            labels[0] = 1 - labels[0]
        pos = scores[labels == 1]
        neg = scores[labels == 0]
        wins = sum((p > q) + 0.5 * (p == q) for p in pos for q in neg)
        brute = wins / (len(pos) * len(neg))
        assert auc(scores, labels) == pytest.approx(brute, abs=1e-12)


def test_threads_env_does_not_change_results(monkeypatch):
    spec = DriftScenario(kind="gradual", **SMALL)
    rep1 = run_concept_drift(spec, ("lasso_single",), 3, FAST_CV, FAST_FIT, seed=30)
    monkeypatch.setenv("TLASSO_THREADS", "3")
    rep2 = run_concept_drift(spec, ("lasso_single",), 3, FAST_CV, FAST_FIT, seed=30)
    np.testing.assert_array_equal(
        rep1.values["l2_error"]["lasso_single"], rep2.values["l2_error"]["lasso_single"]
    )
