"""Generators and runners for the concept-drift and transfer experiments.

Three nonstationary regression protocols (abrupt switch, gradual switch,
source-to-target transfer at a switch rate) plus a synthetic classification
drift with binary features and logistic responses.  Runners compare three
methods per step: an all-history lasso, a single-batch lasso, and the
two-anchor fit chained on its own previous estimate.  Every generator is a
pure function of (spec, seed, trial); per-trial substreams make trials
independent work units.
"""

import base64
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .cv import CvSpec, cross_validate
from .data import Coefficients, Dataset, destandardize, standardize
from .errors import InvalidSpecError
from .metrics import auc
from .rng import substream
from .solver import FitConfig

KINDS = ("abrupt", "gradual", "transfer", "classification_drift")
METHODS = ("lasso_all", "lasso_single", "transfer_lasso")


@dataclass(frozen=True)
class DriftScenario:
    kind: str
    n_per_step: int = 50
    p: int = 100
    n_steps: int = 10
    s_active: int = 10
    coef_range: tuple = (-1.0, 1.0)
    switch_count: int = 5
    transfer_rate: float = 0.0
    n_source: int = 500
    x_density: float = 0.5   # classification only: P(X_ij = 1)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpecError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.s_active > self.p:
            raise InvalidSpecError("s_active must be <= p")
        if self.switch_count > self.s_active:
            raise InvalidSpecError("switch_count must be <= s_active")
        if not 0.0 <= self.transfer_rate <= 1.0:
            raise InvalidSpecError("transfer_rate must be in [0, 1]")
        lo, hi = self.coef_range
        if not lo < hi:
            raise InvalidSpecError("coef_range must satisfy lo < hi")
        if min(self.n_per_step, self.n_steps, self.p) < 1 or self.n_source < 1:
            raise InvalidSpecError("sizes must be >= 1")
        if not 0.0 < self.x_density < 1.0:
            raise InvalidSpecError("x_density must be in (0, 1)")


@dataclass(frozen=True)
class StepData:
    dataset: Dataset
    beta_true: Coefficients


@dataclass(frozen=True)
class ExperimentReport:
    """Per-trial metric values plus their mean/stderr aggregation.

    values[metric][method] is a (trials x len(x_values)) array; stderr is
    sd(ddof=1)/sqrt(trials), zero for a single trial.
    """

    kind: str
    methods: tuple
    x_label: str
    x_values: tuple
    trials: int
    values: dict
    config: dict

    def mean(self, metric, method):
        return self.values[metric][method].mean(axis=0)

    def stderr(self, metric, method):
        v = self.values[metric][method]
        if self.trials < 2:
            return np.zeros(v.shape[1])
        return v.std(axis=0, ddof=1) / np.sqrt(self.trials)

    @property
    def metrics(self):
        return tuple(self.values.keys())


def _draw_beta(rng, p, s, lo, hi):
    support = np.sort(rng.choice(p, size=s, replace=False))
    beta = np.zeros(p)
    beta[support] = rng.uniform(lo, hi, size=s)
    return beta


def _switch_one(rng, beta, j_out, lo, hi):
    """Move one active index to a fresh inactive one with a redrawn value."""
    inactive = np.flatnonzero(beta == 0.0)
    j_in = int(rng.choice(inactive))
    beta[j_out] = 0.0
    beta[j_in] = rng.uniform(lo, hi)
    return beta


def _regression_step(rng, beta, n):
    p = beta.shape[0]
    X = rng.standard_normal((n, p))
    eps = rng.standard_normal(n)
    y = X @ beta + eps
    return StepData(Dataset(X, y), Coefficients(beta.copy()))


def gen_abrupt(spec: DriftScenario, seed, trial=0):
    """Stationary coefficients with switch_count support indices replaced
    at the middle step (step n_steps//2, counting from 0)."""
    lo, hi = spec.coef_range
    coef_rng = substream(seed, trial, 0)
    beta = _draw_beta(coef_rng, spec.p, spec.s_active, lo, hi)
    betas = []
    switch_at = spec.n_steps // 2
    for k in range(spec.n_steps):
        if k == switch_at and spec.n_steps > 1:
            out = coef_rng.choice(np.flatnonzero(beta), size=spec.switch_count, replace=False)
            inactive = np.flatnonzero(beta == 0.0)
            new = coef_rng.choice(inactive, size=spec.switch_count, replace=False)
            beta = beta.copy()
            beta[out] = 0.0
            beta[new] = coef_rng.uniform(lo, hi, size=spec.switch_count)
        betas.append(beta)
    return [
        _regression_step(substream(seed, trial, 1 + k), betas[k], spec.n_per_step)
        for k in range(spec.n_steps)
    ]


def gen_gradual(spec: DriftScenario, seed, trial=0):
    """One active feature switches to a fresh one at every step."""
    lo, hi = spec.coef_range
    coef_rng = substream(seed, trial, 0)
    beta = _draw_beta(coef_rng, spec.p, spec.s_active, lo, hi)
    betas = [beta]
    for _ in range(1, spec.n_steps):
        beta = beta.copy()
        j_out = int(coef_rng.choice(np.flatnonzero(beta)))
        _switch_one(coef_rng, beta, j_out, lo, hi)
        betas.append(beta)
    return [
        _regression_step(substream(seed, trial, 1 + k), betas[k], spec.n_per_step)
        for k in range(spec.n_steps)
    ]


def gen_transfer(spec: DriftScenario, seed, trial=0):
    """(source, target) pair; each source support index switches with
    probability transfer_rate to a fresh index with a redrawn value."""
    lo, hi = spec.coef_range
    coef_rng = substream(seed, trial, 0)
    beta_s = _draw_beta(coef_rng, spec.p, spec.s_active, lo, hi)
    beta_t = beta_s.copy()
    original = np.flatnonzero(beta_s)
    taken = set(original.tolist())
    for j in original:
        u = coef_rng.uniform()
        if u < spec.transfer_rate:
            pool = np.array([i for i in range(spec.p) if i not in taken])
            j_in = int(coef_rng.choice(pool))
            taken.add(j_in)
            beta_t[j] = 0.0
            beta_t[j_in] = coef_rng.uniform(lo, hi)
    source = _regression_step(substream(seed, trial, 1), beta_s, spec.n_source)
    target = _regression_step(substream(seed, trial, 2), beta_t, spec.n_per_step)
    return source, target


def gen_classification_drift(spec: DriftScenario, seed, trial=0):
    """Binary designs with logistic labels; coefficients follow the gradual
    protocol but change only every second batch (stationary pairs)."""
    lo, hi = spec.coef_range
    coef_rng = substream(seed, trial, 0)
    beta = _draw_beta(coef_rng, spec.p, spec.s_active, lo, hi)
    macro = [beta]
    for _ in range(1, (spec.n_steps + 1) // 2):
        beta = beta.copy()
        j_out = int(coef_rng.choice(np.flatnonzero(beta)))
        _switch_one(coef_rng, beta, j_out, lo, hi)
        macro.append(beta)
    steps = []
    for k in range(spec.n_steps):
        rng = substream(seed, trial, 1 + k)
        b = macro[k // 2]
        X = (rng.uniform(size=(spec.n_per_step, spec.p)) < spec.x_density).astype(np.float64)
        prob = 1.0 / (1.0 + np.exp(-(X @ b)))
        y = (rng.uniform(size=spec.n_per_step) < prob).astype(np.float64)
        steps.append(StepData(Dataset(X, y), Coefficients(b.copy())))
    return steps


def _cv_fit_raw(raw: Dataset, alphas, tilde_raw: Coefficients, cv_spec: CvSpec, cfg: FitConfig):
    """Standardize, CV-fit, and return raw-scale coefficients."""
    std, s = standardize(raw)
    tilde_std = s.coefficients_to_standardized(tilde_raw)
    res = cross_validate(std, replace(cv_spec, alphas=tuple(alphas)), tilde_std, cfg)
    return destandardize(res.refit.coefficients, s)


def _concat(steps):
    X = np.vstack([s.dataset.X for s in steps])
    y = np.concatenate([s.dataset.y for s in steps])
    return Dataset(X, y)


def _threads():
    try:
        return max(1, int(os.environ.get("TLASSO_THREADS", "1")))
    except ValueError:
        return 1


def _map_trials(fn, trials):
    workers = _threads()
    if workers == 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


# CV scoring tolerance: hyperparameter selection is insensitive below this,
# and the tight default would cost ~20x in the ill-conditioned mid-path.
CV_FIT = FitConfig(tol=1e-5)


def run_concept_drift(scenario: DriftScenario, methods, trials, cv_spec: CvSpec,
                      cfg: FitConfig = CV_FIT, seed=0) -> ExperimentReport:
    """Per-step l2 coefficient error for the selected methods.

    lasso_all refits on the concatenation of batches 1..k (re-standardized
    each step); lasso_single on batch k alone; transfer_lasso on batch k
    anchored at its previous raw-scale estimate (plain lasso at step 1).
    """
    methods = tuple(methods)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise InvalidSpecError(f"unknown methods {sorted(unknown)}")
    if scenario.kind not in ("abrupt", "gradual"):
        raise InvalidSpecError(f"run_concept_drift needs an abrupt/gradual scenario, got {scenario.kind!r}")
    gen = gen_abrupt if scenario.kind == "abrupt" else gen_gradual

    def one_trial(t):
        steps = gen(scenario, seed, trial=t)
        out = {m: np.empty(scenario.n_steps) for m in methods}
        tilde_prev = Coefficients.zeros(scenario.p)
        for k, step in enumerate(steps):
            truth = step.beta_true.beta
            if "lasso_single" in out:
                coef = _cv_fit_raw(step.dataset, (1.0,), Coefficients.zeros(scenario.p), cv_spec, cfg)
                out["lasso_single"][k] = np.linalg.norm(coef.beta - truth)
            if "lasso_all" in out:
                coef = _cv_fit_raw(_concat(steps[: k + 1]), (1.0,), Coefficients.zeros(scenario.p), cv_spec, cfg)
                out["lasso_all"][k] = np.linalg.norm(coef.beta - truth)
            if "transfer_lasso" in out:
                alphas = (1.0,) if k == 0 else cv_spec.alphas
                coef = _cv_fit_raw(step.dataset, alphas, tilde_prev, cv_spec, cfg)
                out["transfer_lasso"][k] = np.linalg.norm(coef.beta - truth)
                tilde_prev = Coefficients(coef.beta)  # raw-scale slopes chain forward
        return out

    per_trial = _map_trials(one_trial, trials)
    values = {"l2_error": {m: np.vstack([r[m] for r in per_trial]) for m in methods}}
    return ExperimentReport(
        kind=scenario.kind,
        methods=methods,
        x_label="step",
        x_values=tuple(range(1, scenario.n_steps + 1)),
        trials=trials,
        values=values,
        config={
            "scenario": asdict(scenario),
            "cv": asdict(cv_spec),
            "fit": {"loss": cfg.loss, "max_sweeps": cfg.max_sweeps, "tol": cfg.tol},
            "seed": seed,
            "concat_standardized": True,
        },
    )


def run_transfer(scenario: DriftScenario, rates, trials, cv_spec: CvSpec,
                 cfg: FitConfig = CV_FIT, seed=0) -> ExperimentReport:
    """l2 error and correctly selected feature count per transfer rate."""
    if scenario.kind != "transfer":
        raise InvalidSpecError(f"run_transfer needs a transfer scenario, got {scenario.kind!r}")
    rates = tuple(float(r) for r in rates)

    def one_trial(t):
        err = {m: np.empty(len(rates)) for m in METHODS}
        sel = {m: np.empty(len(rates)) for m in METHODS}
        for i, rate in enumerate(rates):
            src, tgt = gen_transfer(replace(scenario, transfer_rate=rate), seed, trial=t)
            truth = tgt.beta_true.beta
            true_supp = set(np.flatnonzero(truth).tolist())
            zero = Coefficients.zeros(scenario.p)
            fits = {
                "lasso_all": _cv_fit_raw(_concat([src, tgt]), (1.0,), zero, cv_spec, cfg),
                "lasso_single": _cv_fit_raw(tgt.dataset, (1.0,), zero, cv_spec, cfg),
            }
            tilde = _cv_fit_raw(src.dataset, (1.0,), zero, cv_spec, cfg)
            fits["transfer_lasso"] = _cv_fit_raw(
                tgt.dataset, cv_spec.alphas, Coefficients(tilde.beta), cv_spec, cfg
            )
            for m, coef in fits.items():
                err[m][i] = np.linalg.norm(coef.beta - truth)
                sel[m][i] = len(set(np.flatnonzero(coef.beta).tolist()) & true_supp)
        return err, sel

    per_trial = _map_trials(one_trial, trials)
    values = {
        "l2_error": {m: np.vstack([r[0][m] for r in per_trial]) for m in METHODS},
        "correct_features": {m: np.vstack([r[1][m] for r in per_trial]) for m in METHODS},
    }
    return ExperimentReport(
        kind="transfer",
        methods=METHODS,
        x_label="rate",
        x_values=rates,
        trials=trials,
        values=values,
        config={
            "scenario": asdict(scenario),
            "cv": asdict(cv_spec),
            "fit": {"loss": cfg.loss, "max_sweeps": cfg.max_sweeps, "tol": cfg.tol},
            "seed": seed,
            "rates": rates,
        },
    )


def run_classification_drift(scenario: DriftScenario, trials, cv_spec: CvSpec,
                             cfg: FitConfig = None, seed=0) -> ExperimentReport:
    """Prequential AUC: train on batch k, score batch k+1.

    Binary designs are fitted as-is (no standardization); when every feature
    is binary, alpha = 0.5 in the grid is replaced by 0.501.  Selection uses
    deviance; AUC is the reported metric.
    """
    if scenario.kind != "classification_drift":
        raise InvalidSpecError(
            f"run_classification_drift needs a classification_drift scenario, got {scenario.kind!r}"
        )
    if cfg is None:
        # outer-iteration cap: near-separable small-lambda fits crawl under
        # the fixed-curvature majorization and never win model selection
        cfg = FitConfig(loss="logistic", tol=CV_FIT.tol, max_sweeps=1000)
    if cfg.loss != "logistic":
        raise InvalidSpecError("classification drift requires logistic loss")
    if cv_spec.metric == "mse":
        cv_spec = replace(cv_spec, metric="deviance")
    n_eval = scenario.n_steps - 1
    if n_eval < 1:
        raise InvalidSpecError("needs at least 2 batches for prequential evaluation")

    def one_trial(t):
        steps = gen_classification_drift(scenario, seed, trial=t)
        binary = all(np.isin(s.dataset.X, (0.0, 1.0)).all() for s in steps)
        alphas = tuple(0.501 if a == 0.5 else a for a in cv_spec.alphas) if binary else cv_spec.alphas
        out = {m: np.empty(n_eval) for m in METHODS}
        tilde_prev = Coefficients.zeros(scenario.p)
        for k in range(n_eval):
            train, test = steps[k], steps[k + 1]
            zero = Coefficients.zeros(scenario.p)
            for m in METHODS:
                if m == "lasso_all":
                    data, a, anchor = _concat(steps[: k + 1]), (1.0,), zero
                elif m == "lasso_single":
                    data, a, anchor = train.dataset, (1.0,), zero
                else:
                    data = train.dataset
                    a = (1.0,) if k == 0 else alphas
                    anchor = tilde_prev
                res = cross_validate(data, replace(cv_spec, alphas=a), anchor, cfg)
                coef = res.refit.coefficients
                out[m][k] = auc(test.dataset.X @ coef.beta, test.dataset.y)
                if m == "transfer_lasso":
                    tilde_prev = coef
        return out

    per_trial = _map_trials(one_trial, trials)
    values = {"auc": {m: np.vstack([r[m] for r in per_trial]) for m in METHODS}}
    return ExperimentReport(
        kind="classification_drift",
        methods=METHODS,
        x_label="step",
        x_values=tuple(range(1, n_eval + 1)),
        trials=trials,
        values=values,
        config={
            "scenario": asdict(scenario),
            "cv": asdict(replace(cv_spec, alphas=tuple(cv_spec.alphas))),
            "fit": {"loss": cfg.loss, "max_sweeps": cfg.max_sweeps, "tol": cfg.tol},
            "seed": seed,
        },
    )


# ---------------------------------------------------------------------------
# report persistence
# ---------------------------------------------------------------------------

def write_report_csv(report: ExperimentReport, path, metric):
    """One row per (method, step_or_rate) with mean/stderr/trials columns."""
    lines = ["method,step_or_rate,mean,stderr,trials"]
    for m in report.methods:
        means = report.mean(metric, m)
        errs = report.stderr(metric, m)
        for x, mu, se in zip(report.x_values, means, errs):
            lines.append(f"{m},{x!r},{float(mu)!r},{float(se)!r},{report.trials}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_report_json(report: ExperimentReport, path):
    """Full config echo plus per-trial values, schema-versioned."""
    doc = {
        "schema_version": 1,
        "kind": report.kind,
        "methods": list(report.methods),
        "x_label": report.x_label,
        "x_values": list(report.x_values),
        "trials": report.trials,
        "config": report.config,
        "metrics": {
            metric: {m: report.values[metric][m].tolist() for m in report.methods}
            for metric in report.metrics
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")
