"""Command-line front end: fit, path, cv, simulate, verify.

Exit codes: 0 ok, 1 I/O failure, 2 validation failure, 3 solver stopped on
the sweep budget, 4 verification suite failure.  Machine-readable output
goes to files under --out-dir; logs go to stderr only, so stdout/files stay
byte-stable for identical flags (seeds included in flags).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .cv import CvSpec, cross_validate
from .data import Coefficients, Dataset, destandardize, load_csv, standardize
from .errors import (
    InvalidSpecError,
    NoConvergenceError,
    NonBinaryLabelsError,
    TlassoError,
)
from .experiments import (
    DriftScenario,
    METHODS,
    run_classification_drift,
    run_concept_drift,
    run_transfer,
    write_report_csv,
    write_report_json,
)
from .path import PathSpec, fit_path
from .solver import FitConfig, PenaltySpec, cd_fit
from .verify import SUITES, run_suites

SCHEMA_VERSION = 1


def _log(msg):
    print(msg, file=sys.stderr)


def _ensure_outdir(path):
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(path, doc):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _write_coef_csv(path, names, beta):
    lines = ["feature,beta"]
    lines += [f"{name},{float(b)!r}" for name, b in zip(names, beta)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_coef_csv(path, names):
    import csv as _csv

    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(_csv.DictReader(fh))
    by_name = {r["feature"]: float(r["beta"]) for r in rows}
    missing = [n for n in names if n not in by_name]
    if missing:
        raise InvalidSpecError(f"initial-coefficient file lacks features {missing[:5]}")
    return Coefficients(np.array([by_name[n] for n in names]))


def _feature_names(d: Dataset):
    return list(d.column_names) if d.column_names else [f"x{j}" for j in range(d.p)]


def _prepare(args):
    """Load, optionally standardize, and resolve the anchor coefficients."""
    d = load_csv(args.data, args.response)
    names = _feature_names(d)
    tilde_raw = _load_coef_csv(args.init, names) if args.init else Coefficients.zeros(d.p)
    loss = getattr(args, "loss", "squared")
    if loss == "squared" and not args.no_standardize:
        std, s = standardize(d)
        tilde = s.coefficients_to_standardized(tilde_raw)
        return d, std, s, tilde, names
    return d, d, None, tilde_raw, names


def cmd_fit(args):
    d_raw, d, s, tilde, names = _prepare(args)
    cfg = FitConfig(loss=args.loss, max_sweeps=args.max_sweeps, tol=args.tol)
    fit = cd_fit(d, PenaltySpec(args.lam, args.alpha), tilde, cfg)
    coef = destandardize(fit.coefficients, s) if s is not None else fit.coefficients
    out = _ensure_outdir(args.out_dir)
    _write_coef_csv(os.path.join(out, "coefficients.csv"), names, coef.beta)
    _write_json(
        os.path.join(out, "fit.json"),
        {
            "objective": fit.objective,
            "sweeps_used": fit.sweeps_used,
            "kkt_residual": fit.kkt_residual,
            "converged": fit.converged,
            "labels_remapped": fit.labels_remapped,
            "intercept": coef.intercept,
            "lambda": args.lam,
            "alpha": args.alpha,
            "loss": args.loss,
            "n_nonzero": int(np.count_nonzero(coef.beta)),
        },
    )
    _log(f"fit: objective={fit.objective:.6g} sweeps={fit.sweeps_used} kkt={fit.kkt_residual:.2e}")
    return 0 if fit.converged else 3


def cmd_path(args):
    d_raw, d, s, tilde, names = _prepare(args)
    cfg = FitConfig(loss=args.loss, max_sweeps=args.max_sweeps, tol=args.tol)
    spec = PathSpec(alpha=args.alpha, tilde=tilde, n_lambda=args.n_lambda, ratio=args.ratio)
    res = fit_path(d, spec, cfg)
    out = _ensure_outdir(args.out_dir)
    lines = ["lambda,objective,kkt_residual,sweeps,n_nonzero," + ",".join(names)]
    for lam, fit in zip(res.lambdas, res.fits):
        beta = fit.coefficients.beta
        row = [repr(float(lam)), repr(fit.objective), repr(fit.kkt_residual), str(fit.sweeps_used), str(int(np.count_nonzero(beta)))]
        row += [repr(float(b)) for b in beta]
        lines.append(",".join(row))
    with open(os.path.join(out, "path.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_json(
        os.path.join(out, "path.json"),
        {
            "alpha": args.alpha,
            "n_lambda": args.n_lambda,
            "ratio": args.ratio,
            "lambda_max": float(res.lambdas[0]),
            "lambda_max_branch": res.lambda_max_branch,
            "lambda_max_fallback": res.lambda_max_fallback,
            "all_converged": all(f.converged for f in res.fits),
        },
    )
    _log(f"path: {args.n_lambda} fits from lambda_max={res.lambdas[0]:.6g} ({res.lambda_max_branch})")
    return 0 if all(f.converged for f in res.fits) else 3


def cmd_cv(args):
    d_raw, d, s, tilde, names = _prepare(args)
    cfg = FitConfig(loss=args.loss, max_sweeps=args.max_sweeps, tol=args.tol)
    spec = CvSpec(
        k=args.k, alphas=tuple(args.alphas), n_lambda=args.n_lambda,
        ratio=args.ratio, seed=args.seed, metric=args.metric,
    )
    res = cross_validate(d, spec, tilde, cfg)
    coef = destandardize(res.refit.coefficients, s) if s is not None else res.refit.coefficients
    out = _ensure_outdir(args.out_dir)
    lines = ["alpha,lambda,mean,sd"]
    lines += [f"{r.alpha!r},{r.lam!r},{r.mean!r},{r.sd!r}" for r in res.table]
    with open(os.path.join(out, "cv_table.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_coef_csv(os.path.join(out, "coefficients.csv"), names, coef.beta)
    _write_json(
        os.path.join(out, "cv.json"),
        {
            "best_alpha": res.best_alpha,
            "best_lambda": res.best_lambda,
            "metric": spec.metric,
            "k": spec.k,
            "refit_objective": res.refit.objective,
            "refit_converged": res.refit.converged,
            "intercept": coef.intercept,
            "lambda_max": {str(a): {"value": v, "branch": br, "fallback": fb}
                           for a, (v, br, fb) in res.lambda_max_info.items()},
        },
    )
    _log(f"cv: best alpha={res.best_alpha} lambda={res.best_lambda:.6g}")
    return 0 if res.refit.converged else 3


def cmd_simulate(args):
    cv_spec = CvSpec(
        k=args.k, alphas=tuple(args.alphas), n_lambda=args.n_lambda,
        ratio=args.ratio, seed=args.seed, metric=args.metric,
    )
    out = _ensure_outdir(args.out_dir)
    if args.scenario in ("abrupt", "gradual"):
        scenario = DriftScenario(
            kind=args.scenario, n_per_step=args.n, p=args.p, n_steps=args.steps,
            s_active=args.s_active, switch_count=args.switch_count,
        )
        report = run_concept_drift(scenario, args.methods, args.trials, cv_spec, seed=args.seed)
    elif args.scenario == "transfer":
        scenario = DriftScenario(
            kind="transfer", n_per_step=args.n, p=args.p, s_active=args.s_active,
            n_source=args.n_source,
        )
        report = run_transfer(scenario, args.rates, args.trials, cv_spec, seed=args.seed)
    else:
        scenario = DriftScenario(
            kind="classification_drift", n_per_step=args.n, p=args.p,
            n_steps=args.steps, s_active=args.s_active, coef_range=(-2.0, 2.0),
        )
        report = run_classification_drift(scenario, args.trials, cv_spec, seed=args.seed)
    for metric in report.metrics:
        write_report_csv(report, os.path.join(out, f"report_{metric}.csv"), metric)
    write_report_json(report, os.path.join(out, "report.json"))
    _log(f"simulate: {args.scenario} x {args.trials} trials -> {out}")
    return 0


def cmd_verify(args):
    records = run_suites(args.suite, seed=args.seed)
    doc = {"suites": records, "all_pass": all(r["pass"] for r in records)}
    if args.out:
        _ensure_outdir(os.path.dirname(args.out) or ".")
        _write_json(args.out, doc)
    else:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **doc}, sort_keys=True, indent=1))
    for r in records:
        _log(f"verify {r['suite']}: {'pass' if r['pass'] else 'FAIL'} {r['counts']}")
    return 0 if doc["all_pass"] else 4


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok != ""]


def build_parser():
    ap = argparse.ArgumentParser(prog="tlasso", description=__doc__)
    ap.add_argument("--version", action="version", version=f"tlasso {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_fit_flags(p, with_penalty):
        p.add_argument("--data", required=True, help="input CSV with a header row")
        p.add_argument("--response", required=True, help="response column name")
        if with_penalty:
            p.add_argument("--lambda", dest="lam", type=float, required=True)
            p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--init", help="CSV of initial coefficients (feature,beta), raw scale")
        p.add_argument("--loss", choices=("squared", "logistic"), default="squared")
        p.add_argument("--no-standardize", action="store_true")
        p.add_argument("--tol", type=float, default=1e-7)
        p.add_argument("--max-sweeps", type=int, default=100_000)
        p.add_argument("--out-dir", default=".")

    p_fit = sub.add_parser("fit", help="single penalized fit")
    add_fit_flags(p_fit, with_penalty=True)
    p_fit.set_defaults(func=cmd_fit)

    p_path = sub.add_parser("path", help="warm-started lambda path")
    add_fit_flags(p_path, with_penalty=False)
    p_path.add_argument("--alpha", type=float, required=True)
    p_path.add_argument("--n-lambda", type=int, default=100)
    p_path.add_argument("--ratio", type=float, default=1e-4)
    p_path.set_defaults(func=cmd_path)

    p_cv = sub.add_parser("cv", help="k-fold cross-validation over (alpha, lambda)")
    add_fit_flags(p_cv, with_penalty=False)
    p_cv.add_argument("--alphas", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p_cv.add_argument("--k", type=int, default=10)
    p_cv.add_argument("--n-lambda", type=int, default=100)
    p_cv.add_argument("--ratio", type=float, default=1e-4)
    p_cv.add_argument("--seed", type=int, default=0)
    p_cv.add_argument("--metric", choices=("mse", "deviance", "auc"), default="mse")
    p_cv.set_defaults(func=cmd_cv)

    p_sim = sub.add_parser("simulate", help="run a drift/transfer experiment")
    p_sim.add_argument("--scenario", required=True,
                       choices=("abrupt", "gradual", "transfer", "classification"))
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out-dir", default=".")
    p_sim.add_argument("--n", type=int, default=50)
    p_sim.add_argument("--p", type=int, default=100)
    p_sim.add_argument("--steps", type=int, default=10)
    p_sim.add_argument("--s-active", type=int, default=10)
    p_sim.add_argument("--switch-count", type=int, default=5)
    p_sim.add_argument("--n-source", type=int, default=500)
    p_sim.add_argument("--rates", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p_sim.add_argument("--methods", nargs="+", default=list(METHODS), choices=METHODS)
    p_sim.add_argument("--alphas", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p_sim.add_argument("--k", type=int, default=10)
    p_sim.add_argument("--n-lambda", type=int, default=100)
    p_sim.add_argument("--ratio", type=float, default=1e-4)
    p_sim.add_argument("--metric", choices=("mse", "deviance", "auc"), default="mse")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("--suite", default="all", choices=("all",) + tuple(sorted(SUITES)))
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", help="write the JSON report here instead of stdout")
    p_ver.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (OSError,) as e:
        _log(f"I/O error: {e}")
        return 1
    except NoConvergenceError as e:
        _log(f"no convergence: {e}")
        return 3
    except (TlassoError, ValueError) as e:
        _log(f"validation error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
