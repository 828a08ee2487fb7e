"""k-fold cross-validation over the (lambda, alpha) grid.

Per alpha, the lambda grid is anchored at the full-data lambda_max so every
fold scores the same grid and fold means are comparable.  For squared loss,
each training fold is re-standardized and its transform applied to the
held-out fold (no leakage); the anchor is rescaled into the fold's scale so
it keeps describing the same predictor.  Logistic data is used as-is
(binary designs make per-fold scaling ill-posed).
"""

from dataclasses import dataclass, replace

import numpy as np

from .data import Coefficients, Dataset, standardize
from .errors import InvalidSpecError, KTooLargeError, ZeroNormColumnError
from .metrics import auc
from .path import PathSpec, lambda_max_with_fallback
from .rng import substream
from .solver import FitConfig, FitResult, PenaltySpec, _binary_labels, cd_fit

METRICS = ("mse", "deviance", "auc")


@dataclass(frozen=True)
class CvSpec:
    k: int = 10
    alphas: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)
    n_lambda: int = 100
    ratio: float = 1e-4
    seed: int = 0
    metric: str = "mse"

    def __post_init__(self):
        if self.k < 2:
            raise InvalidSpecError("k must be >= 2")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.alphas or any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise InvalidSpecError(f"alphas must be nonempty, each in [0, 1]: {self.alphas}")
        if self.n_lambda < 2:
            raise InvalidSpecError("n_lambda must be >= 2")
        if not 0.0 < self.ratio < 1.0:
            raise InvalidSpecError("ratio must be in (0, 1)")
        if self.metric not in METRICS:
            raise InvalidSpecError(f"metric must be one of {METRICS}")


@dataclass(frozen=True)
class CvRow:
    alpha: float
    lam: float
    mean: float
    sd: float


@dataclass(frozen=True)
class CvResult:
    table: tuple            # CvRow per (alpha, lambda), grid order
    best_alpha: float
    best_lambda: float
    refit: FitResult
    lambda_max_info: dict   # alpha -> (lambda_max, branch, fallback)


def kfold_split(n, k, seed):
    """Partition {0..n-1} into k disjoint folds with sizes differing by <= 1."""
    if k > n:
        raise KTooLargeError(f"k={k} folds for n={n} samples")
    if k < 2:
        raise InvalidSpecError("k must be >= 2")
    perm = substream(seed, 0).permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, k)]


def _subset(d: Dataset, idx):
    return Dataset(d.X[idx], d.y[idx], d.column_names)


def _score(metric, X, y, betas):
    """Metric per lambda for a (n_lambda x p) coefficient block."""
    preds = betas @ X.T  # (n_lambda, n)
    if metric == "mse":
        return np.mean((y[None, :] - preds) ** 2, axis=1)
    if metric == "deviance":
        y01, _ = _binary_labels(y)
        t = (2.0 * y01 - 1.0)[None, :] * preds
        return 2.0 * np.mean(np.logaddexp(0.0, -t), axis=1)
    return np.array([auc(p, y) for p in preds])


def cross_validate(d: Dataset, spec: CvSpec, tilde: Coefficients, cfg: FitConfig = FitConfig()) -> CvResult:
    """Search the (alpha, lambda) grid by k-fold CV and refit at the best pair.

    Minimizes the mean metric (maximizes for auc); ties prefer larger lambda,
    then larger alpha.  Deterministic given (d, spec, tilde, cfg).
    """
    folds = kfold_split(d.n, spec.k, spec.seed)
    maximize = spec.metric == "auc"
    lam_info = {}
    rows = []
    best = None  # (mean, lam, alpha, row_index)
    for alpha in spec.alphas:
        lam_top, branch, fallback = lambda_max_with_fallback(d, alpha, tilde, cfg.loss)
        if not lam_top > 0.0:
            raise InvalidSpecError(f"degenerate lambda_max={lam_top} at alpha={alpha}")
        lam_info[alpha] = (lam_top, branch, fallback)
        lambdas = np.geomspace(lam_top, lam_top * spec.ratio, spec.n_lambda)
        scores = np.empty((spec.k, spec.n_lambda))
        for f, test_idx in enumerate(folds):
            train_idx = np.setdiff1d(np.arange(d.n), test_idx)
            train = _subset(d, train_idx)
            test = _subset(d, test_idx)
            if cfg.loss == "squared":
                train, s_f = standardize(train)
                test = s_f.apply(test)
                tilde_f = s_f.coefficients_to_standardized(tilde)
            else:
                tilde_f = tilde
            pspec = PathSpec(alpha=alpha, tilde=tilde_f, n_lambda=spec.n_lambda, ratio=spec.ratio)
            pres = _fit_grid(train, pspec, cfg, lambdas)
            scores[f] = _score(spec.metric, test.X, test.y, pres)
        mean = scores.mean(axis=0)
        sd = scores.std(axis=0, ddof=1) if spec.k > 1 else np.zeros_like(mean)
        for i, lam in enumerate(lambdas):
            rows.append(CvRow(alpha=alpha, lam=float(lam), mean=float(mean[i]), sd=float(sd[i])))
            cand = (float(mean[i]), float(lam), alpha)
            if best is None or _better(cand, best, maximize):
                best = cand
    best_mean, best_lambda, best_alpha = best
    refit = cd_fit(d, PenaltySpec(best_lambda, best_alpha), tilde, cfg)
    return CvResult(
        table=tuple(rows),
        best_alpha=best_alpha,
        best_lambda=best_lambda,
        refit=refit,
        lambda_max_info=lam_info,
    )


def _better(cand, best, maximize):
    cm, cl, ca = cand
    bm, bl, ba = best
    if cm != bm:
        return cm > bm if maximize else cm < bm
    if cl != bl:
        return cl > bl
    return ca > ba


def _fit_grid(d: Dataset, pspec: PathSpec, cfg: FitConfig, lambdas):
    """Warm-started coefficient block for an externally supplied lambda grid."""
    from . import _kernels

    X = np.asfortranarray(d.X)
    dead = np.flatnonzero((X * X).sum(axis=0) == 0.0)
    if dead.size:
        raise ZeroNormColumnError(int(dead[0]))
    beta0 = np.zeros(d.p)
    if cfg.loss == "squared":
        betas, _, _ = _kernels.cd_quadratic_path(
            X, d.y, pspec.tilde.beta, lambdas, pspec.alpha, beta0, cfg.max_sweeps, cfg.tol
        )
    else:
        y01, _ = _binary_labels(d.y)
        betas, _, _ = _kernels.cd_logistic_path(
            X, y01, pspec.tilde.beta, lambdas, pspec.alpha, beta0, cfg.max_sweeps, cfg.tol
        )
    return betas
