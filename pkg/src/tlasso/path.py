"""Trivial-solution predicates, lambda_max, and warm-started path fitting.

A solution is "trivial" when it equals either the zero vector or the anchor
tilde.  Stationarity of a trivial point is a set of per-coordinate linear
inequalities in lam on the correlations between features and the residual at
that point; lambda_max is the smallest lam at which one of the two trivial
points becomes optimal.  Because penalty weights can be negative multiples
of lam (for alpha on the wrong side of 1/2), the feasible lam set of a
branch is an interval [lo, hi], not an up-set; both ends are tracked.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import Coefficients, Dataset
from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    NoFiniteLambdaMaxError,
    ZeroNormColumnError,
)
from .solver import FitConfig, FitResult, PenaltySpec, _binary_labels, _loss_value, _penalty_value, kkt_check


@dataclass(frozen=True)
class PathSpec:
    alpha: float
    tilde: Coefficients
    n_lambda: int = 100
    ratio: float = 1e-4

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidSpecError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.n_lambda < 2:
            raise InvalidSpecError("n_lambda must be >= 2")
        if not 0.0 < self.ratio < 1.0:
            raise InvalidSpecError("ratio must be in (0, 1)")


@dataclass(frozen=True)
class PathResult:
    lambdas: np.ndarray         # strictly decreasing
    fits: tuple                 # FitResult per lambda
    lambda_max_branch: str      # "unchanged" | "zero" | "fallback"
    lambda_max_fallback: bool


def _trivial_correlations(d: Dataset, tilde_beta, at_tilde, loss):
    """(1/n) X^T (y - prediction) at the trivial point (0 or tilde)."""
    beta = tilde_beta if at_tilde else np.zeros(d.p)
    eta = d.X @ beta
    if loss == "squared":
        resid = d.y - eta
    else:
        y01, _ = _binary_labels(d.y)
        resid = y01 - 1.0 / (1.0 + np.exp(-np.clip(eta, -500, 500)))
    return d.X.T @ resid / d.n


def _branch_coeffs(tilde_beta, alpha, branch):
    """Per-coordinate (u, l) with the branch condition -lam*l <= c_j <= lam*u."""
    s = np.sign(tilde_beta)
    nz = s != 0.0
    u = np.ones_like(tilde_beta)
    l = np.ones_like(tilde_beta)
    if branch == "unchanged":
        u[nz] = (1.0 - alpha) + alpha * s[nz]
        l[nz] = (1.0 - alpha) - alpha * s[nz]
    else:
        u[nz] = alpha - (1.0 - alpha) * s[nz]
        l[nz] = alpha + (1.0 - alpha) * s[nz]
    return u, l


def _branch_margin(c, u, l, lam):
    """Signed min slack of -lam*l <= c <= lam*u; >= 0 means satisfied."""
    return float(np.minimum(lam * u - c, c + lam * l).min())


def _branch_interval(c, u, l):
    """Feasible lam interval [lo, hi] of the branch, or None if empty.

    Each coordinate contributes: c <= lam*u gives a lower bound c/u when
    u > 0 and c > 0, an upper bound when u < 0 and c < 0, and infeasibility
    when u <= 0 with c on the wrong side; symmetrically for -lam*l <= c.
    """
    lo = 0.0
    hi = math.inf
    for cj, uj, lj in zip(c, u, l):
        # upper-side constraint: cj <= lam*uj
        if uj > 0.0:
            if cj > 0.0:
                lo = max(lo, cj / uj)
        elif cj > 0.0 or (uj < 0.0 and cj >= 0.0):
            return None
        elif uj < 0.0:  # cj < 0 here
            hi = min(hi, cj / uj)
        # lower-side constraint: -lam*lj <= cj
        if lj > 0.0:
            if cj < 0.0:
                lo = max(lo, -cj / lj)
        elif cj < 0.0 or (lj < 0.0 and cj <= 0.0):
            return None
        elif lj < 0.0:  # cj > 0 here
            hi = min(hi, -cj / lj)
    if lo > hi:
        return None
    return lo, hi


def _predicate(d, pen, tilde, branch, loss):
    if tilde.p != d.p:
        raise DimensionMismatchError(f"tilde length {tilde.p} != p={d.p}")
    c = _trivial_correlations(d, tilde.beta, branch == "unchanged", loss)
    u, l = _branch_coeffs(tilde.beta, pen.alpha, branch)
    return _branch_margin(c, u, l, pen.lam)


def unchanged_solution_margin(d: Dataset, pen: PenaltySpec, tilde: Coefficients, loss="squared"):
    """Signed min slack of the unchanged-solution inequalities (>= 0: holds)."""
    return _predicate(d, pen, tilde, "unchanged", loss)


def zero_solution_margin(d: Dataset, pen: PenaltySpec, tilde: Coefficients, loss="squared"):
    """Signed min slack of the zero-solution inequalities (>= 0: holds)."""
    return _predicate(d, pen, tilde, "zero", loss)


def unchanged_solution_exists(d: Dataset, pen: PenaltySpec, tilde: Coefficients, loss="squared"):
    """True iff beta_hat = tilde is a minimizer at this penalty."""
    return unchanged_solution_margin(d, pen, tilde, loss) >= 0.0


def zero_solution_exists(d: Dataset, pen: PenaltySpec, tilde: Coefficients, loss="squared"):
    """True iff beta_hat = 0 is a minimizer at this penalty."""
    return zero_solution_margin(d, pen, tilde, loss) >= 0.0


def lambda_max_detail(d: Dataset, alpha, tilde: Coefficients, loss="squared"):
    """Smallest feasible lam per trivial branch; returns (value, branch).

    Picks the branch with the smaller entry value (path grids want the
    smallest lam at which some trivial solution certifies).  Raises
    NoFiniteLambdaMaxError when neither branch is feasible at any lam,
    which can happen exactly at alpha = 1/2 with sign-incompatible
    residual correlations.
    """
    if tilde.p != d.p:
        raise DimensionMismatchError(f"tilde length {tilde.p} != p={d.p}")
    best = None
    for branch in ("unchanged", "zero"):
        c = _trivial_correlations(d, tilde.beta, branch == "unchanged", loss)
        u, l = _branch_coeffs(tilde.beta, alpha, branch)
        interval = _branch_interval(c, u, l)
        if interval is None:
            continue
        lo, hi = interval
        # a zero-width interval means the trivial point is optimal only at
        # one isolated lam (alpha 0/1 anchored coordinates pin it exactly);
        # nothing can anchor a grid there, so it does not certify
        if not hi > lo:
            continue
        if best is None or lo < best[0]:
            best = (lo, branch)
    if best is None:
        raise NoFiniteLambdaMaxError(f"no trivial solution at any finite lam (alpha={alpha})")
    return best


def lambda_max(d: Dataset, alpha, tilde: Coefficients, loss="squared"):
    """Smallest lam at which a trivial (zero or unchanged) solution is optimal."""
    return lambda_max_detail(d, alpha, tilde, loss)[0]


def lambda_max_with_fallback(d: Dataset, alpha, tilde: Coefficients, loss="squared"):
    """(value, branch, fallback) with 1.5 * max|(1/n)X^T y| when no branch is feasible."""
    try:
        value, branch = lambda_max_detail(d, alpha, tilde, loss)
        return value, branch, False
    except NoFiniteLambdaMaxError:
        c = _trivial_correlations(d, tilde.beta, False, loss)
        return 1.5 * float(np.abs(c).max()), "fallback", True


def fit_path(d: Dataset, spec: PathSpec, cfg: FitConfig = FitConfig()) -> PathResult:
    """Fit a log-spaced descending lambda grid with warm starts.

    The grid runs from lambda_max down to lambda_max * ratio with exact
    endpoints.  The first fit starts at the trivial solution that certified
    lambda_max (tilde for the unchanged branch, zeros otherwise); each later
    fit starts from the previous solution.  cfg.init is ignored.
    """
    if spec.tilde.p != d.p:
        raise DimensionMismatchError(f"tilde length {spec.tilde.p} != p={d.p}")
    lam_top, branch, fallback = lambda_max_with_fallback(d, spec.alpha, spec.tilde, cfg.loss)
    if not lam_top > 0.0:
        raise InvalidSpecError(f"degenerate lambda_max={lam_top}; path grid needs a positive top")
    lambdas = np.geomspace(lam_top, lam_top * spec.ratio, spec.n_lambda)
    X = np.asfortranarray(d.X)
    nu = (X * X).sum(axis=0) / d.n
    dead = np.flatnonzero(nu == 0.0)
    if dead.size:
        raise ZeroNormColumnError(int(dead[0]))
    beta0 = spec.tilde.beta.copy() if branch == "unchanged" else np.zeros(d.p)
    if cfg.loss == "squared":
        betas, sweeps, deltas = _kernels.cd_quadratic_path(
            X, d.y, spec.tilde.beta, lambdas, spec.alpha, beta0, cfg.max_sweeps, cfg.tol
        )
        y01 = None
        d_eval = d
    else:
        y01, _ = _binary_labels(d.y)
        betas, sweeps, deltas = _kernels.cd_logistic_path(
            X, y01, spec.tilde.beta, lambdas, spec.alpha, beta0, cfg.max_sweeps, cfg.tol
        )
        d_eval = Dataset(d.X, y01, d.column_names)
    fits = []
    for k, lam in enumerate(lambdas):
        pen = PenaltySpec(float(lam), spec.alpha)
        coefs = Coefficients(betas[k], 0.0)
        obj = _loss_value(betas[k], 0.0, d, cfg.loss, y01) + _penalty_value(betas[k], spec.tilde.beta, pen)
        fits.append(
            FitResult(
                coefficients=coefs,
                objective=obj,
                sweeps_used=int(sweeps[k]),
                kkt_residual=kkt_check(coefs, d_eval, pen, spec.tilde, cfg.loss),
                converged=bool(deltas[k] < cfg.tol),
            )
        )
    return PathResult(lambdas=lambdas, fits=tuple(fits), lambda_max_branch=branch, lambda_max_fallback=fallback)
