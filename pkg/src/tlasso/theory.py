"""Independent oracles and executable encodings of the estimator's theory.

brute_force_fit is a proximal-gradient solver sharing no code with the
coordinate-descent path (only the scalar threshold, which is the prox map
itself).  The remaining functions turn the estimation-error bound, the
two-stage bound, the screening rule, and the orthogonal-design sign
conditions into directly evaluable predicates, each reporting a signed
margin so boundary cases can be excluded in floating-point tests.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._kernels import tthresh
from .data import Coefficients, Dataset
from .errors import DimensionMismatchError, NoConvergenceError, NotOrthogonalError
from .solver import PenaltySpec
from .rng import substream

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class TheoryCase:
    """True/initial coefficient pair plus the noise and constant settings."""

    beta_star: np.ndarray
    tilde: np.ndarray
    noise_sigma: float = 1.0
    c: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "beta_star", np.asarray(self.beta_star, dtype=np.float64))
        object.__setattr__(self, "tilde", np.asarray(self.tilde, dtype=np.float64))
        if self.beta_star.shape != self.tilde.shape:
            raise DimensionMismatchError("beta_star and tilde lengths differ")

    @property
    def delta(self):
        return self.tilde - self.beta_star

    @property
    def support(self):
        return np.flatnonzero(self.beta_star)

    @property
    def s(self):
        return int(np.count_nonzero(self.beta_star))

    @property
    def tilde_support(self):
        return np.flatnonzero(self.tilde)


@dataclass(frozen=True)
class BoundInputs:
    """Inputs of the estimation-error bound and its two-stage extension."""

    alpha: float
    c: float
    lambda_n: float
    s: int
    phi: float
    delta_l1: float = 0.0
    # second-stage quantities (two_stage_bound)
    lambda_m: float = None
    s_prime: int = None
    phi_prime: float = None
    c_prime: float = None
    # tail-probability quantities (failure_probability)
    n: int = None
    sigma: float = None
    p: int = None

    def __post_init__(self):
        if not self.phi > 0:
            raise ValueError("phi must be > 0")
        if self.lambda_n < 0:
            raise ValueError("lambda_n must be >= 0")
        if self.s < 0 or self.delta_l1 < 0:
            raise ValueError("s and delta_l1 must be >= 0")


@dataclass(frozen=True)
class SignCase:
    """A design/noise draw for the orthogonal-support sign predicates."""

    X: np.ndarray
    epsilon: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.asarray(self.X, dtype=np.float64))
        object.__setattr__(self, "epsilon", np.asarray(self.epsilon, dtype=np.float64))
        if self.X.shape[0] != self.epsilon.shape[0]:
            raise DimensionMismatchError("X rows and epsilon length differ")


@dataclass(frozen=True)
class PredicateResult:
    """Boolean with the signed min slack over the predicate's inequalities."""

    holds: bool
    margin: float

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _prox_gradient(X, y, tilde, lam, alpha, step, beta, max_iter, gap_tol, lam_a, lam_b):
    n, p = X.shape
    g2 = lam * (2.0 * alpha - 1.0)
    gap = np.inf
    for it in range(max_iter):
        # gradient of (1/2n)||y - X beta||^2
        grad = np.zeros(p)
        for i in range(n):
            ri = -y[i]
            for j in range(p):
                ri += X[i, j] * beta[j]
            for j in range(p):
                grad[j] += X[i, j] * ri
        for j in range(p):
            grad[j] /= n
        # stationarity gap of the current iterate
        gap = 0.0
        for j in range(p):
            t = -grad[j]
            lo = 0.0
            hi = 0.0
            if beta[j] != 0.0:
                sg = 1.0 if beta[j] > 0 else -1.0
                lo += lam_a * sg
                hi += lam_a * sg
            else:
                lo -= lam_a
                hi += lam_a
            if beta[j] != tilde[j]:
                sg = 1.0 if beta[j] > tilde[j] else -1.0
                lo += lam_b * sg
                hi += lam_b * sg
            else:
                lo -= lam_b
                hi += lam_b
            if t < lo:
                r = lo - t
            elif t > hi:
                r = t - hi
            else:
                r = 0.0
            if r > gap:
                gap = r
        if gap <= gap_tol:
            return it, gap
        for j in range(p):
            u = beta[j] - step * grad[j]
            beta[j] = tthresh(u, step * lam, step * g2, tilde[j])
    return max_iter, gap


def top_gram_eigenvalue(X, tol=1e-13, max_iter=20_000):
    """Largest eigenvalue of (1/n) X^T X by power iteration."""
    X = np.asarray(X, dtype=np.float64)
    n, p = X.shape
    G = X.T @ X / n
    v = np.ones(p) / math.sqrt(p)
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new = float(v @ (G @ v))
        if abs(new - lam) <= tol * max(1.0, abs(new)):
            return new
        lam = new
    return lam


def brute_force_fit(d: Dataset, pen: PenaltySpec, tilde: Coefficients, gap_tol=1e-12, max_iter=10_000_000):
    """High-precision minimizer by proximal gradient descent with step 1/L.

    Independent of the coordinate-descent solver; intended for small p.
    Raises NoConvergenceError if the stationarity gap never reaches gap_tol.
    """
    if tilde.p != d.p:
        raise DimensionMismatchError(f"tilde length {tilde.p} != p={d.p}")
    L = top_gram_eigenvalue(d.X)
    if L <= 0.0:
        raise DimensionMismatchError("design has zero Gram; nothing to fit")
    step = 1.0 / L
    beta = np.zeros(d.p)
    X = np.asfortranarray(d.X)
    it, gap = _prox_gradient(
        X, d.y, tilde.beta, pen.lam, pen.alpha, step, beta, max_iter, gap_tol,
        pen.lam * pen.alpha, pen.lam * (1.0 - pen.alpha),
    )
    if gap > gap_tol:
        raise NoConvergenceError(f"stationarity gap {gap} after {max_iter} iterations")
    return Coefficients(beta, 0.0)


def reference_lasso_cd(X, y, lam, tol=1e-10, max_sweeps=200_000, init=None):
    """Plain-numpy cyclic CD lasso with the standard soft threshold.

    A second, independent route for the alpha = 1 and alpha = 0 reductions.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    nu = (X * X).sum(axis=0) / n
    beta = np.zeros(p) if init is None else np.array(init, dtype=np.float64)
    r = y - X @ beta
    for _ in range(max_sweeps):
        delta = 0.0
        for j in range(p):
            rho = X[:, j] @ r / n + nu[j] * beta[j]
            u = rho / nu[j]
            g = lam / nu[j]
            v = math.copysign(max(abs(u) - g, 0.0), u)
            if v != beta[j]:
                r -= (v - beta[j]) * X[:, j]
                delta = max(delta, abs(v - beta[j]))
                beta[j] = v
        if delta < tol:
            break
    return beta


def gre_proxy(X):
    """Min eigenvalue of (1/n) X^T X: a conservative lower bound for the
    restricted eigenvalue over any cone (the unrestricted infimum)."""
    X = np.asarray(X, dtype=np.float64)
    G = X.T @ X / X.shape[0]
    w = np.linalg.eigvalsh(G)
    return float(max(w[0], 0.0))


# ---------------------------------------------------------------------------
# error bounds
# ---------------------------------------------------------------------------

def error_bound(b: BoundInputs):
    """Squared-l2 estimation error bound.

    Evaluated in the root form
        ((a*lam*sqrt(s) + sqrt(a^2*lam^2*s + 2*phi*lam*(1-alpha)*D)) / phi)^2,
    a = alpha + c, D = ||Delta||_1, which equals the factored form
    (a^2*lam^2*s/phi^2) * (1 + sqrt(1 + 2*(1-alpha)*phi*D/(a^2*lam*s)))^2
    and stays defined at s = 0.
    """
    a = b.alpha + b.c
    lam = b.lambda_n
    lin = a * lam * math.sqrt(b.s)
    rad = math.sqrt(lin * lin + 2.0 * b.phi * lam * (1.0 - b.alpha) * b.delta_l1)
    return ((lin + rad) / b.phi) ** 2


def failure_probability(b: BoundInputs):
    """Tail mass exp(-n*c^2*lam^2 / (2*sigma^2) + log(2p)), unclamped.

    Can exceed 1 for small n; callers decide whether to clamp.
    """
    if b.n is None or b.sigma is None or b.p is None:
        raise ValueError("failure_probability needs n, sigma, and p")
    if b.sigma == 0.0:
        return 0.0
    return math.exp(-b.n * (b.c * b.lambda_n) ** 2 / (2.0 * b.sigma**2) + math.log(2.0 * b.p))


def two_stage_bound(b: BoundInputs):
    """Error bound when the anchor is itself an l1 fit on m source samples.

    Substitutes D <- 2*(1+c')*lambda_m*s'/phi' + ||Delta*||_1 into the
    one-stage root form; b.delta_l1 carries ||Delta*||_1 here.
    """
    if b.lambda_m is None or b.s_prime is None or b.phi_prime is None or b.c_prime is None:
        raise ValueError("two_stage_bound needs lambda_m, s_prime, phi_prime, c_prime")
    if not b.phi_prime > 0:
        raise ValueError("phi_prime must be > 0")
    source_l1 = 2.0 * (1.0 + b.c_prime) * b.lambda_m * b.s_prime / b.phi_prime
    one_stage = BoundInputs(
        alpha=b.alpha, c=b.c, lambda_n=b.lambda_n, s=b.s, phi=b.phi,
        delta_l1=source_l1 + b.delta_l1,
    )
    return error_bound(one_stage)


def screening_predicate(tc: TheoryCase, b: BoundInputs, mode="paper_literal"):
    """Per-support test of |beta*_j| against the error bound.

    paper_literal compares against the squared-error bound as displayed;
    sqrt_variant compares against its square root (the dimensionally
    consistent reading).  Returns {j: bool} over the support.
    """
    if mode not in ("paper_literal", "sqrt_variant"):
        raise ValueError(f"unknown mode {mode!r}")
    bound = error_bound(b)
    if mode == "sqrt_variant":
        bound = math.sqrt(bound)
    return {int(j): bool(abs(tc.beta_star[j]) > bound) for j in tc.support}


# ---------------------------------------------------------------------------
# orthogonal-design sign predicates
# ---------------------------------------------------------------------------

def _require_orthonormal(X, idx, n):
    if idx.size == 0:
        return
    G = X[:, idx].T @ X[:, idx] / n
    dev = float(np.abs(G - np.eye(idx.size)).max())
    if dev > ORTHO_TOL:
        raise NotOrthogonalError(f"(1/n) X_S^T X_S deviates from I by {dev:.2e}")


def _soft(u, g):
    return np.sign(u) * np.maximum(np.abs(u) - g, 0.0)


def sign_recovery_exact(case: SignCase, pen: PenaltySpec, tc: TheoryCase) -> PredicateResult:
    """Exact characterization of sgn(beta_hat) = sgn(beta_star).

    Requires (1/n) X_S^T X_S = I on the support S of beta_star.  w_S comes
    from the stationarity relation w_j = -Delta_j + S(lam*alpha*sgn(beta*_j)
    + Delta_j - (1/n)X_j^T eps, lam*(1-alpha)) rather than the printed case
    table.  The margin is the min slack over the sign condition on S and the
    certificate band on S^c.
    """
    n = case.X.shape[0]
    S = tc.support
    _require_orthonormal(case.X, S, n)
    lam, alpha = pen.lam, pen.alpha
    eps_corr = case.X.T @ case.epsilon / n
    delta = tc.delta
    margins = []
    w_S = np.zeros(S.size)
    for i, j in enumerate(S):
        bj = tc.beta_star[j]
        w = -delta[j] + _soft(lam * alpha * np.sign(bj) + delta[j] - eps_corr[j], lam * (1.0 - alpha))
        w_S[i] = w
        margins.append(float((bj - w) * np.sign(bj)))  # > 0 required
    Sc = np.setdiff1d(np.arange(case.X.shape[1]), S)
    if Sc.size:
        cross = case.X[:, Sc].T @ case.X[:, S] / n
        lhs = np.abs(cross @ w_S + eps_corr[Sc] + (1.0 - alpha) * lam * np.sign(tc.tilde[Sc]))
        rhs = lam * (alpha + (1.0 - alpha) * (tc.tilde[Sc] == 0.0))
        margins.extend((rhs - lhs).tolist())  # >= 0 required
    margin = min(margins) if margins else math.inf
    holds = all(m > 0 for m in margins[: S.size]) and all(m >= 0 for m in margins[S.size :])
    return PredicateResult(holds, margin)


def sign_recovery_sufficient(case: SignCase, pen: PenaltySpec, tc: TheoryCase) -> PredicateResult:
    """Sufficient conditions for sign recovery under sub-Gaussian noise.

    Direct evaluation: |Delta_S| <= lam/2; beta*_min > lam*max(3/2 - 2a,
    2a - 1/2); tilde zero off-support; cross-Gram row-l1 bound <= 1 (rows
    indexed by S^c, i.e. max_j in S^c of sum_k in S |(1/n)X_j^T X_k|).
    """
    n = case.X.shape[0]
    S = tc.support
    _require_orthonormal(case.X, S, n)
    lam, alpha = pen.lam, pen.alpha
    margins = []
    margins.append(0.5 * lam - float(np.abs(tc.delta[S]).max()) if S.size else math.inf)
    thresh = lam * max(1.5 - 2.0 * alpha, 2.0 * alpha - 0.5)
    beta_min = float(np.abs(tc.beta_star[S]).min()) if S.size else math.inf
    margins.append(beta_min - thresh)  # strict > required
    Sc = np.setdiff1d(np.arange(case.X.shape[1]), S)
    margins.append(math.inf if not Sc.size or np.all(tc.tilde[Sc] == 0.0) else -math.inf)
    if Sc.size and S.size:
        cross = np.abs(case.X[:, Sc].T @ case.X[:, S] / n).sum(axis=1)
        margins.append(1.0 - float(cross.max()))
    else:
        margins.append(math.inf)
    holds = margins[0] >= 0 and margins[1] > 0 and margins[2] > 0 and margins[3] >= 0
    return PredicateResult(holds, min(margins))


def sign_unchanging_exact(case: SignCase, pen: PenaltySpec, tc: TheoryCase) -> PredicateResult:
    """Exact characterization of sgn(beta_hat) = sgn(tilde).

    Requires orthonormal X on the tilde support.  w_j = S(lam*alpha*
    sgn(tilde_j) + Delta_j - (1/n)X_j^T eps, lam*(1-alpha)).
    """
    n = case.X.shape[0]
    St = tc.tilde_support
    _require_orthonormal(case.X, St, n)
    lam, alpha = pen.lam, pen.alpha
    eps_corr = case.X.T @ case.epsilon / n
    delta = tc.delta
    w = _soft(lam * alpha * np.sign(tc.tilde[St]) + delta[St] - eps_corr[St], lam * (1.0 - alpha))
    margins = [float(m) for m in (tc.tilde[St] - w) * np.sign(tc.tilde[St])]  # > 0 required
    n_sign = len(margins)
    Stc = np.setdiff1d(np.arange(case.X.shape[1]), St)
    if Stc.size:
        cross = case.X[:, Stc].T @ case.X[:, St] / n
        lhs = np.abs(cross @ (delta[St] - w) - eps_corr[Stc])
        margins.extend((lam - lhs).tolist())  # >= 0 required
    margin = min(margins) if margins else math.inf
    holds = all(m > 0 for m in margins[:n_sign]) and all(m >= 0 for m in margins[n_sign:])
    return PredicateResult(holds, margin)


def sign_unchanging_sufficient(case: SignCase, pen: PenaltySpec, tc: TheoryCase) -> PredicateResult:
    """Sufficient conditions for an unchanged sign pattern.

    |Delta_St| <= lam/2; min_{j in St} |beta*_j| > 2*lam*alpha; cross-Gram
    row-l1 bound <= 1/(4*alpha - 1)_+, vacuous (+inf) when alpha <= 1/4.
    """
    n = case.X.shape[0]
    St = tc.tilde_support
    _require_orthonormal(case.X, St, n)
    lam, alpha = pen.lam, pen.alpha
    margins = []
    margins.append(0.5 * lam - float(np.abs(tc.delta[St]).max()) if St.size else math.inf)
    beta_min = float(np.abs(tc.beta_star[St]).min()) if St.size else math.inf
    margins.append(beta_min - 2.0 * lam * alpha)  # strict > required
    Stc = np.setdiff1d(np.arange(case.X.shape[1]), St)
    pos = max(4.0 * alpha - 1.0, 0.0)
    if Stc.size and St.size and pos > 0.0:
        cross = np.abs(case.X[:, Stc].T @ case.X[:, St] / n).sum(axis=1)
        margins.append(1.0 / pos - float(cross.max()))
    else:
        margins.append(math.inf)
    holds = margins[0] >= 0 and margins[1] > 0 and margins[2] >= 0
    return PredicateResult(holds, min(margins))


# ---------------------------------------------------------------------------
# Monte-Carlo bound check
# ---------------------------------------------------------------------------

def bound_violation_experiment(n, p, s, sigma, alpha, c, trials, seed):
    """Fraction of random draws violating the estimation-error bound.

    Per trial: Gaussian design and noise, lam_n = (sigma/c)*sqrt(2*log(2p)/n)
    * 1.01 (keeps the tail mass below 1), anchor = truth plus a sparse
    perturbation, fit, then test ||beta_hat - beta*||^2 against the bound
    with phi from gre_proxy.  Requires n > p so the proxy is positive a.s.
    """
    from .solver import FitConfig, cd_fit

    if n <= p:
        raise ValueError("needs n > p for a positive Gram floor")
    lam_n = 0.0 if sigma == 0.0 else (sigma / c) * math.sqrt(2.0 * math.log(2.0 * p) / n) * 1.01
    cfg = FitConfig(tol=1e-9, max_sweeps=100_000)
    violations = 0
    for t in range(trials):
        rng = substream(seed, t)
        X = rng.standard_normal((n, p))
        support = rng.choice(p, size=s, replace=False)
        beta_star = np.zeros(p)
        beta_star[support] = rng.uniform(-1.0, 1.0, size=s)
        eps = sigma * rng.standard_normal(n)
        y = X @ beta_star + eps
        tilde = beta_star.copy()
        n_pert = (s + 1) // 2
        pert_idx = rng.choice(p, size=n_pert, replace=False)
        tilde[pert_idx] += rng.uniform(-0.5, 0.5, size=n_pert)
        d = Dataset(X, y)
        fit = cd_fit(d, PenaltySpec(lam_n, alpha), Coefficients(tilde), cfg)
        phi = gre_proxy(X)
        b = BoundInputs(
            alpha=alpha, c=c, lambda_n=lam_n, s=s, phi=phi,
            delta_l1=float(np.abs(tilde - beta_star).sum()),
        )
        err2 = float(np.sum((fit.coefficients.beta - beta_star) ** 2))
        if err2 > error_bound(b) * (1.0 + 1e-9) + 1e-12:
            violations += 1
    return violations / trials
