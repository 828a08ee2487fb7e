"""Executable verification suites for the solver and the theory predicates.

Each suite returns a JSON-ready record: name, pass/fail, counts, and the
parameters it ran with.  The acceptance tests call these functions at the
full advertised sample sizes; the CLI ``verify`` subcommand wraps them.

Floating-point policy: if-and-only-if statements are exact-arithmetic facts,
so instances whose inequality margins fall inside a small boundary band are
excluded and counted separately.
"""

import math
from dataclasses import dataclass

import numpy as np

from .data import Coefficients, Dataset
from .path import (
    lambda_max_detail,
    lambda_max_with_fallback,
    unchanged_solution_margin,
    zero_solution_margin,
)
from .rng import substream
from .solver import FitConfig, PenaltySpec, cd_fit
from .theory import (
    BoundInputs,
    SignCase,
    TheoryCase,
    bound_violation_experiment,
    brute_force_fit,
    error_bound,
    failure_probability,
    gre_proxy,
    reference_lasso_cd,
    sign_recovery_exact,
    sign_recovery_sufficient,
    sign_unchanging_exact,
    sign_unchanging_sufficient,
    two_stage_bound,
)
from .thresholds import ThresholdParams, soft_threshold, transfer_threshold_grid

ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
BOUNDARY_BAND = 1e-3


def _record(suite, passed, counts, params, failures=()):
    return {
        "suite": suite,
        "pass": bool(passed),
        "counts": counts,
        "params": params,
        "failures": list(failures)[:20],
    }


# ---------------------------------------------------------------------------
# threshold suite
# ---------------------------------------------------------------------------

def _scalar_objective(v, z, g1, g2, b):
    ga = 0.5 * (g1 + g2)
    gb = 0.5 * (g1 - g2)
    return 0.5 * (v - z) ** 2 + ga * np.abs(v) + gb * np.abs(v - b)


def grid_argmin(z, g1, g2, b, stages=3, points=2001):
    """Nested grid minimizer of the scalar objective (convex, so safe);
    effective resolution well below 1e-5 after the second stage."""
    lo = min(0.0, b, z) - g1 - 1.0
    hi = max(0.0, b, z) + g1 + 1.0
    best = lo
    for _ in range(stages):
        vs = np.linspace(lo, hi, points)
        obj = _scalar_objective(vs, z, g1, g2, b)
        i = int(np.argmin(obj))
        best = vs[i]
        lo, hi = vs[max(i - 2, 0)], vs[min(i + 2, points - 1)]
    return float(best)


def _grid_gap(z, v, g1, g2, b):
    """Vectorized subgradient stationarity gap at v for each z."""
    ga = 0.5 * (g1 + g2)
    gb = 0.5 * (g1 - g2)
    center = v - z
    lo = center + np.where(v != 0.0, ga * np.sign(v), -ga)
    hi = center + np.where(v != 0.0, ga * np.sign(v), ga)
    lo = lo + np.where(v != b, gb * np.sign(v - b), -gb)
    hi = hi + np.where(v != b, gb * np.sign(v - b), gb)
    return np.maximum(np.maximum(lo, 0.0) + np.maximum(-hi, 0.0), 0.0)


def threshold_suite(seed=0, n_params=1000, n_grid=10_000, oracle_per_param=16):
    """Monotonicity, symmetry, piece membership, subgradient optimality at
    1e-12, the alpha = 1 reduction, breakpoint continuity, and agreement
    with the nested-grid argmin oracle within 2e-5."""
    rng = substream(seed, 0)
    failures = []
    oracle_checked = 0
    for t in range(n_params):
        g1 = float(rng.uniform(0.0, 2.0))
        g2 = float(rng.uniform(-g1, g1))
        b = 0.0 if t % 10 == 9 else float(rng.uniform(-3.0, 3.0))
        params = ThresholdParams(g1, g2, b)
        span = g1 + abs(b) + 3.0
        z = np.linspace(-span, span, n_grid)
        v = transfer_threshold_grid(z, params)
        if np.any(np.diff(v) < 0.0):
            failures.append(f"monotonicity params=({g1},{g2},{b})")
        v_neg = transfer_threshold_grid(-z, ThresholdParams(g1, g2, -b))
        if not np.array_equal(v_neg, -v):
            failures.append(f"symmetry params=({g1},{g2},{b})")
        candidates = np.stack([
            np.zeros_like(z),
            np.full_like(z, b),
            z - g1 * np.sign(z),
            z - g2 * np.sign(b),
        ])
        if not np.all(np.any(candidates == v[None, :], axis=0)):
            failures.append(f"piece membership params=({g1},{g2},{b})")
        if float(_grid_gap(z, v, g1, g2, b).max()) > 1e-12:
            failures.append(f"subgradient params=({g1},{g2},{b})")
        v_soft = transfer_threshold_grid(z, ThresholdParams(g1, g1, b))
        soft = np.sign(z) * np.maximum(np.abs(z) - g1, 0.0)
        if not np.array_equal(v_soft, soft):
            failures.append(f"alpha=1 reduction params=({g1},{b})")
        for zb in (-g1, g2, g2 + b, g1 + b) if b >= 0 else (g1, -g2, -g2 + b, -g1 + b):
            neigh = transfer_threshold_grid(np.array([zb - 1e-9, zb, zb + 1e-9]), params)
            if np.abs(np.diff(neigh)).max() > 1e-8:
                failures.append(f"continuity params=({g1},{g2},{b}) at z={zb}")
        for z0 in np.quantile(z, np.linspace(0.02, 0.98, oracle_per_param)):
            v0 = float(transfer_threshold_grid(np.array([z0]), params)[0])
            if abs(v0 - grid_argmin(z0, g1, g2, b)) > 2e-5:
                failures.append(f"oracle params=({g1},{g2},{b}) z={z0}")
            oracle_checked += 1
    counts = {"params": n_params, "grid": n_grid, "oracle_points": oracle_checked, "failures": len(failures)}
    return _record("threshold", not failures, counts, {"seed": seed}, failures)


# ---------------------------------------------------------------------------
# solver-vs-oracle suite
# ---------------------------------------------------------------------------

def random_instance(rng, n_max=40, p_max=8, allow_lam_zero=True):
    """A random small fitting instance (dataset, penalty, anchor)."""
    n = int(rng.integers(15, n_max + 1))
    p = int(rng.integers(2, p_max + 1))
    X = rng.standard_normal((n, p))
    s = int(rng.integers(1, p + 1))
    beta_star = np.zeros(p)
    beta_star[rng.choice(p, size=s, replace=False)] = rng.uniform(-2.0, 2.0, size=s)
    y = X @ beta_star + 0.5 * rng.standard_normal(n)
    tilde = np.zeros(p)
    s_t = int(rng.integers(0, p + 1))
    if s_t:
        tilde[rng.choice(p, size=s_t, replace=False)] = rng.uniform(-2.0, 2.0, size=s_t)
    d = Dataset(X, y)
    alpha = float(ALPHA_GRID[int(rng.integers(len(ALPHA_GRID)))])
    lam_top, _, _ = lambda_max_with_fallback(d, alpha, Coefficients(tilde))
    lam_lo = 0.0 if allow_lam_zero else 1e-3 * max(lam_top, 1.0)
    lam = float(rng.uniform(lam_lo, 2.0 * max(lam_top, 1e-6)))
    return d, PenaltySpec(lam, alpha), Coefficients(tilde)


def oracle_suite(seed=0, n_instances=200, n_reductions=100, tol=1e-9):
    """cd_fit vs the proximal-gradient oracle within 1e-6 sup-norm; KKT
    residual <= 10*tol on every fit; alpha = 1 and alpha = 0 reductions
    against an independent plain lasso within 1e-6."""
    cfg = FitConfig(tol=tol)
    failures = []
    worst_gap = 0.0
    worst_kkt = 0.0
    for t in range(n_instances):
        rng = substream(seed, 1, t)
        d, pen, tilde = random_instance(rng)
        fit = cd_fit(d, pen, tilde, cfg)
        oracle = brute_force_fit(d, pen, tilde)
        gap = float(np.abs(fit.coefficients.beta - oracle.beta).max())
        worst_gap = max(worst_gap, gap)
        worst_kkt = max(worst_kkt, fit.kkt_residual)
        if gap > 1e-6:
            failures.append(f"oracle gap {gap:.2e} at instance {t}")
        if fit.kkt_residual > 10.0 * tol:
            failures.append(f"kkt residual {fit.kkt_residual:.2e} at instance {t}")
    for t in range(n_reductions):
        rng = substream(seed, 2, t)
        d, pen, tilde = random_instance(rng, allow_lam_zero=False)
        fit1 = cd_fit(d, PenaltySpec(pen.lam, 1.0), tilde, cfg)
        ref1 = reference_lasso_cd(d.X, d.y, pen.lam)
        if float(np.abs(fit1.coefficients.beta - ref1).max()) > 1e-6:
            failures.append(f"alpha=1 reduction at instance {t}")
        if fit1.kkt_residual > 10.0 * tol:
            failures.append(f"alpha=1 kkt at instance {t}")
        fit0 = cd_fit(d, PenaltySpec(pen.lam, 0.0), tilde, cfg)
        ref0 = tilde.beta + reference_lasso_cd(d.X, d.y - d.X @ tilde.beta, pen.lam)
        if float(np.abs(fit0.coefficients.beta - ref0).max()) > 1e-6:
            failures.append(f"alpha=0 shift identity at instance {t}")
        if fit0.kkt_residual > 10.0 * tol:
            failures.append(f"alpha=0 kkt at instance {t}")
    counts = {
        "oracle_instances": n_instances,
        "reduction_instances": n_reductions,
        "worst_oracle_gap": worst_gap,
        "worst_kkt_residual": worst_kkt,
        "failures": len(failures),
    }
    return _record("kkt", not failures, counts, {"seed": seed, "tol": tol}, failures)


# ---------------------------------------------------------------------------
# trivial-solution suite
# ---------------------------------------------------------------------------

def unchanging_suite(seed=0, n_iff=500, n_minimality=200, band=BOUNDARY_BAND):
    """Both directions of the trivial-solution characterizations against the
    solver, plus entry-value minimality of lambda_max."""
    cfg = FitConfig(tol=1e-9)
    failures = []
    tested = skipped = 0
    seen = {"unchanged": 0, "zero": 0, "neither": 0}
    t = 0
    while tested < n_iff and t < 50 * n_iff:
        rng = substream(seed, 3, t)
        t += 1
        d, pen, tilde = random_instance(rng, n_max=40, p_max=10, allow_lam_zero=False)
        m_u = unchanged_solution_margin(d, pen, tilde)
        m_z = zero_solution_margin(d, pen, tilde)
        if abs(m_u) < band or abs(m_z) < band:
            skipped += 1
            continue
        tested += 1
        fit = cd_fit(d, pen, tilde, cfg)
        beta = fit.coefficients.beta
        is_unchanged = float(np.abs(beta - tilde.beta).max()) < 1e-6
        is_zero = float(np.abs(beta).max()) < 1e-6
        if (m_u >= 0) != is_unchanged:
            failures.append(f"unchanged iff mismatch at instance {t - 1} (margin {m_u:.2e})")
        if (m_z >= 0) != is_zero:
            failures.append(f"zero iff mismatch at instance {t - 1} (margin {m_z:.2e})")
        if m_u >= 0 and m_z >= 0:
            seen["unchanged"] += 1
            seen["zero"] += 1
        elif m_u >= 0:
            seen["unchanged"] += 1
        elif m_z >= 0:
            seen["zero"] += 1
        else:
            seen["neither"] += 1
    if seen["unchanged"] == 0 or seen["zero"] == 0 or seen["neither"] == 0:
        failures.append(f"sampler did not exercise both predicate outcomes: {seen}")
    minimality_tested = 0
    for t in range(n_minimality * 4):
        if minimality_tested >= n_minimality:
            break
        rng = substream(seed, 4, t)
        d, pen, tilde = random_instance(rng, n_max=40, p_max=10)
        try:
            value, branch = lambda_max_detail(d, pen.alpha, tilde)
        except Exception:
            continue
        if not value > 0.0 or not math.isfinite(value):
            continue
        minimality_tested += 1
        margin_fn = unchanged_solution_margin if branch == "unchanged" else zero_solution_margin
        hi = margin_fn(d, PenaltySpec(value * (1.0 + 1e-9), pen.alpha), tilde)
        lo = margin_fn(d, PenaltySpec(value * (1.0 - 1e-6), pen.alpha), tilde)
        if hi < 0.0:
            failures.append(f"lambda_max not feasible just above entry (branch {branch}, margin {hi:.2e})")
        if lo >= 0.0:
            failures.append(f"lambda_max not minimal just below entry (branch {branch}, margin {lo:.2e})")
    counts = {
        "iff_tested": tested,
        "iff_skipped_boundary": skipped,
        "outcome_mix": seen,
        "minimality_tested": minimality_tested,
        "failures": len(failures),
    }
    return _record("unchanging", not failures, counts, {"seed": seed, "band": band}, failures)


# ---------------------------------------------------------------------------
# sign-theorem suite
# ---------------------------------------------------------------------------

def orthogonal_support_design(rng, n, s, p_extra, coherence):
    """Design with exactly orthonormal (1/n)-Gram on the first s columns and
    p_extra extra columns whose cross-Gram row-l1 equals ~coherence."""
    G = rng.standard_normal((n, s + p_extra))
    Q, _ = np.linalg.qr(G)
    X_s = math.sqrt(n) * Q[:, :s]
    cols = [X_s]
    for j in range(p_extra):
        w = rng.uniform(0.2, 1.0, size=s) * rng.choice((-1.0, 1.0), size=s)
        w *= coherence / np.abs(w).sum()
        ortho = Q[:, s + j]
        scale = math.sqrt(max(1.0 - float(w @ w), 1e-8))
        cols.append(math.sqrt(n) * (Q[:, :s] @ w + scale * ortho)[:, None])
    return np.hstack(cols) if p_extra else X_s


def _sign_instance(rng, lam, alpha, unchanging=False):
    """Random orthogonal-support instance for the exact sign predicates."""
    n = 60
    s = int(rng.integers(1, 5))
    p_extra = int(rng.integers(1, 6))
    coherence = float(rng.uniform(0.1, 0.9))
    X = orthogonal_support_design(rng, n, s, p_extra, coherence)
    p = s + p_extra
    beta_star = np.zeros(p)
    signs = rng.choice((-1.0, 1.0), size=s)
    beta_star[:s] = signs * rng.uniform(0.2 * lam, 3.0 * lam, size=s)
    tilde = beta_star.copy()
    tilde[:s] += rng.uniform(-lam, lam, size=s)
    if not unchanging and rng.uniform() < 0.4:
        j = int(rng.integers(s, p))
        tilde[j] = rng.uniform(-0.5, 0.5)
    if unchanging:
        # anchor support defines the orthonormal block; truth lives inside it
        tilde[:s] = np.where(tilde[:s] == 0.0, 0.1 * lam * signs, tilde[:s])
    eps = rng.uniform(0.0, 0.4 * lam) * rng.standard_normal(n)
    y = X @ beta_star + eps
    return Dataset(X, y), SignCase(X, eps), TheoryCase(beta_star, tilde)


def signs_suite(seed=0, n_exact=200, n_sufficient=200, band=BOUNDARY_BAND):
    """Bidirectional agreement of the exact sign predicates with solver sign
    outcomes (boundary band excluded), and sufficiency implying exactness."""
    cfg = FitConfig(tol=1e-10)
    failures = []
    rec_tested = rec_skipped = unch_tested = unch_skipped = 0
    rec_true = unch_true = 0
    t = 0
    while rec_tested < n_exact and t < 60 * n_exact:
        rng = substream(seed, 5, t)
        t += 1
        lam = float(rng.uniform(0.2, 1.0))
        alpha = float(ALPHA_GRID[int(rng.integers(len(ALPHA_GRID)))])
        pen = PenaltySpec(lam, alpha)
        d, case, tc = _sign_instance(rng, lam, alpha)
        pred = sign_recovery_exact(case, pen, tc)
        if abs(pred.margin) < band:
            rec_skipped += 1
            continue
        rec_tested += 1
        rec_true += int(pred.holds)
        fit = cd_fit(d, pen, Coefficients(tc.tilde), cfg)
        actual = np.array_equal(np.sign(fit.coefficients.beta), np.sign(tc.beta_star))
        if pred.holds != actual:
            failures.append(f"sign-recovery iff mismatch (margin {pred.margin:.2e})")
    t = 0
    while unch_tested < n_exact and t < 60 * n_exact:
        rng = substream(seed, 6, t)
        t += 1
        lam = float(rng.uniform(0.2, 1.0))
        alpha = float(ALPHA_GRID[int(rng.integers(len(ALPHA_GRID)))])
        pen = PenaltySpec(lam, alpha)
        d, case, tc = _sign_instance(rng, lam, alpha, unchanging=True)
        pred = sign_unchanging_exact(case, pen, tc)
        if abs(pred.margin) < band:
            unch_skipped += 1
            continue
        unch_tested += 1
        unch_true += int(pred.holds)
        fit = cd_fit(d, pen, Coefficients(tc.tilde), cfg)
        actual = np.array_equal(np.sign(fit.coefficients.beta), np.sign(tc.tilde))
        if pred.holds != actual:
            failures.append(f"sign-unchanging iff mismatch (margin {pred.margin:.2e})")
    suff_rec = suff_unch = 0
    for t in range(n_sufficient):
        rng = substream(seed, 7, t)
        lam = float(rng.uniform(0.2, 1.0))
        alpha = float(ALPHA_GRID[int(rng.integers(len(ALPHA_GRID)))])
        pen = PenaltySpec(lam, alpha)
        d, case, tc = _sufficient_instance(rng, lam, alpha, kind="recovery")
        suff = sign_recovery_sufficient(case, pen, tc)
        if suff.holds and suff.margin > 1e-9:
            suff_rec += 1
            exact = sign_recovery_exact(case, pen, tc)
            if not exact.holds:
                failures.append(f"sufficient-but-not-exact recovery (margins {suff.margin:.2e}/{exact.margin:.2e})")
        d, case, tc = _sufficient_instance(rng, lam, alpha, kind="unchanging")
        suff = sign_unchanging_sufficient(case, pen, tc)
        if suff.holds and suff.margin > 1e-9:
            suff_unch += 1
            exact = sign_unchanging_exact(case, pen, tc)
            if not exact.holds:
                failures.append(f"sufficient-but-not-exact unchanging (margins {suff.margin:.2e}/{exact.margin:.2e})")
    if min(rec_true, unch_true) == 0 or rec_true == rec_tested or unch_true == unch_tested:
        failures.append(
            f"sampler lacks outcome diversity: recovery {rec_true}/{rec_tested}, unchanging {unch_true}/{unch_tested}"
        )
    if suff_rec == 0 or suff_unch == 0:
        failures.append(f"no sufficient-true instances sampled ({suff_rec}, {suff_unch})")
    counts = {
        "recovery_tested": rec_tested,
        "recovery_true": rec_true,
        "recovery_skipped": rec_skipped,
        "unchanging_tested": unch_tested,
        "unchanging_true": unch_true,
        "unchanging_skipped": unch_skipped,
        "sufficient_recovery_true": suff_rec,
        "sufficient_unchanging_true": suff_unch,
        "failures": len(failures),
    }
    return _record("signs", not failures, counts, {"seed": seed, "band": band}, failures)


def _sufficient_instance(rng, lam, alpha, kind):
    """Instance family for the sufficiency implications: low cross-Gram
    coherence, sign-compatible anchors, and noise kept inside the
    concentration event the sufficient conditions are derived under."""
    n = 60
    s = int(rng.integers(1, 5))
    p_extra = int(rng.integers(1, 6))
    coherence = float(rng.uniform(0.05, 0.3))
    X = orthogonal_support_design(rng, n, s, p_extra, coherence)
    p = s + p_extra
    beta_star = np.zeros(p)
    signs = rng.choice((-1.0, 1.0), size=s)
    if kind == "recovery":
        thresh = lam * max(1.5 - 2.0 * alpha, 2.0 * alpha - 0.5)
    else:
        thresh = 2.0 * lam * alpha + 1e-6
    beta_star[:s] = signs * rng.uniform(0.3, 2.0, size=s) * max(thresh, 0.3 * lam)
    delta = np.zeros(p)
    delta[:s] = rng.uniform(-1.0, 1.0, size=s) * np.minimum(0.7 * lam, 0.95 * np.abs(beta_star[:s]))
    tilde = beta_star + delta
    eps = rng.standard_normal(n)
    corr = np.abs(X.T @ eps / n).max()
    target = 0.45 * lam * rng.uniform(0.2, 1.0)
    if corr > 0:
        eps *= target / corr
    y = X @ beta_star + eps
    return Dataset(X, y), SignCase(X, eps), TheoryCase(beta_star, tilde)


# ---------------------------------------------------------------------------
# bound suite
# ---------------------------------------------------------------------------

def bounds_suite(seed=0, n_violation_trials=1000, n=200, p=20, s=5, sigma=1.0, c=0.5):
    """Monte-Carlo estimation-error bound check at alpha in {0.5, 1}, plus
    the two rate-ratio assertions and bound-shape properties."""
    failures = []
    rates = {}
    for alpha in (0.5, 1.0):
        rate = bound_violation_experiment(n, p, s, sigma, alpha, c, n_violation_trials, seed)
        lam_n = (sigma / c) * math.sqrt(2.0 * math.log(2.0 * p) / n) * 1.01
        nu = failure_probability(BoundInputs(alpha=alpha, c=c, lambda_n=lam_n, s=s, phi=1.0, n=n, sigma=sigma, p=p))
        limit = max(min(nu, 1.0), 0.01)
        rates[alpha] = (rate, nu)
        if rate > limit:
            failures.append(f"violation rate {rate} > {limit} at alpha={alpha}")
    phi = 1.0
    lam_grid = [10.0 ** (-k) for k in range(1, 7)]
    for alpha in ALPHA_GRID:
        for lam in lam_grid:
            b0 = BoundInputs(alpha=alpha, c=c, lambda_n=lam, s=10, phi=phi, delta_l1=0.0)
            ratio = error_bound(b0) / lam**2
            cap = 4.0 * (alpha + c) ** 2 * 10 / phi**2 * (1.0 + 1e-9)
            if ratio > cap:
                failures.append(f"lam^2 ratio {ratio} > {cap} at alpha={alpha}, lam={lam}")
            b1 = BoundInputs(alpha=alpha, c=c, lambda_n=lam, s=10, phi=phi, delta_l1=1.0)
            ratio1 = error_bound(b1) / lam
            cap1 = 8.0 * (1.0 - alpha) / phi * 1.01 + 4.0 * (alpha + c) ** 2 * lam * 10 / phi**2 * (1.0 + 1e-9)
            if ratio1 > cap1:
                failures.append(f"lam ratio {ratio1} > {cap1} at alpha={alpha}, lam={lam}")
        if alpha < 1.0:
            b_small = BoundInputs(alpha=alpha, c=c, lambda_n=lam_grid[-1], s=10, phi=phi, delta_l1=1.0)
            if error_bound(b_small) / lam_grid[-1] > 8.0 * (1.0 - alpha) / phi * 1.01:
                failures.append(f"limit ratio exceeds 8(1-alpha)/phi at alpha={alpha}")
    for lam in (0.05, 0.2):
        vals = [error_bound(BoundInputs(alpha=a, c=c, lambda_n=lam, s=7, phi=0.8)) for a in np.linspace(0, 1, 21)]
        if np.any(np.diff(vals) < -1e-15):
            failures.append(f"bound not nondecreasing in alpha at lam={lam}")
    two = two_stage_bound(
        BoundInputs(alpha=0.5, c=c, lambda_n=0.1, s=10, phi=1.0, delta_l1=0.0,
                    lambda_m=0.0, s_prime=5, phi_prime=1.0, c_prime=0.5)
    )
    if abs(two - 4.0 * (0.5 + c) ** 2 * 0.01 * 10) > 1e-12:
        failures.append("two-stage bound does not reduce when lambda_m = 0")
    counts = {"violation_rates": {str(a): r for a, r in rates.items()}, "failures": len(failures)}
    params = {"seed": seed, "trials": n_violation_trials, "n": n, "p": p, "s": s, "sigma": sigma, "c": c}
    return _record("bounds", not failures, counts, params, failures)


SUITES = {
    "threshold": threshold_suite,
    "kkt": oracle_suite,
    "unchanging": unchanging_suite,
    "signs": signs_suite,
    "bounds": bounds_suite,
}


def run_suites(names, seed=0, **overrides):
    """Run the named suites (or all) and return their records."""
    if names == "all" or names == ["all"]:
        names = list(SUITES)
    elif isinstance(names, str):
        names = [names]
    records = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
        kwargs = overrides.get(name, {})
        records.append(SUITES[name](seed=seed, **kwargs))
    return records
