import math

import numpy as np
import pytest

import tlasso as tl
from tlasso.errors import NotOrthogonalError
from tlasso.solver import FitConfig, PenaltySpec, cd_fit
from tlasso.theory import (
    BoundInputs,
    SignCase,
    TheoryCase,
    bound_violation_experiment,
    brute_force_fit,
    error_bound,
    failure_probability,
    gre_proxy,
    reference_lasso_cd,
    screening_predicate,
    sign_recovery_exact,
    sign_recovery_sufficient,
    sign_unchanging_exact,
    sign_unchanging_sufficient,
    top_gram_eigenvalue,
    two_stage_bound,
)
from tlasso.verify import orthogonal_support_design


def _problem(seed, n=25, p=4):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = rng.uniform(-1, 1, p) * (rng.uniform(size=p) < 0.6)
    y = X @ beta + 0.3 * rng.standard_normal(n)
    tilde = rng.uniform(-1, 1, p) * (rng.uniform(size=p) < 0.5)
    return tl.Dataset(X, y), tl.Coefficients(tilde)


def test_brute_force_lambda_zero_is_least_squares():
    d, tilde = _problem(0, n=30, p=5)
    bf = brute_force_fit(d, PenaltySpec(0.0, 0.5), tilde)
    ls, *_ = np.linalg.lstsq(d.X, d.y, rcond=None)
    np.testing.assert_allclose(bf.beta, ls, atol=1e-8)


def test_brute_force_alpha_one_is_lasso():
    d, tilde = _problem(1, n=30, p=5)
    bf = brute_force_fit(d, PenaltySpec(0.15, 1.0), tilde)
    ref = reference_lasso_cd(d.X, d.y, 0.15, tol=1e-12)
    np.testing.assert_allclose(bf.beta, ref, atol=1e-8)


def _grid_search_2d(d, pen, tilde, res=1e-5):
    """Exhaustive box search for p <= 2, nested to the requested resolution."""
    ls, *_ = np.linalg.lstsq(d.X, d.y, rcond=None)
    anchors = np.stack([np.zeros(d.p), tilde.beta, ls])
    lo = anchors.min(axis=0) - 0.5
    hi = anchors.max(axis=0) + 0.5

    def objective(B0, B1):
        resid = d.y[:, None, None] - d.X[:, 0, None, None] * B0 - d.X[:, 1, None, None] * B1
        loss = 0.5 * np.mean(resid**2, axis=0)
        pen1 = pen.lam * pen.alpha * (np.abs(B0) + np.abs(B1))
        pen2 = pen.lam * (1 - pen.alpha) * (np.abs(B0 - tilde.beta[0]) + np.abs(B1 - tilde.beta[1]))
        return loss + pen1 + pen2

    best = None
    for _ in range(4):
        g0 = np.linspace(lo[0], hi[0], 81)
        g1 = np.linspace(lo[1], hi[1], 81)
        B0, B1 = np.meshgrid(g0, g1, indexing="ij")
        obj = objective(B0, B1)
        i, j = np.unravel_index(np.argmin(obj), obj.shape)
        best = np.array([g0[i], g1[j]])
        span0 = (g0[1] - g0[0]) * 2
        span1 = (g1[1] - g1[0]) * 2
        lo = best - np.array([span0, span1])
        hi = best + np.array([span0, span1])
    return best


def test_brute_force_cross_checked_by_2d_grid_search():
    for seed in range(10):
        rng = np.random.default_rng(300 + seed)
        X = rng.standard_normal((20, 2))
        y = X @ rng.uniform(-1, 1, 2) + 0.3 * rng.standard_normal(20)
        d = tl.Dataset(X, y)
        tilde = tl.Coefficients(rng.uniform(-1, 1, 2))
        pen = PenaltySpec(float(rng.uniform(0.02, 0.5)), float(rng.choice([0.0, 0.25, 0.5, 0.75, 1.0])))
        bf = brute_force_fit(d, pen, tilde)
        grid = _grid_search_2d(d, pen, tilde)
        assert np.abs(bf.beta - grid).max() < 2e-4


def test_top_eigenvalue_matches_eigvalsh():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((40, 7))
    L = top_gram_eigenvalue(X)
    expect = float(np.linalg.eigvalsh(X.T @ X / 40)[-1])
    assert L == pytest.approx(expect, rel=1e-10)


def test_gre_proxy_examples():
    n = 50
    rng = np.random.default_rng(3)
    # orthonormal design: exactly 1
    Q, _ = np.linalg.qr(rng.standard_normal((n, 5)))
    X = math.sqrt(n) * Q
    assert gre_proxy(X) == pytest.approx(1.0, abs=1e-10)
    # duplicated column: rank deficiency makes it 0
    X2 = np.hstack([X, X[:, :1]])
    assert gre_proxy(X2) == pytest.approx(0.0, abs=1e-10)


def test_gre_proxy_matches_inverse_power_iteration():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((200, 20))
    G = X.T @ X / 200
    # independent route: inverse power iteration on the Gram matrix
    v = np.ones(20) / math.sqrt(20)
    for _ in range(5000):
        w = np.linalg.solve(G, v)
        v = w / np.linalg.norm(w)
    lam_min = float(v @ G @ v)
    assert gre_proxy(X) == pytest.approx(lam_min, abs=1e-8)


def test_error_bound_examples():
    # direct arithmetic case
    b = BoundInputs(alpha=0.5, c=0.5, lambda_n=0.1, s=10, phi=1.0, delta_l1=0.0)
    assert error_bound(b) == pytest.approx(0.4)
    # delta = 0 closed forms, and smaller bound for alpha < 1
    b1 = BoundInputs(alpha=1.0, c=0.5, lambda_n=0.2, s=5, phi=0.9)
    assert error_bound(b1) == pytest.approx(4 * (1.5**2) * 0.04 * 5 / 0.81, rel=1e-12)
    b2 = BoundInputs(alpha=0.25, c=0.5, lambda_n=0.2, s=5, phi=0.9)
    assert error_bound(b2) == pytest.approx(4 * (0.75**2) * 0.04 * 5 / 0.81, rel=1e-12)
    assert error_bound(b2) < error_bound(b1)


def test_error_bound_root_and_factored_forms_agree():
    rng = np.random.default_rng(5)
    for _ in range(200):
        alpha = float(rng.uniform(0, 1))
        c = float(rng.uniform(0.05, 1.0))
        lam = float(rng.uniform(1e-4, 1.0))
        s = int(rng.integers(1, 20))
        phi = float(rng.uniform(0.1, 2.0))
        dl1 = float(rng.uniform(0, 5.0))
        b = BoundInputs(alpha=alpha, c=c, lambda_n=lam, s=s, phi=phi, delta_l1=dl1)
        a = alpha + c
        factored = (a**2 * lam**2 * s / phi**2) * (
            1 + math.sqrt(1 + 2 * (1 - alpha) * phi * dl1 / (a**2 * lam * s))
        ) ** 2
        assert error_bound(b) == pytest.approx(factored, rel=1e-12)


def test_failure_probability():
    b = BoundInputs(alpha=0.5, c=0.5, lambda_n=0.3, s=5, phi=1.0, n=100, sigma=1.0, p=20)
    expect = math.exp(-100 * (0.5 * 0.3) ** 2 / 2 + math.log(40))
    assert failure_probability(b) == pytest.approx(expect, rel=1e-12)
    with pytest.raises(ValueError):
        failure_probability(BoundInputs(alpha=0.5, c=0.5, lambda_n=0.3, s=5, phi=1.0))


def test_two_stage_bound_reductions():
    base = dict(alpha=0.5, c=0.5, lambda_n=0.1, s=10, phi=1.0, delta_l1=0.0,
                phi_prime=1.0, c_prime=0.5)
    # lambda_m -> 0 with matched source truth
    b = BoundInputs(lambda_m=0.0, s_prime=5, **base)
    assert two_stage_bound(b) == pytest.approx(4 * (1.0**2) * 0.01 * 10, rel=1e-12)
    # s' = 0 gives the same reduction
    b2 = BoundInputs(lambda_m=0.3, s_prime=0, **base)
    assert two_stage_bound(b2) == pytest.approx(4 * (1.0**2) * 0.01 * 10, rel=1e-12)
    # all-ones inputs evaluated directly against the displayed formula
    b3 = BoundInputs(alpha=1.0, c=1.0, lambda_n=1.0, s=1, phi=1.0, delta_l1=1.0,
                     lambda_m=1.0, s_prime=1, phi_prime=1.0, c_prime=1.0)
    a = 2.0
    inner = 1 + 4 * 0.0 * 2 * 1 / (a**2 * 1) + 2 * 0.0 * 1 / (a**2 * 1)
    assert two_stage_bound(b3) == pytest.approx(a**2 * (1 + math.sqrt(inner)) ** 2, rel=1e-12)


def test_screening_predicate_modes():
    tc = TheoryCase(beta_star=np.array([0.3, 0.0, 0.9]), tilde=np.array([0.3, 0.0, 0.9]))
    b = BoundInputs(alpha=0.5, c=0.5, lambda_n=0.1, s=10, phi=1.0, delta_l1=0.0)
    assert error_bound(b) == pytest.approx(0.4)
    lit = screening_predicate(tc, b, mode="paper_literal")
    assert lit == {0: False, 2: True}
    sqrt_mode = screening_predicate(tc, b, mode="sqrt_variant")
    # sqrt(0.4) ~ 0.632: only the 0.9 coefficient clears it
    assert sqrt_mode == {0: False, 2: True}
    big = screening_predicate(
        TheoryCase(beta_star=np.array([0.8, 0.0, 0.9]), tilde=np.zeros(3)), b, "paper_literal"
    )
    assert big == {0: True, 2: True}
    with pytest.raises(ValueError):
        screening_predicate(tc, b, mode="bogus")


def test_sign_predicates_require_orthonormal_support():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((30, 4))
    case = SignCase(X, np.zeros(30))
    tc = TheoryCase(beta_star=np.array([1.0, -1.0, 0, 0]), tilde=np.zeros(4))
    with pytest.raises(NotOrthogonalError):
        sign_recovery_exact(case, PenaltySpec(0.3, 0.5), tc)


def test_sign_recovery_noiseless_matched_anchor():
    rng = np.random.default_rng(7)
    n, s, extra = 50, 3, 3
    X = orthogonal_support_design(rng, n, s, extra, coherence=0.3)
    beta = np.zeros(s + extra)
    beta[:s] = [1.2, -0.8, 1.5]
    tc = TheoryCase(beta_star=beta, tilde=beta.copy())
    case = SignCase(X, np.zeros(n))
    pen = PenaltySpec(0.3, 0.5)
    pred = sign_recovery_exact(case, pen, tc)
    assert pred.holds
    d = tl.Dataset(X, X @ beta)
    fit = cd_fit(d, pen, tl.Coefficients(beta.copy()), FitConfig(tol=1e-11))
    assert np.array_equal(np.sign(fit.coefficients.beta), np.sign(beta))


def test_sign_recovery_zero_noise_three_branch_map():
    # with eps = 0, tilde zero off-support, and balanced anchors the
    # stationarity relation collapses to the three-branch map
    # w = 0 / -delta / lam*sgn(beta*) split at delta in {0, -lam}
    lam, alpha = 0.4, 0.5

    def w_of(delta, beta_sign=1.0):
        u = lam * alpha * beta_sign + delta
        return -delta + math.copysign(max(abs(u) - lam * (1 - alpha), 0.0), u)

    assert w_of(0.05) == pytest.approx(0.0, abs=1e-15)
    assert w_of(0.3) == pytest.approx(0.0, abs=1e-15)
    assert w_of(-0.2) == pytest.approx(0.2, abs=1e-15)
    assert w_of(-lam) == pytest.approx(lam, abs=1e-15)
    assert w_of(-0.9) == pytest.approx(lam, abs=1e-15)
    assert w_of(-0.05, beta_sign=-1.0) == pytest.approx(0.0, abs=1e-15)
    assert w_of(0.2, beta_sign=-1.0) == pytest.approx(-0.2, abs=1e-15)
    assert w_of(0.9, beta_sign=-1.0) == pytest.approx(-lam, abs=1e-15)

    # and the predicate built on it agrees with the solver on such instances
    rng = np.random.default_rng(8)
    n, s = 40, 2
    X = orthogonal_support_design(rng, n, s, 2, coherence=0.2)
    beta = np.zeros(4)
    beta[:2] = [1.0, -1.3]
    for delta_val in (0.05, -0.2, -0.9):
        tilde = beta.copy()
        tilde[0] += delta_val
        tc = TheoryCase(beta_star=beta, tilde=tilde)
        case = SignCase(X, np.zeros(n))
        pred = sign_recovery_exact(case, PenaltySpec(lam, alpha), tc)
        d = tl.Dataset(X, X @ beta)
        fit = cd_fit(d, PenaltySpec(lam, alpha), tl.Coefficients(tilde), FitConfig(tol=1e-11))
        actual = np.array_equal(np.sign(fit.coefficients.beta), np.sign(beta))
        if abs(pred.margin) > 1e-6:
            assert pred.holds == actual


def test_sign_sufficient_thresholds():
    # beta-min thresholds at alpha = 1/2 and alpha = 1
    assert max(1.5 - 2 * 0.5, 2 * 0.5 - 0.5) == 0.5
    assert max(1.5 - 2 * 1.0, 2 * 1.0 - 0.5) == 1.5
    rng = np.random.default_rng(9)
    n, s = 40, 2
    X = orthogonal_support_design(rng, n, s, 2, coherence=0.2)
    lam = 0.4
    beta = np.zeros(4)
    beta[:2] = [1.0, -1.0]
    tc = TheoryCase(beta_star=beta, tilde=beta.copy())
    case = SignCase(X, np.zeros(n))
    assert sign_recovery_sufficient(case, PenaltySpec(lam, 0.5), tc).holds
    # beta_min = 1.0 < 1.5 * lam fails only when the threshold exceeds it
    assert sign_recovery_sufficient(case, PenaltySpec(0.8, 1.0), tc).margin < 1.0 - 0.8 * 1.5 + 1e-9


def test_sign_unchanging_remark_cases():
    rng = np.random.default_rng(10)
    n, s = 40, 3
    X = orthogonal_support_design(rng, n, s, 2, coherence=0.2)
    beta = np.zeros(5)
    beta[:3] = [0.9, -1.1, 0.7]
    tc = TheoryCase(beta_star=beta, tilde=beta.copy())
    case = SignCase(X, np.zeros(n))
    # alpha <= 1/2, eps = 0, delta = 0: second condition always satisfied,
    # first reduces to |beta*| > lam(2 alpha - 1) which is vacuous here
    for alpha in (0.0, 0.25, 0.5):
        pred = sign_unchanging_exact(case, PenaltySpec(0.5, alpha), tc)
        assert pred.holds
    # alpha > 1/2: threshold lam(2 alpha - 1) bites for large lam
    pred = sign_unchanging_exact(case, PenaltySpec(2.0, 1.0), tc)
    assert not pred.holds  # 0.7 < 2.0 * (2 - 1)


def test_sign_unchanging_sufficient_vacuous_incoherence():
    rng = np.random.default_rng(11)
    X = orthogonal_support_design(rng, 40, 2, 2, coherence=0.9)
    beta = np.zeros(4)
    beta[:2] = [1.0, 1.0]
    tc = TheoryCase(beta_star=beta, tilde=beta.copy())
    case = SignCase(X, np.zeros(40))
    # alpha <= 1/4 makes the incoherence condition vacuous even at 0.9
    pred = sign_unchanging_sufficient(case, PenaltySpec(0.3, 0.2), tc)
    assert pred.holds
    # alpha = 1/2: bound is 1/(4*0.5-1) = 1 and 0.9 < 1 still passes
    pred2 = sign_unchanging_sufficient(case, PenaltySpec(0.3, 0.5), tc)
    assert pred2.holds


def test_bound_violation_noiseless_is_zero():
    rate = bound_violation_experiment(n=40, p=6, s=2, sigma=0.0, alpha=0.5, c=0.5, trials=20, seed=0)
    assert rate == 0.0


def test_bound_violation_deterministic():
    r1 = bound_violation_experiment(n=60, p=8, s=3, sigma=1.0, alpha=0.5, c=0.5, trials=25, seed=3)
    r2 = bound_violation_experiment(n=60, p=8, s=3, sigma=1.0, alpha=0.5, c=0.5, trials=25, seed=3)
    assert r1 == r2
    with pytest.raises(ValueError):
        bound_violation_experiment(n=6, p=8, s=3, sigma=1.0, alpha=0.5, c=0.5, trials=5, seed=0)
