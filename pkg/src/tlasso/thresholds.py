"""Scalar proximal operators: soft threshold and the two-anchor threshold.

The two-anchor operator minimizes, for fixed z,

    (1/2)(v - z)^2 + g_a*|v| + g_b*|v - b|,   g_a = (g1+g2)/2,  g_b = (g1-g2)/2,

whose minimizer is piecewise linear in z with flat steps at 0 and b.  The
parameterization (g1, g2) with |g2| <= g1 keeps both weights nonnegative; in
the solver g1 = lam and g2 = lam*(2*alpha - 1).
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ThresholdParams:
    """Parameters (gamma1, gamma2, b) of the two-anchor threshold."""

    gamma1: float
    gamma2: float
    b: float

    def __post_init__(self):
        if self.gamma1 < 0:
            raise ValueError(f"gamma1 must be >= 0, got {self.gamma1}")
        if abs(self.gamma2) > self.gamma1:
            raise ValueError(f"|gamma2|={abs(self.gamma2)} exceeds gamma1={self.gamma1}")


def soft_threshold(u, gamma):
    """sgn(u) * max(|u| - gamma, 0), the proximal map of gamma*|.|."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    u = float(u)
    if u > gamma:
        return u - gamma
    if u < -gamma:
        return u + gamma
    return 0.0


def transfer_threshold_raw(z, g1, g2, b):
    """Two-anchor threshold as an exhaustive case split on sgn(b).

    Mutually exclusive pieces in increasing z; boundary z belongs to the
    earlier piece (adjacent pieces agree there, so the choice has no effect
    on the value).  Requires |g2| <= g1.  b == 0 collapses both anchors and
    reduces to soft_threshold(z, g1).
    """
    if b >= 0.0:
        if z < -g1:
            return z + g1
        if z <= g2:
            return 0.0
        if z <= g2 + b:
            return z - g2
        if z <= g1 + b:
            return b
        return z - g1
    else:
        if z > g1:
            return z - g1
        if z >= -g2:
            return 0.0
        if z >= -g2 + b:
            return z + g2
        if z >= -g1 + b:
            return b
        return z + g1


def transfer_threshold(z, params: ThresholdParams):
    """Evaluate the two-anchor threshold at scalar z."""
    return transfer_threshold_raw(float(z), params.gamma1, params.gamma2, params.b)


def transfer_threshold_grid(z, params: ThresholdParams):
    """Vectorized two-anchor threshold over an array of z values.

    Uses the same piece precedence as the scalar version.
    """
    z = np.asarray(z, dtype=np.float64)
    g1, g2, b = params.gamma1, params.gamma2, params.b
    if b >= 0.0:
        conds = [z < -g1, z <= g2, z <= g2 + b, z <= g1 + b]
        vals = [z + g1, np.zeros_like(z), z - g2, np.full_like(z, b)]
        return np.select(conds, vals, default=z - g1)
    conds = [z > g1, z >= -g2, z >= -g2 + b, z >= -g1 + b]
    vals = [z - g1, np.zeros_like(z), z + g2, np.full_like(z, b)]
    return np.select(conds, vals, default=z + g1)


def _interval_distance(x, lo, hi):
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return 0.0


def stationarity_gap(z, params: ThresholdParams, v):
    """Distance of 0 from the subgradient set v - z + g_a*d|v| + g_b*d|v-b|.

    Zero certifies that v minimizes the scalar two-anchor objective at z.
    """
    g_a = 0.5 * (params.gamma1 + params.gamma2)
    g_b = 0.5 * (params.gamma1 - params.gamma2)
    b = params.b
    lo = hi = v - z
    if v != 0.0:
        lo += g_a * np.sign(v)
        hi += g_a * np.sign(v)
    else:
        lo -= g_a
        hi += g_a
    if v != b:
        lo += g_b * np.sign(v - b)
        hi += g_b * np.sign(v - b)
    else:
        lo -= g_b
        hi += g_b
    return _interval_distance(0.0, lo, hi)
