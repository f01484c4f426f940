"""Vectorized smallest-fixed-point solves for the prefix grid search.

Row i describes one map s -> (sum_j coeffs[i,j] * s**exps[i,j]) / mu[i]
with coeffs = d * p_d and exps = d - 1.  The difference s - map(s) is
concave with at most one positive run on [0, 1], so the smallest root is
found by two 33-point refinement passes (resolution 1/1024, matching the
scalar solver's scan) followed by a fixed number of bisection steps.  Rows
are independent; results agree with the scalar solver to ~1e-13.
"""

from __future__ import annotations

import numpy as np

SCAN = 32
LEVELS = 2
BISECT_STEPS = 48
_SUB_TOL = 1e-12


def batch_smallest_fixed_point(
    coeffs: np.ndarray, exps: np.ndarray, mu: np.ndarray
) -> np.ndarray:
    """Smallest s in [0,1] with s*mu = sum(coeffs * s**exps), per row.

    Zero-padding is fine: a column with coeff 0 contributes nothing.
    Rows where degree-1 mass vanishes return exactly 0; rows whose map
    fixes 1 with subcritical slope return exactly 1.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    exps = np.asarray(exps, dtype=np.float64)
    if exps.ndim == 1:
        exps = np.broadcast_to(exps, coeffs.shape)
    mu = np.asarray(mu, dtype=np.float64)
    n = coeffs.shape[0]

    phi0 = np.where(exps == 0, coeffs, 0.0).sum(axis=1) / mu
    mean = coeffs.sum(axis=1)
    fact2 = (coeffs * exps).sum(axis=1)
    at_zero = phi0 == 0.0
    at_one = (mean >= mu * (1.0 - _SUB_TOL)) & (fact2 <= mu * (1.0 + _SUB_TOL))

    lo = np.zeros(n)
    width = np.ones(n)
    offsets = np.arange(SCAN + 1) / SCAN
    for _ in range(LEVELS):
        s = lo[:, None] + width[:, None] * offsets[None, :]
        g = (coeffs[:, None, :] * np.power(s[:, :, None], exps[:, None, :])).sum(axis=2)
        h = s - g / mu[:, None]
        pos = h > 0.0
        pos[:, 0] = False
        idx = np.where(pos.any(axis=1), pos.argmax(axis=1), SCAN)
        lo = lo + width * (idx - 1) / SCAN
        width = width / SCAN

    hi = lo + width
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        g = (coeffs * np.power(mid[:, None], exps)).sum(axis=1)
        pos = mid - g / mu > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)

    z = 0.5 * (lo + hi)
    z = np.where(at_zero, 0.0, z)
    z = np.where(at_one, 1.0, z)
    return np.clip(z, 0.0, 1.0)


def batch_pgf(probs: np.ndarray, degrees: np.ndarray, s: np.ndarray) -> np.ndarray:
    """sum(probs * s**degrees) per row."""
    degrees = np.asarray(degrees, dtype=np.float64)
    if degrees.ndim == 1:
        degrees = np.broadcast_to(degrees, probs.shape)
    return (probs * np.power(s[:, None], degrees)).sum(axis=1)
