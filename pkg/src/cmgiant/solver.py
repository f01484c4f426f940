"""Extinction probabilities and the giant-component fraction.

Everything reduces to the smallest non-negative solution of s = g'(s)/mu
on [0, 1], where g is the generating function of a degree distribution.
h(s) = s - g'(s)/mu is concave with h(0) <= 0, so it has at most one
positive run: the strategy is a scan over 1024 uniform points for the
first sign change, bisection of that bracket down to 1e-14, then a few
damped Newton steps.  A monotone-iteration oracle (iterate the map from 0)
is kept as an independent path for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTwoRegular, MeanMismatch, NoConvergence, ZeroMean
from .pmf import DegreePMF

SCAN_POINTS = 1024
BISECT_WIDTH = 1e-14
NEWTON_STEPS = 50
RESIDUAL_TOL = 1e-10
NEAR_CRITICAL_TOL = 1e-12
_DENSE_LIMIT = 2_000_000


@dataclass(frozen=True)
class FixedPointResult:
    """Smallest fixed point of s -> g'(s)/mu with solve diagnostics."""

    value: float
    iterations: int
    residual: float
    converged: bool


@dataclass(frozen=True)
class GiantResult:
    """Summary of one distribution: mean, criticality, extinction, giant size."""

    mu: float
    nu: float
    z_tilde: float
    xi: float
    near_critical: bool


def _gprime_coeffs(pmf: DegreePMF) -> tuple[np.ndarray, np.ndarray]:
    mask = pmf._deg >= 1
    d = pmf._deg[mask]
    return (d - 1).astype(np.int64), d * pmf._prob[mask]


def _eval_sparse(s: np.ndarray, exps: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    if exps.size == 0:
        return np.zeros_like(s)
    if exps.size and int(exps[-1]) <= _DENSE_LIMIT:
        dense = np.zeros(int(exps[-1]) + 1)
        dense[exps] = coeffs
        return np.polynomial.polynomial.polyval(s, dense)
    out = np.zeros_like(s)
    for e, c in zip(exps.tolist(), coeffs.tolist()):
        out += c * np.power(s, e)
    return out


def _solve_smallest(pmf: DegreePMF, denominator: float) -> FixedPointResult:
    """Smallest s in [0,1] with s = g'(s)/denominator."""
    exps, coeffs = _gprime_coeffs(pmf)

    def phi(s: np.ndarray) -> np.ndarray:
        return _eval_sparse(s, exps, coeffs) / denominator

    p1 = pmf.prob(1)
    if p1 == 0.0:
        return FixedPointResult(0.0, 0, 0.0, True)

    mean = pmf.mean()
    if mean >= denominator * (1.0 - 1e-12):
        # the map fixes 1; subcritical or critical means 1 is the smallest root
        nu = pmf.second_factorial_moment() / denominator
        if nu <= 1.0 + NEAR_CRITICAL_TOL:
            return FixedPointResult(1.0, 0, abs(1.0 - mean / denominator), True)

    grid = np.linspace(0.0, 1.0, SCAN_POINTS + 1)
    h = grid - phi(grid)
    positive = np.flatnonzero(h[1:] > 0.0)
    if positive.size:
        i = int(positive[0]) + 1
        lo, hi = float(grid[i - 1]), float(grid[i])
    else:
        lo, hi = float(grid[-2]), float(grid[-1])

    iterations = 0
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mid - float(phi(np.asarray(mid))) > 0.0:
            hi = mid
        else:
            lo = mid
        iterations += 1

    z = 0.5 * (lo + hi)
    hz = z - float(phi(np.asarray(z)))
    for _ in range(NEWTON_STEPS):
        slope = 1.0 - pmf.pgf_second(z) / denominator
        if slope <= 0.0:
            break
        step = hz / slope
        cand = z - step
        if not lo <= cand <= hi:
            cand = 0.5 * (lo + hi)
        hc = cand - float(phi(np.asarray(cand)))
        iterations += 1
        if abs(hc) >= abs(hz):
            break
        z, hz = cand, hc
        if hz == 0.0:
            break

    residual = float(abs(hz))
    converged = residual <= RESIDUAL_TOL
    return FixedPointResult(float(min(max(z, 0.0), 1.0)), iterations, residual, converged)


def extinction_probability(pmf: DegreePMF) -> FixedPointResult:
    """Extinction probability of the size-biased exploration process.

    Equals 1 exactly when the critical parameter is at most 1.
    """
    mu = pmf.mean()
    if mu <= 0.0:
        raise ZeroMean("extinction probability needs mean > 0")
    return _solve_smallest(pmf, mu)


def fixed_point_with_mean(pmf: DegreePMF, mu: float) -> FixedPointResult:
    """Smallest fixed point of s -> g'(s)/mu for a supplied class mean mu.

    mu is the mean of the *class* the distribution bounds, not of pmf
    itself; it must not be smaller than pmf's own mean.
    """
    own = pmf.mean()
    if own <= 0.0:
        raise ZeroMean("fixed point needs mean > 0")
    if mu < own * (1.0 - 1e-12):
        raise MeanMismatch(f"mu={mu!r} below the distribution mean {own!r}")
    return _solve_smallest(pmf, mu)


def solve_giant(pmf: DegreePMF) -> GiantResult:
    """Mean, critical parameter, extinction probability and giant fraction."""
    mu = pmf.mean()
    if mu <= 0.0:
        raise ZeroMean("giant fraction needs mean > 0")
    if pmf.prob(2) == 1.0:
        raise DegenerateTwoRegular("all mass at degree 2 is excluded")
    nu = pmf.critical_parameter()
    if abs(nu - 1.0) < NEAR_CRITICAL_TOL:
        return GiantResult(mu, nu, 1.0, 0.0, True)
    if nu < 1.0:
        return GiantResult(mu, nu, 1.0, 0.0, False)
    fp = extinction_probability(pmf)
    if not fp.converged:
        raise NoConvergence(f"residual {fp.residual!r} after {fp.iterations} steps")
    xi = 1.0 - pmf.pgf(fp.value)
    return GiantResult(mu, nu, fp.value, min(max(xi, 0.0), 1.0), False)


def giant_fraction(pmf: DegreePMF) -> float:
    """Asymptotic fraction of vertices in the largest component.

    Zero iff the critical parameter is at most 1; equals 1 when degrees 0
    and 1 carry no mass (and degree 2 is not everything).
    """
    return solve_giant(pmf).xi


def monotone_iteration_fixed_point(
    pmf: DegreePMF, mu: float | None = None, max_iter: int = 10**6
) -> float:
    """Oracle: iterate s <- g'(s)/mu from 0 until the float sequence stalls.

    The exact sequence is non-decreasing and converges to the smallest
    fixed point, so stopping at the first non-increase is identical to
    exhausting the full iteration budget, up to one ulp.
    """
    denom = pmf.mean() if mu is None else mu
    if denom <= 0.0:
        raise ZeroMean("oracle needs mean > 0")
    s = 0.0
    for _ in range(max_iter):
        t = pmf.pgf_prime(s) / denom
        if t <= s:
            break
        s = t
    return s
