"""Prefix-grid searches and mean-preserving degree families.

The grid search enumerates every prefix (p_1..p_L) on a step lattice,
classifies each (prefix, mu) cell as feasible / condition-satisfying, and
maximizes the spread between the optimal upper and lower component-size
bounds.  Cells are evaluated in fixed-size vectorized chunks; evaluation
is a pure function of the cell, so threading changes nothing but wall
time, and ties are broken deterministically (smallest mu, then
lexicographically smallest prefix).

Families fix everything except a single control probability p_1 and solve
two other small-degree probabilities to keep total mass and mean fixed;
they produce the data behind the component-size-versus-p_1 sweeps.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .batch import batch_pgf, batch_smallest_fixed_point
from .bounds import (
    Prefix,
    condition_threshold_a,
    condition_threshold_b,
)
from .errors import BadStep, InfeasibleControl
from .pmf import (
    DegreePMF,
    TailSpec,
    fragment_mass,
    fragment_mean,
    make_pmf,
    materialize_tail,
)
from .solver import solve_giant

CHUNK_ROWS = 16384
MAX_L = 8


# ----------------------------------------------------------------------
# prefix enumeration


def _step_units(step: float) -> int:
    if step <= 0.0:
        raise BadStep(f"step {step!r} must be positive")
    k = round(1.0 / step)
    if k < 1 or abs(k * step - 1.0) > 1e-12:
        raise BadStep(f"step {step!r} does not divide 1")
    return k


def _count_grid(L: int, units: int) -> np.ndarray:
    """All (k_1..k_L) with non-negative integer entries summing to <= units.

    Rows are in lexicographic order, which is also the tie-break order.
    """
    rows: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 0:
            rows.append(prefix)
            return
        for k in range(remaining + 1):
            rec(prefix + (k,), remaining - k, slots - 1)

    rec((), units, L)
    return np.array(rows, dtype=np.int64)


def enumerate_prefixes(L: int, step: float) -> list[Prefix]:
    """Every prefix with probabilities on the step lattice and mass <= 1."""
    if not 1 <= L <= MAX_L:
        raise BadStep(f"L = {L} outside 1..{MAX_L}")
    units = _step_units(step)
    counts = _count_grid(L, units)
    return [Prefix(tuple(float(k * step) for k in row)) for row in counts.tolist()]


# ----------------------------------------------------------------------
# grid search


@dataclass(frozen=True)
class GridSearchResult:
    """Maximal bound gap over one prefix lattice, all mu values combined."""

    L: int
    mu_grid: tuple[float, ...]
    step: float
    best_gap: float | None
    best_prefix: Prefix | None
    best_mu: float | None
    best_lower: float | None
    best_upper: float | None
    cells_total: int
    cells_feasible: int
    cells_condition_ok: int
    per_mu_max: tuple[tuple[float, float | None], ...]


@dataclass(frozen=True)
class MaxGapSearch:
    """Per-L grid results plus the combined per-mu maximum curve."""

    per_L: dict[int, GridSearchResult]
    per_mu: tuple[tuple[float, float | None, int | None], ...]  # (mu, gap, best L)


def _chunked_fixed_point(coeffs, exps, mu) -> np.ndarray:
    n = coeffs.shape[0]
    if n <= CHUNK_ROWS:
        return batch_smallest_fixed_point(coeffs, exps, mu)
    out = np.empty(n)
    for start in range(0, n, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, n)
        e = exps if exps.ndim == 1 else exps[start:stop]
        out[start:stop] = batch_smallest_fixed_point(
            coeffs[start:stop], e, mu[start:stop]
        )
    return out


@dataclass
class _LGrid:
    """Per-prefix arrays shared by every mu evaluation at one L."""

    L: int
    units: int
    step: float
    counts: np.ndarray       # (N, L) lattice coordinates
    probs: np.ndarray        # (N, L)
    p_gt: np.ndarray         # (N,)
    sum_units: np.ndarray    # (N,)
    s1_units: np.ndarray     # (N,) sum of d*k_d
    pG: np.ndarray           # (N, L+1) probabilities of G
    cG: np.ndarray           # (N, L+1) d*p_d for G
    cond_a: np.ndarray       # (N,) bool


def _prepare_L(L: int, prefix_step: float) -> _LGrid:
    units = _step_units(prefix_step)
    counts = _count_grid(L, units)
    n = counts.shape[0]
    probs = counts.astype(np.float64) * prefix_step
    sum_units = counts.sum(axis=1)
    s1_units = counts @ np.arange(1, L + 1, dtype=np.int64)
    p_gt = (units - sum_units).astype(np.float64) * prefix_step
    dG = np.arange(1, L + 2, dtype=np.float64)
    pG = np.hstack([probs, p_gt[:, None]])
    cG = pG * dG
    eG = np.arange(0, L + 1, dtype=np.float64)
    z_G = _chunked_fixed_point(cG, eG, cG.sum(axis=1))
    cond_a = z_G <= condition_threshold_a(L)
    return _LGrid(
        L=L, units=units, step=prefix_step, counts=counts, probs=probs,
        p_gt=p_gt, sum_units=sum_units, s1_units=s1_units,
        pG=pG, cG=cG, cond_a=cond_a,
    )


@dataclass
class _MuOutcome:
    mu: float
    feasible: int
    condition_ok: int
    max_gap: float | None
    arg_row: int | None      # prefix row index of the per-mu argmax
    arg_lower: float | None
    arg_upper: float | None


def _evaluate_mu(grid: _LGrid, mu_units: int) -> _MuOutcome:
    """Evaluate every feasible cell at one mu; exact integer kappa arithmetic."""
    L, step = grid.L, grid.step
    mu = mu_units * step
    knum = mu_units - grid.s1_units
    kden = grid.units - grid.sum_units
    feas = ((kden > 0) & (knum >= (L + 1) * kden)) | ((kden == 0) & (knum == 0))
    rows = np.flatnonzero(feas)
    if rows.size == 0:
        return _MuOutcome(mu, 0, 0, None, None, None, None)

    knum_f = knum[rows]
    kden_f = kden[rows]
    tail = kden_f > 0
    safe = np.maximum(kden_f, 1)
    fl = np.where(tail, knum_f // safe, L + 2)
    frac = np.where(tail, (knum_f - fl * kden_f) / safe, 0.0)
    p_gt = grid.p_gt[rows]
    w_lo = (1.0 - frac) * p_gt
    w_hi = frac * p_gt

    probs_f = grid.probs[rows]
    d_low = np.arange(1, L + 1, dtype=np.float64)
    cH = np.hstack([
        probs_f * d_low,
        (fl * w_lo)[:, None],
        ((fl + 1) * w_hi)[:, None],
    ])
    eH = np.hstack([
        np.broadcast_to(np.arange(0, L, dtype=np.float64), probs_f.shape),
        (fl - 1)[:, None].astype(np.float64),
        fl[:, None].astype(np.float64),
    ])
    mu_vec = np.full(rows.size, mu)
    z_H = _chunked_fixed_point(cH, eH, mu_vec)
    cond_b = z_H <= condition_threshold_b(L)

    pH = np.hstack([probs_f, w_lo[:, None], w_hi[:, None]])
    dH = np.hstack([
        np.broadcast_to(d_low, probs_f.shape),
        fl[:, None].astype(np.float64),
        (fl + 1)[:, None].astype(np.float64),
    ])
    upper = 1.0 - batch_pgf(pH, dH, z_H)

    eG = np.arange(0, L + 1, dtype=np.float64)
    z_G_mu = _chunked_fixed_point(grid.cG[rows], eG, mu_vec)
    dG = np.arange(1, L + 2, dtype=np.float64)
    lower = 1.0 - batch_pgf(grid.pG[rows], dG, z_G_mu)

    valid = grid.cond_a[rows] & cond_b
    n_valid = int(valid.sum())
    if n_valid == 0:
        return _MuOutcome(mu, int(rows.size), 0, None, None, None, None)

    gap = np.where(valid, upper - lower, -np.inf)
    best = float(gap.max())
    # first index attaining the max = lexicographically smallest prefix
    at = int(np.flatnonzero(gap == best)[0])
    return _MuOutcome(
        mu, int(rows.size), n_valid, best, int(rows[at]),
        float(lower[at]), float(upper[at]),
    )


def _search_one_L(
    L: int, mu_units_list: list[int], prefix_step: float, threads: int
) -> GridSearchResult:
    grid = _prepare_L(L, prefix_step)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_evaluate_mu, grid, u) for u in mu_units_list]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_evaluate_mu(grid, u) for u in mu_units_list]

    n_prefixes = grid.counts.shape[0]
    best: _MuOutcome | None = None
    for oc in outcomes:  # ascending mu; strict > keeps the smallest mu on ties
        if oc.max_gap is None:
            continue
        if best is None or oc.max_gap > best.max_gap:
            best = oc
    per_mu = tuple((oc.mu, oc.max_gap) for oc in outcomes)
    best_prefix = None
    if best is not None:
        row = grid.counts[best.arg_row]
        best_prefix = Prefix(tuple(float(k * prefix_step) for k in row.tolist()))
    return GridSearchResult(
        L=L,
        mu_grid=tuple(oc.mu for oc in outcomes),
        step=prefix_step,
        best_gap=None if best is None else best.max_gap,
        best_prefix=best_prefix,
        best_mu=None if best is None else best.mu,
        best_lower=None if best is None else best.arg_lower,
        best_upper=None if best is None else best.arg_upper,
        cells_total=n_prefixes * len(mu_units_list),
        cells_feasible=sum(oc.feasible for oc in outcomes),
        cells_condition_ok=sum(oc.condition_ok for oc in outcomes),
        per_mu_max=per_mu,
    )


def max_gap_search(
    L_set: set[int] | list[int],
    mu_lo: float = 1.0,
    mu_hi: float = 5.0,
    mu_step: float = 0.2,
    prefix_step: float = 0.05,
    threads: int = 1,
) -> MaxGapSearch:
    """Maximal upper-minus-lower bound gap over prefix lattices.

    mu values must lie on the prefix-step lattice so that kappa is an
    exact integer ratio; the defaults (step 0.05, mu 1..5 by 0.2) comply.
    Cells failing the technical conditions are excluded from maxima but
    counted for transparency.
    """
    Ls = sorted(set(int(x) for x in L_set))
    for L in Ls:
        if not 1 <= L <= MAX_L:
            raise BadStep(f"L = {L} outside 1..{MAX_L}")
    units = _step_units(prefix_step)
    if mu_step <= 0.0 or mu_hi < mu_lo:
        raise BadStep("empty mu grid")
    mu_units_list: list[int] = []
    v = mu_lo
    while v <= mu_hi + 1e-9:
        u = round(v / prefix_step)
        if abs(u * prefix_step - v) > 1e-9:
            raise BadStep(f"mu = {v!r} is not a multiple of the prefix step")
        mu_units_list.append(u)
        v = mu_lo + len(mu_units_list) * mu_step

    per_L = {
        L: _search_one_L(L, mu_units_list, prefix_step, threads) for L in Ls
    }

    per_mu: list[tuple[float, float | None, int | None]] = []
    for j, u in enumerate(mu_units_list):
        mu = u * prefix_step
        best_gap: float | None = None
        best_L: int | None = None
        for L in Ls:
            gap = per_L[L].per_mu_max[j][1]
            if gap is None:
                continue
            if best_gap is None or gap > best_gap:
                best_gap, best_L = gap, L
        per_mu.append((mu, best_gap, best_L))
    return MaxGapSearch(per_L=per_L, per_mu=tuple(per_mu))


# ----------------------------------------------------------------------
# mean-preserving families


@dataclass(frozen=True)
class FamilyPoint:
    """One member of a mean-preserving family, keyed by its control value."""

    control: float
    pmf: DegreePMF
    xi: float
    nu: float


def _affine_solution(
    degrees: tuple[int, int, int], mass: float, mean: float
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Coefficients of p_b and p_c as affine functions of the control p_a.

    The three degrees (a < b < c) must absorb total probability ``mass``
    and total mean ``mean``.
    """
    a, b, c = degrees
    denom = float(c - b)
    A_c = (mean - b * mass) / denom
    B_c = (b - a) / denom
    A_b = mass - A_c
    B_b = -1.0 - B_c
    return (A_b, B_b), (A_c, B_c)


def _control_window(
    degrees: tuple[int, int, int], mass: float, mean: float
) -> tuple[float, float]:
    """Control values for which all three probabilities land in [0, 1]."""
    (A_b, B_b), (A_c, B_c) = _affine_solution(degrees, mass, mean)
    lo, hi = 0.0, min(1.0, mass)
    for A, B in ((A_b, B_b), (A_c, B_c)):
        if B > 0:
            lo = max(lo, -A / B)
            hi = min(hi, (1.0 - A) / B)
        elif B < 0:
            lo = max(lo, (1.0 - A) / B)
            hi = min(hi, -A / B)
        elif not 0.0 <= A <= 1.0:
            return (1.0, 0.0)
    return (lo, hi)


def _family_point(
    degrees: tuple[int, int, int],
    mass: float,
    mean: float,
    control: float,
    tail: list[tuple[int, float]],
) -> FamilyPoint:
    (A_b, B_b), (A_c, B_c) = _affine_solution(degrees, mass, mean)
    a, b, c = degrees
    p_b = A_b + B_b * control
    p_c = A_c + B_c * control
    entries = [(a, control), (b, p_b), (c, p_c)] + tail
    cleaned = []
    for d, p in entries:
        if p < -1e-9 or p > 1.0 + 1e-9:
            raise InfeasibleControl(
                f"p_{d} = {p!r} outside [0, 1] at control {control!r}"
            )
        cleaned.append((d, min(max(p, 0.0), 1.0)))
    pmf = make_pmf(cleaned, provenance=f"family p_{a}={control!r}")
    res = solve_giant(pmf)
    return FamilyPoint(control=control, pmf=pmf, xi=res.xi, nu=res.nu)


def three_point_family(
    supports: tuple[int, int, int], mu: float, control: float
) -> FamilyPoint:
    """Distribution on three degrees with p_{d1} = control and mean mu.

    The two remaining probabilities are the unique solution of the mass
    and mean constraints; InfeasibleControl when any falls outside [0, 1].
    """
    degrees = tuple(sorted(int(d) for d in supports))
    if len(set(degrees)) != 3:
        raise InfeasibleControl("three distinct degrees required")
    return _family_point(degrees, 1.0, mu, control, [])


def three_point_window(supports: tuple[int, int, int], mu: float) -> tuple[float, float]:
    degrees = tuple(sorted(int(d) for d in supports))
    return _control_window(degrees, 1.0, mu)


def fixed_tail_family(
    tail: TailSpec,
    low_support: tuple[int, int, int],
    mu: float,
    control: float,
    max_degree_hint: int | None = None,
) -> FamilyPoint:
    """Family member with an immutable materialized tail and tuned low degrees.

    The two non-control low degrees absorb whatever mass and mean the
    materialized fragment leaves over, so each member sums to 1 and has
    mean mu exactly, whatever truncation the fragment used.
    """
    degrees = tuple(sorted(int(d) for d in low_support))
    if len(set(degrees)) != 3:
        raise InfeasibleControl("three distinct low degrees required")
    fragment = materialize_tail(tail, max_degree_hint)
    if degrees[-1] >= fragment[0][0]:
        raise InfeasibleControl("low degrees must sit below the tail support")
    mass = 1.0 - fragment_mass(fragment)
    mean = mu - fragment_mean(fragment)
    return _family_point(degrees, mass, mean, control, fragment)


def fixed_tail_window(
    tail: TailSpec,
    low_support: tuple[int, int, int],
    mu: float,
    max_degree_hint: int | None = None,
) -> tuple[float, float]:
    degrees = tuple(sorted(int(d) for d in low_support))
    fragment = materialize_tail(tail, max_degree_hint)
    mass = 1.0 - fragment_mass(fragment)
    mean = mu - fragment_mean(fragment)
    return _control_window(degrees, mass, mean)


def sweep_controls(window: tuple[float, float], step: float) -> list[float]:
    """Lattice of control values covering the window, endpoints included."""
    lo, hi = window
    if hi < lo:
        return []
    k_min = math.ceil((lo - 1e-12) / step)
    k_max = math.floor((hi + 1e-12) / step)
    controls = [round(k * step, 10) for k in range(k_min, k_max + 1)]
    controls = [c for c in controls if lo - 1e-12 <= c <= hi + 1e-12]
    if not controls or controls[0] > lo + 1e-12:
        controls.insert(0, lo)
    if controls[-1] < hi - 1e-12:
        controls.append(hi)
    return controls


# ----------------------------------------------------------------------
# figure datasets

FIGURE_NAMES = ("1a", "1b", "2a", "2b")
DEFAULT_TAIL_CUTOFF = 20_000
# The 5 d^-2.5 tail from degree 11 contributes ~3.09 to the mean if carried
# to convergence, more than mean 3.5 leaves room for once degrees 1..3 hold
# the remaining ~0.9 of mass; this sweep is only realizable with a
# short truncation, so this family gets its own default cutoff.
HEAVY_TAIL_2B_CUTOFF = 100


def figure_dataset(
    which: str, control_step: float = 0.01, tail_cutoff: int | None = None
) -> tuple[list[str], list[tuple]]:
    """(header, rows) for one of the four component-size sweeps.

    1a: degrees {1,2,3}, mean 2.1;   1b: degrees {1,2,10}, mean 2.1.
    2a: tails Poisson(2) / 2 d^-3 fixed from degree 4, mean 2.2.
    2b: tails Poisson(7) / 5 d^-2.5 fixed from degree 11, mean 3.5.

    tail_cutoff, when given, caps every materialized tail; by default each
    family uses DEFAULT_TAIL_CUTOFF except the heavy 2b power law, which
    uses HEAVY_TAIL_2B_CUTOFF to stay mean-feasible.
    """
    from .pmf import PoissonTail, PowerLawTail  # local to keep module import light

    if which == "1a" or which == "1b":
        supports = (1, 2, 3) if which == "1a" else (1, 2, 10)
        window = three_point_window(supports, 2.1)
        rows = []
        for c in sweep_controls(window, control_step):
            pt = three_point_family(supports, 2.1, c)
            rows.append((pt.control, pt.xi, pt.nu))
        return ["control", "xi", "nu"], rows

    if which == "2a":
        families = [
            ("poisson-2", PoissonTail(rate=2.0, min_degree=4), DEFAULT_TAIL_CUTOFF),
            ("power-law-2d-3",
             PowerLawTail(constant=2.0, exponent=3.0, min_degree=4),
             DEFAULT_TAIL_CUTOFF),
        ]
        mu = 2.2
    elif which == "2b":
        families = [
            ("poisson-7", PoissonTail(rate=7.0, min_degree=11), DEFAULT_TAIL_CUTOFF),
            ("power-law-5d-2.5",
             PowerLawTail(constant=5.0, exponent=2.5, min_degree=11),
             HEAVY_TAIL_2B_CUTOFF),
        ]
        mu = 3.5
    else:
        raise BadStep(f"unknown figure {which!r}; expected one of {FIGURE_NAMES}")

    low = (1, 2, 3)
    rows = []
    for name, tail, default_cutoff in families:
        cutoff = tail_cutoff if tail_cutoff is not None else default_cutoff
        window = fixed_tail_window(tail, low, mu, cutoff)
        if window[1] < window[0]:
            raise InfeasibleControl(
                f"family {name!r} has no feasible control at tail cutoff {cutoff}"
            )
        for c in sweep_controls(window, control_step):
            pt = fixed_tail_family(tail, low, mu, c, cutoff)
            rows.append((name, pt.control, pt.xi, pt.nu))
    return ["family", "control", "xi", "nu"], rows


def figure3_dataset(search: MaxGapSearch) -> tuple[list[str], list[tuple]]:
    """(header, rows) of the combined per-mu maximal gap curve."""
    rows = [
        (mu, gap, L) for mu, gap, L in search.per_mu if gap is not None
    ]
    return ["mu", "max_gap", "best_L"], rows
