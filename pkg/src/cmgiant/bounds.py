"""Extremal distributions and component-size bounds for fixed small degrees.

Fix the probabilities p_1..p_L of the small degrees and (optionally) the
mean mu.  Among all degree distributions sharing that prefix, the giant
component is smallest when the leftover mass sits as low as possible and
largest when it is concentrated mean-preservingly on two consecutive
integers:

* G places all leftover mass at L+1; its giant fraction lower-bounds the
  whole prefix class with no mean restriction.
* Solving s = g_G'(s)/mu with the class mean mu sharpens that into the
  optimal lower bound 1 - g_G(z), valid when the extinction probability of
  G is at most exp(-1/(L+1)).
* H splits the leftover mass over floor(kappa) and floor(kappa)+1, where
  kappa is the conditional mean above L; its giant fraction is the optimal
  upper bound, valid when H's extinction probability is at most
  exp(-2/(L+1)).
* G_m interpolates: mass r_m at a far atom m, the rest at L+1, mean kept
  at mu.  As m grows its giant fraction descends to the lower bound.

Condition failures warn (ConditionViolated) instead of aborting so grid
searches can classify cells.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadM,
    ConditionViolated,
    DegenerateSplit,
    DegenerateTwoRegular,
    EmptyTail,
    Error,
    InfeasibleMean,
    NegativeProbability,
    SumNotOne,
)
from .pmf import DegreePMF, make_pmf
from .solver import extinction_probability, fixed_point_with_mean, giant_fraction

KAPPA_INT_TOL = 1e-12  # kappa this close to an integer is treated as integral
MEAN_MATCH_TOL = 1e-9  # exact-mean test for prefixes that carry all mass


@dataclass(frozen=True)
class Prefix:
    """Fixed probabilities p_1..p_L for degrees 1..L, with p_0 = 0 implied."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.probs:
            raise SumNotOne("prefix needs at least one probability")
        for i, p in enumerate(self.probs, start=1):
            if p < 0.0:
                raise NegativeProbability(f"p_{i} = {p!r}")
            if p > 1.0:
                raise SumNotOne(f"p_{i} = {p!r} > 1")
        if math.fsum(self.probs) > 1.0 + 1e-12:
            raise SumNotOne(f"prefix mass {math.fsum(self.probs)!r} exceeds 1")

    @property
    def L(self) -> int:
        return len(self.probs)

    @property
    def p_gt_L(self) -> float:
        """Leftover mass above degree L."""
        return max(0.0, 1.0 - math.fsum(self.probs))

    def mean_low(self) -> float:
        """sum of d * p_d over the fixed degrees 1..L."""
        return math.fsum(d * p for d, p in enumerate(self.probs, start=1))

    def entries(self) -> list[tuple[int, float]]:
        return [(d, p) for d, p in enumerate(self.probs, start=1)]


def condition_threshold_a(L: int) -> float:
    return math.exp(-1.0 / (L + 1))


def condition_threshold_b(L: int) -> float:
    return math.exp(-2.0 / (L + 1))


def kappa(prefix: Prefix, mu: float) -> float:
    """Conditional mean above L shared by every class member with mean mu.

    kappa = (mu - sum d p_d) / p_{>L}.  Values within KAPPA_INT_TOL of an
    integer are snapped.  Raises EmptyTail when the prefix has no leftover
    mass and InfeasibleMean when kappa < L+1 (the class would be empty).
    """
    p_gt = prefix.p_gt_L
    if p_gt <= 0.0:
        raise EmptyTail("prefix carries all probability mass")
    k = (mu - prefix.mean_low()) / p_gt
    r = round(k)
    if abs(k - r) < KAPPA_INT_TOL:
        k = float(r)
    if k < prefix.L + 1:
        raise InfeasibleMean(f"kappa = {k!r} < L+1 = {prefix.L + 1}")
    return k


def construct_G(prefix: Prefix) -> DegreePMF:
    """Prefix with all leftover mass at L+1."""
    entries = prefix.entries() + [(prefix.L + 1, prefix.p_gt_L)]
    return make_pmf(entries, provenance="G")


def construct_H(prefix: Prefix, mu: float) -> DegreePMF:
    """Prefix with leftover mass split over floor(kappa), floor(kappa)+1.

    The split preserves the mean: weights (floor(kappa)+1-kappa) and
    (kappa-floor(kappa)).  Integral kappa puts a single atom at kappa.
    """
    k = kappa(prefix, mu)
    fl = math.floor(k)
    frac = k - fl
    p_gt = prefix.p_gt_L
    entries = prefix.entries() + [(fl, (1.0 - frac) * p_gt), (fl + 1, frac * p_gt)]
    return make_pmf(entries, provenance="H")


def construct_G_m(prefix: Prefix, mu: float, m: int) -> DegreePMF:
    """Prefix with mass r_m at the far atom m and the rest at L+1.

    r_m = (kappa - (L+1)) / (m - (L+1)) keeps the mean at mu; r_m -> 0
    recovers G.  Requires m > kappa and m > L+1.
    """
    k = kappa(prefix, mu)
    if m <= max(k, prefix.L + 1):
        raise BadM(f"m = {m} must exceed kappa = {k!r} and L+1 = {prefix.L + 1}")
    r = (k - (prefix.L + 1)) / (m - (prefix.L + 1))
    p_gt = prefix.p_gt_L
    entries = prefix.entries() + [(prefix.L + 1, (1.0 - r) * p_gt), (m, r * p_gt)]
    return make_pmf(entries, provenance=f"G_{m}")


def check_conditions(prefix: Prefix, mu: float) -> tuple[bool, bool]:
    """(extinction of G <= e^{-1/(L+1)}, extinction of H <= e^{-2/(L+1)})."""
    z_g = extinction_probability(construct_G(prefix)).value
    z_h = extinction_probability(construct_H(prefix, mu)).value
    L = prefix.L
    return z_g <= condition_threshold_a(L), z_h <= condition_threshold_b(L)


def lower_bound_prop1(prefix: Prefix) -> float:
    """Giant fraction of G: a lower bound for the whole prefix class."""
    return giant_fraction(construct_G(prefix))


def lower_bound_thm_a(prefix: Prefix, mu: float) -> float:
    """Optimal lower bound 1 - g_G(z) with z solving s = g_G'(s)/mu.

    Warns ConditionViolated (and still returns the value) when the
    extinction probability of G exceeds exp(-1/(L+1)).
    """
    G = construct_G(prefix)
    z_g = extinction_probability(G).value
    if z_g > condition_threshold_a(prefix.L):
        warnings.warn(
            f"extinction probability of G is {z_g:.6f} > e^(-1/(L+1)); "
            "lower bound not guaranteed",
            ConditionViolated,
        )
    z = fixed_point_with_mean(G, mu).value
    return 1.0 - G.pgf(z)


def upper_bound_thm_b(prefix: Prefix, mu: float) -> float:
    """Optimal upper bound: the giant fraction of H.

    Warns ConditionViolated when the extinction probability of H exceeds
    exp(-2/(L+1)).
    """
    H = construct_H(prefix, mu)
    z_h = extinction_probability(H).value
    if z_h > condition_threshold_b(prefix.L):
        warnings.warn(
            f"extinction probability of H is {z_h:.6f} > e^(-2/(L+1)); "
            "upper bound not guaranteed",
            ConditionViolated,
        )
    return giant_fraction(H)


@dataclass(frozen=True)
class BoundsReport:
    """All bound machinery for one (prefix, mu) cell.

    feasible is False (with a reason) when the class is empty or collapses
    to the excluded two-regular point mass; errors never escape, so grid
    searches can consume reports directly.
    """

    prefix: Prefix
    mu: float
    kappa: float | None
    p_gt_L: float
    G: DegreePMF | None
    H: DegreePMF | None
    z_G: float | None
    z_G_mu: float | None
    z_H: float | None
    cond_a: bool
    cond_b: bool
    lower_prop1: float | None
    lower_thm_a: float | None
    upper_thm_b: float | None
    feasible: bool
    reason: str = ""

    @property
    def gap(self) -> float | None:
        if self.lower_thm_a is None or self.upper_thm_b is None:
            return None
        return self.upper_thm_b - self.lower_thm_a

    def to_json_dict(self) -> dict:
        return {
            "prefix": list(self.prefix.probs),
            "mu": self.mu,
            "kappa": self.kappa,
            "p_gt_L": self.p_gt_L,
            "G": self.G.to_json_dict() if self.G else None,
            "H": self.H.to_json_dict() if self.H else None,
            "z_G": self.z_G,
            "z_G_mu": self.z_G_mu,
            "z_H": self.z_H,
            "cond_a": self.cond_a,
            "cond_b": self.cond_b,
            "lower_prop1": self.lower_prop1,
            "lower_thm_a": self.lower_thm_a,
            "upper_thm_b": self.upper_thm_b,
            "feasible": self.feasible,
            "reason": self.reason,
        }


def _infeasible(prefix: Prefix, mu: float, reason: str) -> BoundsReport:
    return BoundsReport(
        prefix=prefix, mu=mu, kappa=None, p_gt_L=prefix.p_gt_L,
        G=None, H=None, z_G=None, z_G_mu=None, z_H=None,
        cond_a=False, cond_b=False,
        lower_prop1=None, lower_thm_a=None, upper_thm_b=None,
        feasible=False, reason=reason,
    )


def bounds_report(prefix: Prefix, mu: float) -> BoundsReport:
    """Evaluate every bound for one cell, capturing failures as flags.

    A cell is feasible iff p_{>L} > 0 with kappa >= L+1, or p_{>L} = 0 with
    the prefix mean matching mu exactly (the class is then that single
    distribution and both bounds collapse onto its giant fraction).
    """
    p_gt = prefix.p_gt_L

    if p_gt <= 0.0:
        if abs(prefix.mean_low() - mu) > MEAN_MATCH_TOL:
            return _infeasible(prefix, mu, "prefix mean differs from mu")
        F = construct_G(prefix)  # identical to the lone class member
        try:
            xi = giant_fraction(F)
        except DegenerateTwoRegular:
            return _infeasible(prefix, mu, "class is the two-regular point mass")
        z = extinction_probability(F).value
        L = prefix.L
        return BoundsReport(
            prefix=prefix, mu=mu, kappa=None, p_gt_L=0.0,
            G=F, H=F, z_G=z, z_G_mu=z, z_H=z,
            cond_a=z <= condition_threshold_a(L),
            cond_b=z <= condition_threshold_b(L),
            lower_prop1=xi, lower_thm_a=xi, upper_thm_b=xi,
            feasible=True, reason="single-member class",
        )

    try:
        k = kappa(prefix, mu)
    except InfeasibleMean as exc:
        return _infeasible(prefix, mu, str(exc))

    G = construct_G(prefix)
    H = construct_H(prefix, mu)
    z_G = extinction_probability(G).value
    z_H = extinction_probability(H).value
    z_G_mu = fixed_point_with_mean(G, mu).value
    L = prefix.L
    try:
        lower1 = giant_fraction(G)
    except DegenerateTwoRegular:
        lower1 = None
    try:
        upper = giant_fraction(H)
    except DegenerateTwoRegular:
        upper = None
    return BoundsReport(
        prefix=prefix, mu=mu, kappa=k, p_gt_L=p_gt,
        G=G, H=H, z_G=z_G, z_G_mu=z_G_mu, z_H=z_H,
        cond_a=z_G <= condition_threshold_a(L),
        cond_b=z_H <= condition_threshold_b(L),
        lower_prop1=lower1,
        lower_thm_a=1.0 - G.pgf(z_G_mu),
        upper_thm_b=upper,
        feasible=True,
    )


# ----------------------------------------------------------------------
# mixture decomposition (used as a proof-consequence oracle in tests)


@dataclass(frozen=True)
class MixtureDecomposition:
    """Split of a mean-kappa distribution into mean floor(kappa) and +1 parts.

    With z_param = floor(kappa)+1-kappa, mixing n1 and n2 with weights
    (z_param, 1-z_param) reconstructs the input pointwise.  n1 and n2 are
    themselves Bernoulli mixtures (parameters x_param, y_param) of the
    input conditioned at or below floor(kappa) and strictly above it.
    """

    n1: DegreePMF
    n2: DegreePMF
    z_param: float
    kappa_low: float
    kappa_hi: float
    x_param: float
    y_param: float


def mixture_decompose(pmf: DegreePMF) -> MixtureDecomposition:
    """Decompose per the two-conditional-mixture construction.

    Raises DegenerateSplit when one side of floor(mean) carries no mass
    (only possible for a point mass off the trivial case, which is handled
    directly).
    """
    k = pmf.mean()
    r = round(k)
    if abs(k - r) < KAPPA_INT_TOL:
        k = float(r)
    fl = math.floor(k)

    if len(pmf) == 1 and k == fl:
        # point mass at an integer: Bernoulli parameter 1 makes n2 irrelevant
        n2 = make_pmf([(fl + 1, 1.0)], provenance="mixture-n2")
        return MixtureDecomposition(
            n1=pmf, n2=n2, z_param=1.0,
            kappa_low=float(fl), kappa_hi=float(fl + 1),
            x_param=1.0, y_param=0.0,
        )

    low = [(d, p) for d, p in pmf.items() if d <= fl]
    hi = [(d, p) for d, p in pmf.items() if d > fl]
    if not low or not hi:
        raise DegenerateSplit(f"all mass on one side of floor(mean) = {fl}")

    mass_low = math.fsum(p for _, p in low)
    mass_hi = math.fsum(p for _, p in hi)
    n_low = [(d, p / mass_low) for d, p in low]
    n_hi = [(d, p / mass_hi) for d, p in hi]
    k_low = math.fsum(d * p for d, p in n_low)
    k_hi = math.fsum(d * p for d, p in n_hi)

    x = (k_hi - fl) / (k_hi - k_low)
    y = (k_hi - fl - 1.0) / (k_hi - k_low)
    z = fl + 1.0 - k

    def mix(w: float) -> DegreePMF:
        acc: dict[int, float] = {}
        for d, p in n_low:
            acc[d] = acc.get(d, 0.0) + w * p
        for d, p in n_hi:
            acc[d] = acc.get(d, 0.0) + (1.0 - w) * p
        return make_pmf(sorted(acc.items()), provenance="mixture")

    return MixtureDecomposition(
        n1=mix(x), n2=mix(y), z_param=z,
        kappa_low=k_low, kappa_hi=k_hi, x_param=x, y_param=y,
    )


# ----------------------------------------------------------------------
# random class members (property-test sampler)


def sample_class_member(
    prefix: Prefix,
    mu: float,
    rng: np.random.Generator,
    max_degree: int = 60,
    max_tries: int = 200,
) -> DegreePMF:
    """Random distribution with the given prefix and mean mu.

    Tail support is drawn from {L+1, ..., max_degree} with Dirichlet-like
    weights; one weight is then adjusted so the conditional tail mean hits
    kappa, with rejection when no adjustment stays non-negative.
    """
    k = kappa(prefix, mu)
    if k > max_degree:
        raise InfeasibleMean(f"kappa = {k!r} beyond max_degree = {max_degree}")
    p_gt = prefix.p_gt_L
    lo_deg = prefix.L + 1
    for _ in range(max_tries):
        size = int(rng.integers(2, 7))
        size = min(size, max_degree - lo_deg + 1)
        degs = np.sort(rng.choice(np.arange(lo_deg, max_degree + 1), size, replace=False))
        if not degs[0] <= k <= degs[-1]:
            continue
        w = rng.dirichlet(np.ones(size))
        order = rng.permutation(size)
        for i in order:
            if degs[i] == k:
                continue
            rest = math.fsum(w[j] * (k - degs[j]) for j in range(size) if j != i)
            wi = rest / (degs[i] - k)
            if wi < 0.0:
                continue
            w2 = w.copy()
            w2[i] = wi
            total = w2.sum()
            if total <= 0.0:
                continue
            tail = [(int(d), p_gt * wv / total) for d, wv in zip(degs, w2)]
            entries = prefix.entries() + tail
            return make_pmf(
                [(d, p) for d, p in entries], provenance="sampled member"
            )
    raise Error(f"no feasible tail found after {max_tries} tries")
