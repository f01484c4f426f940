"""Finite-n configuration-model sampler and largest-component measurement.

Half-edges are assigned i.i.d. from the degree distribution (one extra on
a uniform vertex if the total is odd), the half-edge multiset is shuffled
uniformly and consecutive entries paired into edges; self-loops and
multi-edges are kept.  Components come from a union-find over the pairs;
the multigraph itself is never built.

Reproducibility contract: replica k of a run with seed s draws from
numpy's PCG64 seeded with SeedSequence((s, k)), consuming first the n
degree uniforms, then the parity fix (if any), then the pairing shuffle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OddSum
from .pmf import DegreePMF


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    __slots__ = ("parent", "size", "max_size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.max_size = 1 if n else 0

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.size[ra] > self.max_size:
            self.max_size = self.size[ra]

    def class_sizes(self) -> list[int]:
        return [self.size[i] for i in range(len(self.parent)) if self.find(i) == i]


@dataclass(frozen=True)
class SimResult:
    """Largest-component fractions over independent replicas."""

    n: int
    reps: int
    seed: int
    fractions: tuple[float, ...]
    mean_fraction: float
    stderr: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "fractions": list(self.fractions),
            "mean_fraction": self.mean_fraction,
            "stderr": self.stderr,
        }


def replica_rng(seed: int, k: int) -> np.random.Generator:
    """Stream for replica k: PCG64 seeded with SeedSequence((seed, k))."""
    return np.random.default_rng(np.random.SeedSequence((seed, k)))


def sample_degrees(pmf: DegreePMF, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. degrees by inverse CDF, parity-fixed to an even total.

    If the raw sum is odd, one uniformly chosen vertex gains one extra
    half-edge, so the returned sum is always even.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    cum = np.cumsum(pmf._prob)
    u = rng.random(n)
    idx = np.searchsorted(cum, u, side="right")
    degrees = pmf._deg[np.minimum(idx, len(cum) - 1)].copy()
    if int(degrees.sum()) % 2 == 1:
        degrees[int(rng.integers(n))] += 1
    return degrees


def largest_component_fraction(
    degrees: np.ndarray, rng: np.random.Generator
) -> float:
    """Fraction of vertices in the largest component of a uniform pairing.

    Shuffling the half-edge multiset and pairing consecutive entries is
    distributed exactly as drawing uniform half-edge pairs sequentially.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    total = int(degrees.sum())
    if total % 2 == 1:
        raise OddSum(f"half-edge count {total} is odd")
    n = len(degrees)
    owners = rng.permutation(np.repeat(np.arange(n), degrees))
    uf = UnionFind(n)
    union = uf.union
    left = owners[0::2].tolist()
    right = owners[1::2].tolist()
    for a, b in zip(left, right):
        union(a, b)
    return uf.max_size / n


def monte_carlo(
    pmf: DegreePMF, n: int, reps: int, seed: int, threads: int = 1
) -> SimResult:
    """reps independent replicas; a pure function of (pmf, n, reps, seed)."""
    if reps < 1:
        raise DomainError("reps must be >= 1")
    if seed < 0:
        raise DomainError("seed must be a non-negative 64-bit integer")

    def one(k: int) -> float:
        rng = replica_rng(seed, k)
        return largest_component_fraction(sample_degrees(pmf, n, rng), rng)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fractions = list(pool.map(one, range(reps)))
    else:
        fractions = [one(k) for k in range(reps)]

    mean = math.fsum(fractions) / reps
    if reps > 1:
        var = math.fsum((f - mean) ** 2 for f in fractions) / (reps - 1)
        stderr = math.sqrt(var / reps)
    else:
        stderr = 0.0
    return SimResult(
        n=n, reps=reps, seed=seed,
        fractions=tuple(fractions), mean_fraction=mean, stderr=stderr,
    )
