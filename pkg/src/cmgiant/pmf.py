"""Degree distributions and their generating functions.

A distribution is stored sparsely as sorted (degree, probability) pairs
with finite support.  Infinite tails (Poisson, power law) enter only
through :func:`materialize_tail`, which truncates adaptively and drops the
residual mass without renormalizing; the deficit stays inside the
construction slack of ``MASS_TOL``.

For a distribution F with generating function g and mean mu, the package
works with the down-shifted size-biased distribution whose probabilities
are (d+1) p_{d+1} / mu and whose generating function is g'(s)/mu.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DivergentTail,
    DomainError,
    DuplicateDegree,
    NegativeProbability,
    SumNotOne,
    TailTruncationCapped,
    ZeroMean,
)

MASS_TOL = 1e-9          # |sum of probabilities - 1| allowed at construction
TAIL_MASS_TOL = 1e-12    # default omitted-mass tolerance for tail truncation
TAIL_MEAN_TOL = 1e-10    # omitted mean-contribution tolerance
MAX_TAIL_DEGREE = 500_000  # hard support cap when no hint is given


def _powi(base: float, exp: int) -> float:
    """base**exp for integer exp >= 0 by squaring."""
    result = 1.0
    b = base
    e = exp
    while e:
        if e & 1:
            result *= b
        b *= b
        e >>= 1
    return result


@dataclass(frozen=True)
class DegreePMF:
    """Sparse finite-support pmf over non-negative integer degrees.

    Immutable after construction; all methods are pure, so instances can be
    shared freely across threads.  Build through :func:`make_pmf`, which
    validates, drops zero entries and sorts.
    """

    degrees: tuple[int, ...]
    probs: tuple[float, ...]
    provenance: str = ""
    _deg: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _prob: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_deg", np.asarray(self.degrees, dtype=np.int64))
        object.__setattr__(self, "_prob", np.asarray(self.probs, dtype=np.float64))

    # -- basic accessors ------------------------------------------------

    def __len__(self) -> int:
        return len(self.degrees)

    def items(self) -> Iterable[tuple[int, float]]:
        return zip(self.degrees, self.probs)

    def prob(self, degree: int) -> float:
        """Probability of a single degree (0.0 if outside the support)."""
        i = int(np.searchsorted(self._deg, degree))
        if i < len(self.degrees) and self.degrees[i] == degree:
            return self.probs[i]
        return 0.0

    def mass(self) -> float:
        """Total probability (1 up to the construction slack)."""
        return math.fsum(self.probs)

    def mass_deficit(self) -> float:
        """1 - mass(); positive for tail-truncated distributions."""
        return 1.0 - self.mass()

    # -- moments ---------------------------------------------------------

    def mean(self) -> float:
        """Mean degree."""
        return math.fsum(d * p for d, p in self.items())

    def second_factorial_moment(self) -> float:
        """E[D(D-1)]."""
        return math.fsum(d * (d - 1) * p for d, p in self.items())

    def critical_parameter(self) -> float:
        """E[D(D-1)] / E[D]; a giant component exists iff this exceeds 1."""
        mu = self.mean()
        if mu <= 0.0:
            raise ZeroMean("critical parameter needs mean > 0")
        return self.second_factorial_moment() / mu

    def size_biased_downshift(self) -> "DegreePMF":
        """Distribution with probabilities (d+1) p_{d+1} / mean.

        This is the offspring law seen when arriving at a vertex along a
        uniformly chosen half-edge; its mean equals critical_parameter().
        """
        mu = self.mean()
        if mu <= 0.0:
            raise ZeroMean("size-biased down-shift needs mean > 0")
        entries = [(d - 1, d * p / mu) for d, p in self.items() if d >= 1]
        return make_pmf(entries, provenance=f"downshift({self.provenance})")

    # -- generating functions ---------------------------------------------

    def pgf(self, s: float) -> float:
        """g(s) = sum p_d s^d for s in [0, 1]."""
        return _horner(self._check_s(s), self.degrees, self.probs)

    def pgf_prime(self, s: float) -> float:
        """g'(s) = sum d p_d s^(d-1) for s in [0, 1]."""
        s = self._check_s(s)
        exps = tuple(d - 1 for d in self.degrees if d >= 1)
        coeffs = tuple(d * p for d, p in self.items() if d >= 1)
        return _horner(s, exps, coeffs)

    def pgf_second(self, s: float) -> float:
        """g''(s) = sum d(d-1) p_d s^(d-2)."""
        s = self._check_s(s)
        exps = tuple(d - 2 for d in self.degrees if d >= 2)
        coeffs = tuple(d * (d - 1) * p for d, p in self.items() if d >= 2)
        return _horner(s, exps, coeffs)

    @staticmethod
    def _check_s(s: float) -> float:
        if not 0.0 <= s <= 1.0:
            raise DomainError(f"generating function argument {s!r} outside [0, 1]")
        return float(s)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "probs": [[int(d), float(p)] for d, p in self.items()],
            "provenance": self.provenance,
        }

    def to_text(self) -> str:
        lines = [f"# {self.provenance}"] if self.provenance else []
        lines += [f"{d}\t{p!r}" for d, p in self.items()]
        return "\n".join(lines) + "\n"


def _horner(s: float, exps: Sequence[int], coeffs: Sequence[float]) -> float:
    """Sparse Horner evaluation of sum coeffs[i] * s**exps[i], exps ascending."""
    if not coeffs:
        return 0.0
    acc = 0.0
    prev = None
    for e, c in zip(reversed(exps), reversed(coeffs)):
        if prev is None:
            acc = c
        else:
            acc = acc * _powi(s, prev - e) + c
        prev = e
    return acc * _powi(s, prev)


def make_pmf(entries: Iterable[tuple[int, float]], provenance: str = "") -> DegreePMF:
    """Validate (degree, probability) pairs and build a DegreePMF.

    Zero-probability entries are dropped and the rest sorted by degree.
    Raises SumNotOne, NegativeProbability or DuplicateDegree.
    """
    pairs = [(int(d), float(p)) for d, p in entries]
    if not pairs:
        raise SumNotOne("empty distribution")
    for d, p in pairs:
        if d < 0:
            raise DomainError(f"negative degree {d}")
        if p < 0.0:
            raise NegativeProbability(f"p_{d} = {p!r}")
    seen = set()
    for d, _ in pairs:
        if d in seen:
            raise DuplicateDegree(f"degree {d} listed twice")
        seen.add(d)
    total = math.fsum(p for _, p in pairs)
    if abs(total - 1.0) > MASS_TOL:
        raise SumNotOne(f"probabilities sum to {total!r}")
    pairs = sorted((d, p) for d, p in pairs if p > 0.0)
    return DegreePMF(
        degrees=tuple(d for d, _ in pairs),
        probs=tuple(p for _, p in pairs),
        provenance=provenance,
    )


# ----------------------------------------------------------------------
# analytic tails


@dataclass(frozen=True)
class PoissonTail:
    """Plain Poisson(rate) probabilities for degrees >= min_degree."""

    rate: float
    min_degree: int
    mass_tol: float = TAIL_MASS_TOL

    def __post_init__(self) -> None:
        if self.rate <= 0.0:
            raise DomainError("Poisson rate must be positive")
        if self.min_degree < 0:
            raise DomainError("min_degree must be non-negative")


@dataclass(frozen=True)
class PowerLawTail:
    """p_d = constant * d**(-exponent) for degrees >= min_degree.

    Requires exponent > 2 so the tail's mean contribution is finite.
    """

    constant: float
    exponent: float
    min_degree: int
    mass_tol: float = TAIL_MASS_TOL

    def __post_init__(self) -> None:
        if self.constant <= 0.0:
            raise DomainError("power-law constant must be positive")
        if self.min_degree < 1:
            raise DomainError("power-law min_degree must be >= 1")
        if self.exponent <= 2.0:
            raise DivergentTail(f"exponent {self.exponent} <= 2")


TailSpec = PoissonTail | PowerLawTail


def materialize_tail(
    spec: TailSpec, max_degree_hint: int | None = None
) -> list[tuple[int, float]]:
    """Truncate an analytic tail into a finite (degree, probability) fragment.

    The cutoff is chosen so that the omitted mass is below ``spec.mass_tol``
    and the omitted mean contribution below ``TAIL_MEAN_TOL``.  When that
    cutoff would exceed ``max_degree_hint`` (or ``MAX_TAIL_DEGREE`` if no
    hint is given, as happens for power laws with exponent <= 3) the
    fragment is capped there and a TailTruncationCapped warning is issued.
    Retained probabilities never depend on the tolerances, so tightening
    them only extends the support.
    """
    cap = max_degree_hint if max_degree_hint is not None else MAX_TAIL_DEGREE
    if cap < spec.min_degree:
        raise DomainError("max_degree_hint below the tail's min_degree")
    if isinstance(spec, PoissonTail):
        return _poisson_fragment(spec, cap)
    return _power_law_fragment(spec, cap)


def _poisson_fragment(spec: PoissonTail, cap: int) -> list[tuple[int, float]]:
    lam = spec.rate
    d = spec.min_degree
    # log-space start, then the term recurrence p_{d+1} = p_d * lam/(d+1)
    term = math.exp(-lam + d * math.log(lam) - math.lgamma(d + 1))
    out = [(d, term)]
    while True:
        if d >= cap:
            warnings.warn(
                f"Poisson tail capped at degree {cap}", TailTruncationCapped
            )
            break
        next_term = term * lam / (d + 1)
        if d + 1 > lam:
            # geometric envelope: remaining mass after d is < next_term/(1-r)
            r = lam / (d + 2)
            bound = next_term / (1.0 - r)
            mean_bound = lam * (term + bound)
            if bound < spec.mass_tol and mean_bound < TAIL_MEAN_TOL:
                break
        d += 1
        term = next_term
        out.append((d, term))
    return out


def _power_law_fragment(spec: PowerLawTail, cap: int) -> list[tuple[int, float]]:
    c, a = spec.constant, spec.exponent
    # integral envelopes: mass beyond D < c D^(1-a)/(a-1), mean < c D^(2-a)/(a-2)
    d_mass = (c / ((a - 1.0) * spec.mass_tol)) ** (1.0 / (a - 1.0))
    d_mean = (c / ((a - 2.0) * TAIL_MEAN_TOL)) ** (1.0 / (a - 2.0))
    cutoff = max(spec.min_degree, int(math.ceil(max(d_mass, d_mean))))
    if cutoff > cap:
        cutoff = cap
        warnings.warn(
            f"power-law tail needs cutoff ~{max(d_mass, d_mean):.3g} for the "
            f"requested tolerances; capped at {cap}",
            TailTruncationCapped,
        )
    ds = np.arange(spec.min_degree, cutoff + 1, dtype=np.int64)
    ps = c * np.power(ds.astype(np.float64), -a)
    if ps.sum() >= 1.0:
        raise DomainError("tail mass reaches 1; not a valid tail fragment")
    return list(zip(ds.tolist(), ps.tolist()))


def fragment_mass(fragment: Sequence[tuple[int, float]]) -> float:
    return math.fsum(p for _, p in fragment)


def fragment_mean(fragment: Sequence[tuple[int, float]]) -> float:
    return math.fsum(d * p for d, p in fragment)


# ----------------------------------------------------------------------
# text / JSON formats


def pmf_from_text(text: str, provenance: str = "") -> DegreePMF:
    """Parse the one-pair-per-line text format; '#' starts a comment."""
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"bad pmf line: {raw!r}")
        entries.append((int(parts[0]), float(parts[1])))
    return make_pmf(entries, provenance=provenance)


def pmf_from_json_dict(data: dict) -> DegreePMF:
    return make_pmf(
        [(d, p) for d, p in data["probs"]], provenance=data.get("provenance", "")
    )


def load_pmf(path: str) -> DegreePMF:
    """Read a pmf file; JSON if the name ends in .json, text otherwise."""
    with open(path, encoding="utf-8") as fh:
        content = fh.read()
    if path.endswith(".json"):
        return pmf_from_json_dict(json.loads(content))
    return pmf_from_text(content, provenance=path)


def parse_inline_pmf(text: str) -> DegreePMF:
    """Parse the CLI inline form 'degree:prob,degree:prob,...'."""
    entries = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        d, _, p = chunk.partition(":")
        if not p:
            raise DomainError(f"bad pmf entry {chunk!r}; expected 'degree:prob'")
        entries.append((int(d), float(p)))
    return make_pmf(entries, provenance="inline")
