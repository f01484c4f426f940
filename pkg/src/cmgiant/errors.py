"""Exception and warning types used across the package."""


class Error(Exception):
    """Base class for all cmgiant errors."""


# --- degree distribution construction ---

class SumNotOne(Error):
    """Probabilities do not sum to 1 within tolerance."""


class NegativeProbability(Error):
    """A probability is negative."""


class DuplicateDegree(Error):
    """The same degree appears twice in the input."""


class DivergentTail(Error):
    """Power-law exponent <= 2: the tail has no finite mean contribution."""


class DomainError(Error):
    """Argument outside its allowed domain (e.g. pgf argument not in [0, 1])."""


class ZeroMean(Error):
    """Operation requires a strictly positive mean degree."""


# --- fixed-point solver ---

class NoConvergence(Error):
    """Iteration cap reached with residual above tolerance (near-critical input)."""


class MeanMismatch(Error):
    """Supplied mean is smaller than the distribution's own mean."""


class DegenerateTwoRegular(Error):
    """All mass at degree 2: the giant-component fraction is not defined here."""


# --- extremal bounds ---

class EmptyTail(Error):
    """Prefix already carries all probability mass (p_{>L} = 0)."""


class InfeasibleMean(Error):
    """No distribution with the given prefix and integer tail support has this mean."""


class BadM(Error):
    """Far-atom position m must exceed both kappa and L+1."""


class DegenerateSplit(Error):
    """Mixture decomposition impossible: all mass on one side of floor(mean)."""


# --- search / families ---

class BadStep(Error):
    """Grid step must divide 1, and L must be in 1..8."""


class InfeasibleControl(Error):
    """No valid probability vector completes the family at this control value."""


# --- simulation ---

class OddSum(Error):
    """Half-edge count is odd; pairing requires an even total."""


# --- warnings (flags, never aborts) ---

class ConditionViolated(UserWarning):
    """A technical condition fails; the returned bound is not guaranteed."""


class TailTruncationCapped(UserWarning):
    """Tail cutoff hit the support cap before reaching the requested tolerances."""
