"""Giant-component sizes, extremal bounds and simulation for the configuration model."""

from .bounds import (
    BoundsReport,
    MixtureDecomposition,
    Prefix,
    bounds_report,
    check_conditions,
    construct_G,
    construct_G_m,
    construct_H,
    kappa,
    lower_bound_prop1,
    lower_bound_thm_a,
    mixture_decompose,
    sample_class_member,
    upper_bound_thm_b,
)
from .pmf import (
    DegreePMF,
    PoissonTail,
    PowerLawTail,
    load_pmf,
    make_pmf,
    materialize_tail,
    parse_inline_pmf,
)
from .search import (
    FamilyPoint,
    GridSearchResult,
    MaxGapSearch,
    enumerate_prefixes,
    figure_dataset,
    fixed_tail_family,
    max_gap_search,
    three_point_family,
)
from .simulate import (
    SimResult,
    UnionFind,
    largest_component_fraction,
    monte_carlo,
    sample_degrees,
)
from .solver import (
    FixedPointResult,
    GiantResult,
    extinction_probability,
    fixed_point_with_mean,
    giant_fraction,
    monotone_iteration_fixed_point,
    solve_giant,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "DegreePMF",
    "FamilyPoint",
    "FixedPointResult",
    "GiantResult",
    "GridSearchResult",
    "MaxGapSearch",
    "MixtureDecomposition",
    "PoissonTail",
    "PowerLawTail",
    "Prefix",
    "SimResult",
    "UnionFind",
    "bounds_report",
    "check_conditions",
    "construct_G",
    "construct_G_m",
    "construct_H",
    "enumerate_prefixes",
    "extinction_probability",
    "figure_dataset",
    "fixed_point_with_mean",
    "fixed_tail_family",
    "giant_fraction",
    "kappa",
    "largest_component_fraction",
    "load_pmf",
    "lower_bound_prop1",
    "lower_bound_thm_a",
    "make_pmf",
    "materialize_tail",
    "max_gap_search",
    "mixture_decompose",
    "monotone_iteration_fixed_point",
    "monte_carlo",
    "parse_inline_pmf",
    "sample_class_member",
    "sample_degrees",
    "solve_giant",
    "three_point_family",
    "upper_bound_thm_b",
]
