"""General position sets over finite affine spaces.

Exact engines for the point-hyperplane incidence graph of F_q^d, coplanar
and critical tuple censuses, hypergraph container families, and randomized
phase sweeps of the largest general-position subset.  Everything is
deterministic: the same seeds reproduce the same bytes regardless of the
worker thread count (GPFQ_THREADS).
"""

from ._core import (
    BudgetExceeded,
    MixedAmbient,
    NotPrimePower,
    PointSet,
    PreconditionFailed,
    Space,
    WrongDimension,
    affine_rank,
    alpha_exact,
    analyze_spectrum,
    atypical_hyperplanes,
    balanced_triples_profile,
    coplanar_count_lower,
    count_coplanar,
    count_critical,
    count_gp_sets,
    critical_count_lower,
    first_moment_bound,
    flat_count,
    gaussian_binomial,
    greedy_maximal_gp,
    is_evasive,
    is_general_position,
    iterate_containers,
    moment_curve,
    phase_sweep,
    sample_random_set,
    trials_to_csv,
    triple_system_bounds,
    verify_family,
)

__all__ = [
    "BudgetExceeded",
    "MixedAmbient",
    "NotPrimePower",
    "PointSet",
    "PreconditionFailed",
    "Space",
    "WrongDimension",
    "affine_rank",
    "alpha_exact",
    "analyze_spectrum",
    "atypical_hyperplanes",
    "balanced_triples_profile",
    "coplanar_count_lower",
    "count_coplanar",
    "count_critical",
    "count_gp_sets",
    "critical_count_lower",
    "first_moment_bound",
    "flat_count",
    "gaussian_binomial",
    "greedy_maximal_gp",
    "is_evasive",
    "is_general_position",
    "iterate_containers",
    "moment_curve",
    "phase_sweep",
    "sample_random_set",
    "trials_to_csv",
    "triple_system_bounds",
    "verify_family",
]

__version__ = "1.0.0"
