"""Exact experiments on polynomial-composition orbits over prime fields.

The package splits into field/polynomial arithmetic (fields, poly,
arrays), orbit dynamics and subgroup accounting (dynamics, subgroups),
graph quantities with certified cycle search (graphmetrics),
admissibility and counting bounds (admissibility), and the experiment
harness plus CLI (harness, cli).
"""

__version__ = "0.1.0"

from .errors import BudgetExceeded, ConfigError, ContextMismatch, WordPoolError
from .fields import PrimeFieldCtx, factor_integer, is_prime, mul_order
from .poly import (
    ExtFieldCtx,
    Polynomial,
    is_irreducible,
    poly_compose,
    poly_gcd,
    roots_in_extensions,
    roots_in_field,
    squarefree_part,
)
from .dynamics import (
    INFINITE,
    FunctionalGraph,
    OrbitRecord,
    SemigroupOrbit,
    build_graph,
    iterate_trajectory,
    semigroup_orbit,
)
from .subgroups import (
    MembershipStats,
    SubgroupDescriptor,
    enumerate_subgroups,
    membership_stats,
    orbit_subgroup_size,
    subgroup_from_orbit,
    subgroup_generated,
)
from .graphmetrics import (
    INFINITE_CYCLE,
    UNREACHABLE,
    CompositionWord,
    CycleSearchResult,
    DenseSearchResult,
    dense_words_search,
    distance,
    distances_from,
    recount_L,
    shortest_cycle_through_zero,
    tree_size_B,
)
from .admissibility import (
    AdmissibilityWitness,
    LemmaCompositionReport,
    TheoremParams,
    VyuginConstants,
    composed_family,
    count_joint_coset_hits,
    is_admissible,
    thm_params,
    verify_lemma_admissible_compositions,
    vyugin_constants,
)
from .harness import (
    BoundCheck,
    ExperimentReport,
    ExperimentSpec,
    REPORT_SCHEMA,
    ensure_preflight,
    load_config,
    oracle_subgroup_closure,
    run_batch,
    run_spec,
    validate_report,
    verify_lemma_dense,
    verify_theorem1,
    verify_theorem2,
    verify_vyugin,
)

__all__ = [
    "__version__",
    "BudgetExceeded",
    "ConfigError",
    "ContextMismatch",
    "WordPoolError",
    "PrimeFieldCtx",
    "factor_integer",
    "is_prime",
    "mul_order",
    "ExtFieldCtx",
    "Polynomial",
    "is_irreducible",
    "poly_compose",
    "poly_gcd",
    "roots_in_extensions",
    "roots_in_field",
    "squarefree_part",
    "INFINITE",
    "FunctionalGraph",
    "OrbitRecord",
    "SemigroupOrbit",
    "build_graph",
    "iterate_trajectory",
    "semigroup_orbit",
    "MembershipStats",
    "SubgroupDescriptor",
    "enumerate_subgroups",
    "membership_stats",
    "orbit_subgroup_size",
    "subgroup_from_orbit",
    "subgroup_generated",
    "INFINITE_CYCLE",
    "UNREACHABLE",
    "CompositionWord",
    "CycleSearchResult",
    "DenseSearchResult",
    "dense_words_search",
    "distance",
    "distances_from",
    "recount_L",
    "shortest_cycle_through_zero",
    "tree_size_B",
    "AdmissibilityWitness",
    "LemmaCompositionReport",
    "TheoremParams",
    "VyuginConstants",
    "composed_family",
    "count_joint_coset_hits",
    "is_admissible",
    "thm_params",
    "verify_lemma_admissible_compositions",
    "vyugin_constants",
    "BoundCheck",
    "ExperimentReport",
    "ExperimentSpec",
    "REPORT_SCHEMA",
    "ensure_preflight",
    "load_config",
    "oracle_subgroup_closure",
    "run_batch",
    "run_spec",
    "validate_report",
    "verify_lemma_dense",
    "verify_theorem1",
    "verify_theorem2",
    "verify_vyugin",
]
