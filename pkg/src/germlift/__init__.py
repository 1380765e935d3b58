"""germlift: exact invariants and liftable vector fields of corank-one
polynomial multigerms, by rational linear algebra on truncated jets."""

from .jetcore import (
    ConstantTermError,
    Polynomial,
    PolyParseError,
    Ring,
    RingMismatchError,
    arith,
    compose,
    parse_poly,
    partial,
    poly_to_text,
    source_ring,
    target_ring,
    truncate,
)
from .germ import (
    Branch,
    DeltaNotFiniteError,
    GermValidationError,
    Multigerm,
    StabilizationResult,
    corank,
    load_multigerm,
    multigerm,
    stabilization,
)
from .localalg import (
    GradedInvariants,
    InternalInvariantError,
    JetOrderTooSmallError,
    graded_delta,
    graded_gamma,
    predicted_graded,
    tke_codim,
)
from .ksm import (
    HypothesisNotMetError,
    IndexReport,
    JetSubspace,
    OmegaMap,
    TargetVectorField,
    bijective_level,
    indices,
    omega_kernel,
    omega_map,
    predicted_kernel_dim,
    pullback_power_jets,
    tr_e_jets,
)
from .liftgen import (
    ConstructionStep,
    GeneratorSet,
    LiftWitness,
    VerifyResult,
    construct_generators,
    construction_steps,
    min_generators,
    parse_field,
    span_check,
    span_equal,
    verify_liftable,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "ConstantTermError",
    "ConstructionStep",
    "DeltaNotFiniteError",
    "GeneratorSet",
    "GermValidationError",
    "GradedInvariants",
    "HypothesisNotMetError",
    "IndexReport",
    "InternalInvariantError",
    "JetOrderTooSmallError",
    "JetSubspace",
    "LiftWitness",
    "Multigerm",
    "OmegaMap",
    "PolyParseError",
    "Polynomial",
    "Ring",
    "RingMismatchError",
    "StabilizationResult",
    "TargetVectorField",
    "VerifyResult",
    "arith",
    "bijective_level",
    "compose",
    "corank",
    "construct_generators",
    "construction_steps",
    "graded_delta",
    "graded_gamma",
    "indices",
    "load_multigerm",
    "min_generators",
    "multigerm",
    "omega_kernel",
    "omega_map",
    "parse_field",
    "parse_poly",
    "partial",
    "poly_to_text",
    "predicted_graded",
    "predicted_kernel_dim",
    "pullback_power_jets",
    "source_ring",
    "span_check",
    "span_equal",
    "stabilization",
    "target_ring",
    "tke_codim",
    "tr_e_jets",
    "truncate",
    "verify_liftable",
]
