"""orf-spectral library modules."""

from .config import (
    DEFAULT_CONFIG,
    debug_log,
    get_settings_dir,
    is_debug_enabled,
    load_config,
)

from .errors import (
    BreakdownError,
    ConditioningError,
    ExcludedBoundaryError,
    IndefinitePencilError,
    MassAtInfinityError,
    NodeCollisionError,
    NumericalError,
    OrfError,
    PoleEvaluationError,
    ValidationError,
)

from .moebius import (
    INFINITY,
    BlaschkeVariant,
    CPoint,
    Domain,
    PoleSeq,
    blaschke,
    eta,
    mobius_forward,
    mobius_inverse,
)

from .opmoebius import (
    DiagParam,
    conjugate_by_eta,
    op_eta,
    op_mobius_forward,
    op_mobius_inverse,
)

from .orfcore import (
    DerivedParams,
    OrfValue,
    ParamSeq,
    derived_params,
    eigenvector_rows,
    eval_chi,
    eval_orf,
    eval_porf,
    normalize_standard,
    porf_u,
)

from .matrices import (
    Family,
    RepKind,
    RepSpec,
    build_matrix,
    pair_rep,
    tridiagonal_pair,
    truncated_rep,
)

from .measures import (
    DiscreteMeasure,
    GramSchmidtResult,
    inner_product,
    lebesgue_orf,
    orf_from_measure,
)

from .spectral import (
    ArcDescriptor,
    EigenResult,
    KreinSequences,
    Quadrature,
    ZeroRoute,
    compare_truncated_spectra,
    eigensolve,
    krein_two_point,
    limit_point_sequence,
    lopez_arc,
    mass_point_weight,
    pair_spectrum,
    porf_quadrature,
    reconstruct_measure,
    zeros_orf,
)

from .realline import (
    LineConversion,
    cayley,
    circle_line_params,
    mass_at_infinity_check,
    rl_mobius,
    rl_op_mobius,
    rl_quadrature,
)

__all__ = [
    # Config
    "DEFAULT_CONFIG",
    "debug_log",
    "get_settings_dir",
    "is_debug_enabled",
    "load_config",
    # Errors
    "OrfError",
    "ValidationError",
    "NumericalError",
    "ConditioningError",
    "PoleEvaluationError",
    "BreakdownError",
    "NodeCollisionError",
    "IndefinitePencilError",
    "MassAtInfinityError",
    "ExcludedBoundaryError",
    # Scalar maps
    "INFINITY",
    "BlaschkeVariant",
    "CPoint",
    "Domain",
    "PoleSeq",
    "blaschke",
    "eta",
    "mobius_forward",
    "mobius_inverse",
    # Operator maps
    "DiagParam",
    "conjugate_by_eta",
    "op_eta",
    "op_mobius_forward",
    "op_mobius_inverse",
    # Recurrence
    "DerivedParams",
    "OrfValue",
    "ParamSeq",
    "derived_params",
    "eigenvector_rows",
    "eval_chi",
    "eval_orf",
    "eval_porf",
    "normalize_standard",
    "porf_u",
    # Matrices
    "Family",
    "RepKind",
    "RepSpec",
    "build_matrix",
    "pair_rep",
    "tridiagonal_pair",
    "truncated_rep",
    # Measures
    "DiscreteMeasure",
    "GramSchmidtResult",
    "inner_product",
    "lebesgue_orf",
    "orf_from_measure",
    # Spectral
    "ArcDescriptor",
    "EigenResult",
    "KreinSequences",
    "Quadrature",
    "ZeroRoute",
    "compare_truncated_spectra",
    "eigensolve",
    "krein_two_point",
    "limit_point_sequence",
    "lopez_arc",
    "mass_point_weight",
    "pair_spectrum",
    "porf_quadrature",
    "reconstruct_measure",
    "zeros_orf",
    # Real line
    "LineConversion",
    "cayley",
    "circle_line_params",
    "mass_at_infinity_check",
    "rl_mobius",
    "rl_op_mobius",
    "rl_quadrature",
]
