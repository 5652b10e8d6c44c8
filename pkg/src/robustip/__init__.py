"""Exact integer toolkit for robust integer programming over Graver bases."""

from .core import (
    CostBox,
    CostList,
    CostModel,
    IntMatrix,
    IntVector,
    SeparableConvexObjective,
    StandardFormSet,
    box_objective,
    conformal_leq,
    dot,
    eval_objective,
    linear_objective,
    membership,
)
from .errors import (
    DimensionError,
    InfeasibleError,
    ResourceLimitError,
    ToolkitError,
    ValidationError,
)
from .graver import (
    GraverBasis,
    GraverVerification,
    brute_force_graver,
    compute_graver,
    greedy_conformal_decomposition,
    nfold_product,
    verify_graver,
)
from .instances import (
    MCFInstance,
    PartitionMaxMinInstance,
    PartitionMinMaxInstance,
    RandomInstance,
    Transport3Instance,
    build_mcf,
    build_transport3,
    check_nfold_structure,
    gen_partition_maxmin,
    gen_partition_minmax,
    gen_random,
)
from .robust import (
    RobustReport,
    dual_profit_variant,
    max_min_box_exact,
    max_min_list,
    min_max_box,
    min_max_list_exact,
    report_checks,
)
from .solver import (
    AugmentationTrace,
    TraceStep,
    enumerate_feasible,
    find_feasible,
    improving_pair,
    max_step_length,
    minimize_linear,
    minimize_separable_convex,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentationTrace",
    "CostBox",
    "CostList",
    "CostModel",
    "DimensionError",
    "GraverBasis",
    "GraverVerification",
    "InfeasibleError",
    "IntMatrix",
    "IntVector",
    "MCFInstance",
    "PartitionMaxMinInstance",
    "PartitionMinMaxInstance",
    "RandomInstance",
    "ResourceLimitError",
    "RobustReport",
    "SeparableConvexObjective",
    "StandardFormSet",
    "ToolkitError",
    "TraceStep",
    "Transport3Instance",
    "ValidationError",
    "box_objective",
    "brute_force_graver",
    "build_mcf",
    "build_transport3",
    "check_nfold_structure",
    "compute_graver",
    "conformal_leq",
    "dot",
    "dual_profit_variant",
    "enumerate_feasible",
    "eval_objective",
    "find_feasible",
    "gen_partition_maxmin",
    "gen_partition_minmax",
    "gen_random",
    "greedy_conformal_decomposition",
    "improving_pair",
    "linear_objective",
    "max_min_box_exact",
    "max_min_list",
    "max_step_length",
    "membership",
    "min_max_box",
    "min_max_list_exact",
    "minimize_linear",
    "minimize_separable_convex",
    "nfold_product",
    "report_checks",
    "verify_graver",
]
