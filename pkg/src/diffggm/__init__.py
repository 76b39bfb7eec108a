"""Joint structure learning of two-condition Gaussian graphical models.

Fits one fused-penalty regression per node: an l1 term controls graph
sparsity, a second l1 term on between-condition coefficient differences
suppresses spurious changes, and the surviving differences form the
differential sub-network.
"""

__version__ = "0.1.0"

from .data import (
    CoefficientPair,
    PenaltyConfig,
    RawDataset,
    StandardizedDataset,
    objective_value,
    read_csv,
    standardize,
    write_csv,
)
from .exceptions import (
    ConstantColumn,
    CsvFormatError,
    DegenerateCorrelation,
    DidNotConverge,
    DiffggmError,
    FoldTooSmall,
    MissingNode,
    NonFinite,
    SelfBlock,
    SelfEdgeViolation,
    UnbalancedDesign,
    UnknownExperiment,
)
from .fusedpair import BlockSolution, classify_region, kkt_residual, solve_block
from .network import (
    DifferentialSubnetwork,
    Edge,
    NetworkModel,
    assemble,
    differential,
    differential_to_dot,
    differential_to_json,
    network_to_dot,
    network_to_json,
)
from .regularization import (
    Lambda1Selection,
    Lambda2Heuristic,
    fisher_z,
    lambda1_grid,
    lambda2_from_stats,
    select_lambda1_cv,
    select_lambda2,
)
from .solver import (
    NodeSolution,
    SolverOptions,
    fit_all,
    fit_node,
    gram_matrices,
    partial_residual,
)
from .synthgen import (
    GraphSpec,
    PrecisionMatrix,
    build_precision,
    builtin_experiment,
    changed_edges,
    sample,
    sample_pair,
)

__all__ = [
    "BlockSolution",
    "CoefficientPair",
    "ConstantColumn",
    "CsvFormatError",
    "DegenerateCorrelation",
    "DidNotConverge",
    "DiffggmError",
    "DifferentialSubnetwork",
    "Edge",
    "FoldTooSmall",
    "GraphSpec",
    "Lambda1Selection",
    "Lambda2Heuristic",
    "MissingNode",
    "NetworkModel",
    "NodeSolution",
    "NonFinite",
    "PenaltyConfig",
    "PrecisionMatrix",
    "RawDataset",
    "SelfBlock",
    "SelfEdgeViolation",
    "SolverOptions",
    "StandardizedDataset",
    "UnbalancedDesign",
    "UnknownExperiment",
    "assemble",
    "build_precision",
    "builtin_experiment",
    "changed_edges",
    "classify_region",
    "differential",
    "differential_to_dot",
    "differential_to_json",
    "fisher_z",
    "fit_all",
    "fit_node",
    "gram_matrices",
    "kkt_residual",
    "lambda1_grid",
    "lambda2_from_stats",
    "network_to_dot",
    "network_to_json",
    "objective_value",
    "partial_residual",
    "read_csv",
    "sample",
    "sample_pair",
    "select_lambda1_cv",
    "select_lambda2",
    "solve_block",
    "standardize",
    "write_csv",
]
