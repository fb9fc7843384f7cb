"""Community-structured 3-SAT instances with a planted solution."""

__version__ = "0.1.0"

from .analysis import build_vig, instance_stats, modularity
from .distribution import ClauseDistribution, beta_of, midpoint_params, preset_params, qhidden_params
from .generator import GeneratedInstance, GeneratorParams, generate_batch, generate_formula
from .io import load_instance, read_dimacs, read_metadata, write_dimacs, write_metadata
from .model import Assignment, Formula, clause_type, evaluate, is_satisfied
from .partition import CommunityPartition, partition_communities
from .solvers import Status, brute_force_count, dpll_solve, walksat_probe

__all__ = [
    "Assignment",
    "ClauseDistribution",
    "CommunityPartition",
    "Formula",
    "GeneratedInstance",
    "GeneratorParams",
    "Status",
    "beta_of",
    "brute_force_count",
    "build_vig",
    "clause_type",
    "dpll_solve",
    "evaluate",
    "generate_batch",
    "generate_formula",
    "instance_stats",
    "is_satisfied",
    "load_instance",
    "midpoint_params",
    "modularity",
    "partition_communities",
    "preset_params",
    "qhidden_params",
    "read_dimacs",
    "read_metadata",
    "walksat_probe",
    "write_dimacs",
    "write_metadata",
]
