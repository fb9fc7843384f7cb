"""Small reference solvers used as hardness proxies and correctness oracles."""
from .outcome import SolveOutcome, Status
from .dpll import dpll_solve
from .dpll_reference import dpll_solve_reference
from .walksat import walksat_probe
from .brute import brute_force_count, brute_force_models

__all__ = [
    "SolveOutcome",
    "Status",
    "dpll_solve",
    "dpll_solve_reference",
    "walksat_probe",
    "brute_force_count",
    "brute_force_models",
]
