"""Fair and efficient bandwidth allocation for joint sensing and communication users.

Each user's utility is its communication rate plus its radar estimation
rate.  The library trades off the l_p norm of utilities against the worst
user's utility and solves the resulting non-convex allocation problem with
an approximation scheme or a linear-time greedy heuristic.
"""

from .errors import (BracketError, ConfigurationError, DomainError, FeoError, GuardError,
                     InfeasibleError, InfeasibleScenarioError, IterationError,
                     ScenarioParseError)
from .model import (PhysicalParams, Scenario, UserModel, comm_rate, derive_user, est_rate,
                    sample_physical_users, utility)
from .objective import (ObjectiveBreakdown, f_min, f_p_norm, feo_objective, is_feasible,
                        price_of_efficiency, price_of_fairness)
from .maxmin import build_phi_grid, max_min_value
from .solve import SolveReport, fptas, greedy, solve_reference_pair
from .oracle import grid_optimum, mckp_enumerate
from .scenario_file import load_scenario, save_scenario

__all__ = [
    "BracketError", "ConfigurationError", "DomainError", "FeoError", "GuardError",
    "InfeasibleError", "InfeasibleScenarioError", "IterationError", "ScenarioParseError",
    "PhysicalParams", "Scenario", "UserModel", "comm_rate", "derive_user", "est_rate",
    "sample_physical_users", "utility", "ObjectiveBreakdown", "f_min", "f_p_norm",
    "feo_objective", "is_feasible", "price_of_efficiency", "price_of_fairness",
    "build_phi_grid", "max_min_value", "SolveReport", "fptas", "greedy",
    "solve_reference_pair", "grid_optimum", "mckp_enumerate", "load_scenario",
    "save_scenario",
]
