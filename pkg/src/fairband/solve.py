"""Top-level solvers: the approximation scheme and the greedy heuristic."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .discretize import breakpoints, demand_set, lower_bound_L
from .errors import ConfigurationError, InfeasibleError
from .maxmin import build_phi_grid, max_min_value, phi_lower
from .mckp import MckpInstance, solve_mckp
from .objective import ObjectiveBreakdown, feo_objective, is_feasible


@dataclass(frozen=True)
class PhiLogEntry:
    phi: float
    status: str
    objective: Optional[float] = None


@dataclass
class SolveReport:
    allocation: np.ndarray
    objective: ObjectiveBreakdown
    phi_selected: Optional[float]
    epsilon_used: Optional[float]
    delta_target: Optional[float]
    wall_time_s: float
    phi_grid_size: int = 0
    per_phi_log: List[PhiLogEntry] = field(default_factory=list)
    solver: str = ""


def _check_allocation(x, scenario):
    if not is_feasible(x, scenario):
        raise AssertionError(f"solver produced an infeasible allocation {x!r}")


def fptas(scenario, epsilon: Optional[float] = None, theta_mode: str = "safe") -> SolveReport:
    """Approximation scheme over a geometric grid of fairness levels.

    For every level ``phi`` each user keeps only the candidate demands
    reaching ``phi``; a multiple-choice knapsack over those demands maximizes
    the sum of ``u**p`` within the bandwidth.  The allocation with the best
    true objective across all levels is returned.

    Parameters
    ----------
    scenario : Scenario
    epsilon : float, optional
        Grid ratio; defaults to ``scenario.delta / 6``.  Values outside the
        nominal range are accepted for experiments.
    theta_mode : str
        Profit scaling passed to :func:`fairband.mckp.solve_mckp`.

    Raises
    ------
    InfeasibleError
        If no fairness level yields a feasible knapsack.
    """
    t0 = time.perf_counter()
    sc = scenario
    eps = sc.epsilon if epsilon is None else float(epsilon)
    if not 0 < eps < 1:
        raise ConfigurationError(f"epsilon must lie in (0, 1), got {eps}")
    n, p, B = sc.n_users, sc.p, sc.total_bandwidth

    phi_bar = max_min_value(sc, eps)
    # users with utility below one at their lower bound move the grid start down
    start = min(1.0, phi_lower(sc))
    grid = build_phi_grid(phi_bar, eps, start)
    L = lower_bound_L(sc, strict=False)
    full = [demand_set(breakpoints(u, eps, L, n, p, i), u, -math.inf)
            for i, u in enumerate(sc.users)]

    # many levels keep identical demand sets; solve each distinct one once
    cache = {}
    log = []
    best = None
    for phi in grid:
        sets = [s.above(phi) for s in full]
        if any(len(s) == 0 for s in sets):
            log.append(PhiLogEntry(phi, "infeasible"))
            continue
        key = tuple(len(s) for s in sets)
        if key not in cache:
            try:
                inst = MckpInstance.from_demand_sets(sets, B, phi)
                res = solve_mckp(inst, eps, theta_mode)
            except InfeasibleError:
                cache[key] = None
            else:
                x = np.asarray(res.demands, dtype=float)
                cache[key] = (x, feo_objective(x, sc))
        hit = cache[key]
        if hit is None:
            log.append(PhiLogEntry(phi, "infeasible"))
            continue
        x, obj = hit
        log.append(PhiLogEntry(phi, "solved", obj.f_total))
        if best is None or obj.f_total > best[1].f_total:
            best = (x, obj, phi)
    if best is None:
        raise InfeasibleError("no fairness level admits a feasible allocation")
    x, obj, phi = best
    _check_allocation(x, sc)
    return SolveReport(allocation=x.copy(), objective=obj, phi_selected=phi,
                       epsilon_used=eps, delta_target=6.0 * eps,
                       wall_time_s=time.perf_counter() - t0, phi_grid_size=len(grid),
                       per_phi_log=log, solver="fptas")


def greedy_shares(lower, upper, u_lower, u_upper, total_bandwidth):
    """Allocation that splits the spare bandwidth by average utility slope.

    Each user gets its lower bound plus a share of ``B - sum(lower)``
    proportional to ``(u(upper) - u(lower)) / (upper - lower)``, capped at
    its upper bound.  Bandwidth left over by capped users stays unused.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    slope = (np.asarray(u_upper, dtype=float) - np.asarray(u_lower, dtype=float)) / (upper - lower)
    spare = total_bandwidth - lower.sum()
    share = slope / slope.sum()
    return lower + np.minimum(upper - lower, share * max(spare, 0.0))


def greedy(scenario) -> SolveReport:
    """Single-pass heuristic in linear time."""
    t0 = time.perf_counter()
    sc = scenario
    x = greedy_shares(sc.lower, sc.upper, sc.utilities(sc.lower), sc.utilities(sc.upper),
                      sc.total_bandwidth)
    elapsed = time.perf_counter() - t0
    _check_allocation(x, sc)
    return SolveReport(allocation=x, objective=feo_objective(x, sc), phi_selected=None,
                       epsilon_used=None, delta_target=None, wall_time_s=elapsed,
                       solver="greedy")


def solve_reference_pair(scenario, epsilon: Optional[float] = None):
    """Solve the pure-efficiency (alpha=1) and pure-fairness (alpha=0) endpoints."""
    return (fptas(scenario.with_(alpha=1.0), epsilon),
            fptas(scenario.with_(alpha=0.0), epsilon))
