"""Brute-force verifiers for the allocation problem and the knapsack core.

These are deliberately simple and slow.  They exist to check the fast
solvers on instances small enough to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GuardError, InfeasibleError
from .mckp import MckpInstance
from .model import utility
from .objective import feo_objective

MAX_GRID_USERS = 3
MAX_COMBINATIONS = 10 ** 6


@dataclass(frozen=True)
class GridOracleSpec:
    scenario: object
    resolution: int = 2000

    def __post_init__(self):
        if self.scenario.n_users > MAX_GRID_USERS:
            raise GuardError(
                f"grid oracle is limited to {MAX_GRID_USERS} users, got {self.scenario.n_users}")
        if self.resolution < 100:
            raise GuardError("grid resolution must be at least 100")


@dataclass(frozen=True)
class GridResult:
    allocation: np.ndarray
    objective: float
    evaluated: int


def _objective_rows(u, alpha, p):
    top = u.max(axis=1, keepdims=True)
    fp = top[:, 0] * np.sum((u / top) ** p, axis=1) ** (1.0 / p)
    return alpha * fp + (1.0 - alpha) * u.min(axis=1)


def grid_optimum(scenario, resolution: int = 2000, alpha: Optional[float] = None,
                 chunk: int = 1 << 18) -> GridResult:
    """Best objective over a uniform grid of feasible allocations.

    Every user but the last ranges over ``resolution`` evenly spaced points
    of its bounds.  The last user then takes all remaining bandwidth up to
    its upper bound; since the objective is non-decreasing in each
    coordinate this is at least as good as any grid point for that user.
    Combinations leaving the last user below its lower bound are rejected.
    The result is a feasible allocation, so its value never exceeds the
    true optimum.
    """
    spec = GridOracleSpec(scenario, resolution)
    sc = spec.scenario
    alpha = sc.alpha if alpha is None else alpha
    lo, hi, B = sc.lower, sc.upper, sc.total_bandwidth
    n = sc.n_users
    axes = [np.linspace(lo[i], hi[i], resolution) for i in range(n - 1)]
    if n == 1:
        x = np.array([min(hi[0], B)])
        return GridResult(x, feo_objective(x, sc, alpha).f_total, 1)

    # utilities of the gridded users come from per-axis lookup tables
    tables = [sc.utilities(np.column_stack([ax if j == i else np.full(resolution, lo[j])
                                            for j in range(n)]))[:, i]
              for i, ax in enumerate(axes)]
    last_user = sc.users[-1]
    idx = np.indices((resolution,) * (n - 1)).reshape(n - 1, -1)
    best_val, best_x = -np.inf, None
    evaluated = 0
    for start in range(0, idx.shape[1], chunk):
        cols = idx[:, start:start + chunk]
        head = np.column_stack([axes[i][cols[i]] for i in range(n - 1)])
        last = np.minimum(hi[-1], B - head.sum(axis=1))
        ok = last >= lo[-1]
        if not ok.any():
            continue
        u = np.column_stack([tables[i][cols[i][ok]] for i in range(n - 1)]
                            + [utility(last[ok], last_user)])
        vals = _objective_rows(u, alpha, sc.p)
        evaluated += len(vals)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_x = np.append(head[ok][k], last[ok][k])
    if best_x is None:
        raise InfeasibleError("no grid point satisfies the bandwidth constraint")
    return GridResult(best_x, best_val, evaluated)


@dataclass(frozen=True)
class EnumerationResult:
    choice: tuple
    profit: float
    total_demand: float


def mckp_enumerate(inst: MckpInstance) -> EnumerationResult:
    """Exact knapsack optimum by trying every combination.

    Ties keep the lexicographically first choice vector.
    """
    sizes = [d.size for d in inst.demands]
    count = int(np.prod(sizes, dtype=float))
    if count > MAX_COMBINATIONS:
        raise GuardError(f"{count} combinations exceed the limit of {MAX_COMBINATIONS}")
    idx = np.indices(sizes).reshape(len(sizes), -1)
    weight = np.zeros(idx.shape[1])
    profit = np.zeros(idx.shape[1])
    for i, (d, q) in enumerate(zip(inst.demands, inst.profits)):
        weight += d[idx[i]]
        profit += q[idx[i]]
    ok = np.nonzero(weight <= inst.capacity)[0]
    if ok.size == 0:
        raise InfeasibleError("no combination fits the capacity")
    k = ok[int(np.argmax(profit[ok]))]
    return EnumerationResult(tuple(int(c) for c in idx[:, k]), float(profit[k]),
                             float(weight[k]))


def random_small_scenario(rng, n_users=None, alpha=None, p=None, delta=None):
    """A random scenario small enough for :func:`grid_optimum`.

    Rates ``tau`` and ``nu`` are uniform on [0.5, 5] and every user has
    utility at least one at its lower bound.
    """
    from .model import Scenario, UserModel

    n = int(rng.integers(1, 4)) if n_users is None else n_users
    users = []
    while len(users) < n:
        lower = float(rng.uniform(1.0, 3.0))
        user = UserModel(tau=float(rng.uniform(0.5, 5.0)), nu=float(rng.uniform(0.5, 5.0)),
                         t_pri=float(rng.uniform(0.25, 1.0)), lower=lower,
                         upper=lower + float(rng.uniform(2.0, 10.0)))
        if utility(user.lower, user) >= 1.0:
            users.append(user)
    lo = sum(u.lower for u in users)
    hi = sum(u.upper for u in users)
    B = lo + float(rng.uniform(0.2, 0.8)) * (hi - lo)
    return Scenario(users, B,
                    alpha=float(rng.choice([0.0, 0.5, 1.0])) if alpha is None else alpha,
                    p=int(rng.choice([1, 2])) if p is None else p,
                    delta=float(rng.choice([0.3, 0.6])) if delta is None else delta)


def random_mckp_instance(rng, max_classes=3, max_items=4):
    """A random knapsack instance with at least one feasible choice."""
    n = int(rng.integers(1, max_classes + 1))
    demands = [rng.uniform(0.1, 5.0, int(rng.integers(1, max_items + 1))) for _ in range(n)]
    profits = [rng.uniform(0.0, 10.0, d.size) for d in demands]
    lo = sum(float(d.min()) for d in demands)
    hi = sum(float(d.max()) for d in demands)
    return MckpInstance(demands, profits, lo + float(rng.uniform(0.0, 1.1)) * (hi - lo))
