"""Multiple-choice knapsack: LP bound, profit scaling and the min-weight DP.

One demand must be picked from every class; the total demand may not
exceed the capacity.  The DP runs over scaled integer profits and stores,
for each reachable profit, the least total demand achieving it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ConfigurationError, InfeasibleError


class PhiInfeasible(InfeasibleError):
    """Some class has no demand reaching the required fairness level."""


@dataclass(frozen=True)
class MckpInstance:
    demands: List[np.ndarray]
    profits: List[np.ndarray]
    capacity: float
    phi: Optional[float] = None

    def __post_init__(self):
        demands = [np.asarray(d, dtype=float).reshape(-1) for d in self.demands]
        profits = [np.asarray(q, dtype=float).reshape(-1) for q in self.profits]
        if len(demands) != len(profits):
            raise ConfigurationError("demands and profits must have one entry per class")
        if not demands:
            raise ConfigurationError("an instance needs at least one class")
        for i, (d, q) in enumerate(zip(demands, profits)):
            if d.shape != q.shape:
                raise ConfigurationError(f"class {i}: demand/profit length mismatch")
            if d.size == 0:
                raise PhiInfeasible(f"class {i} has no admissible demand")
            if np.any(d < 0) or np.any(q < 0):
                raise ConfigurationError(f"class {i}: demands and profits must be >= 0")
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "profits", profits)

    @classmethod
    def from_demand_sets(cls, sets, capacity, phi=None):
        return cls([s.demands for s in sets], [s.profits for s in sets], capacity, phi)

    @property
    def n_classes(self):
        return len(self.demands)

    def min_total_demand(self):
        return float(sum(d.min() for d in self.demands))


@dataclass(frozen=True)
class ScaledInstance:
    theta: float
    scaled_profits: List[np.ndarray]
    n_prime: int


@dataclass
class DpResult:
    choice: np.ndarray
    demands: np.ndarray
    scaled_profit: int
    total_demand: float
    profit: float
    zeta: np.ndarray = field(repr=False)
    sentinel: float = 0.0


def _upper_hull(d, q):
    """Indices of the LP-undominated items of one class, lightest first."""
    order = np.lexsort((-q, d))
    hull = []
    for k in order:
        if hull and d[k] == d[hull[-1]]:
            continue
        if hull and q[k] <= q[hull[-1]]:
            continue
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or below the segment a -> k
            if (q[b] - q[a]) * (d[k] - d[a]) <= (q[k] - q[a]) * (d[b] - d[a]):
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def prune_unfit(inst: MckpInstance) -> MckpInstance:
    """Drop demands that exceed the capacity left by the other classes' lightest ones.

    No feasible choice uses such a demand, so the integer optimum is unchanged,
    while the LP value of the pruned instance is at most twice that optimum.
    """
    mins = [float(d.min()) for d in inst.demands]
    total = sum(mins)
    if total > inst.capacity:
        raise InfeasibleError(
            f"the lightest demands sum to {total} > capacity {inst.capacity}")
    demands, profits = [], []
    for i, (d, q) in enumerate(zip(inst.demands, inst.profits)):
        keep = d + (total - mins[i]) <= inst.capacity
        keep[np.argmin(d)] = True
        demands.append(d[keep])
        profits.append(q[keep])
    return MckpInstance(demands, profits, inst.capacity, inst.phi)


def lp_relaxation_value(inst: MckpInstance, prune: bool = False) -> float:
    """Optimal value of the continuous relaxation of the instance.

    Starts every class at its lightest demand and applies the incremental
    upgrades along each class's upper convex hull in order of decreasing
    profit-per-demand, splitting the last one to fill the capacity.

    Parameters
    ----------
    inst : MckpInstance
    prune : bool
        Relax the instance returned by :func:`prune_unfit` instead, which
        gives a tighter bound on the same integer optimum.
    """
    base_d = inst.min_total_demand()
    if base_d > inst.capacity:
        raise InfeasibleError(
            f"the lightest demands sum to {base_d} > capacity {inst.capacity}")
    if prune:
        inst = prune_unfit(inst)
    value = 0.0
    upgrades = []
    for d, q in zip(inst.demands, inst.profits):
        hull = _upper_hull(d, q)
        value += q[hull[0]]
        for a, b in zip(hull, hull[1:]):
            dd, dq = d[b] - d[a], q[b] - q[a]
            upgrades.append((dq / dd, dd, dq))
    upgrades.sort(key=lambda t: -t[0])
    room = inst.capacity - base_d
    for ratio, dd, dq in upgrades:
        if room <= 0:
            break
        if dd <= room:
            value += dq
            room -= dd
        else:
            value += ratio * room
            room = 0.0
    return value


def scale(inst: MckpInstance, epsilon: float, Z: float, theta_mode: str = "lp") -> ScaledInstance:
    """Floor profits to multiples of ``theta``.

    ``theta_mode="lp"`` uses ``theta = eps * Z / N`` with a profit axis of
    ``ceil(N / eps)``.  ``"safe"`` halves theta and doubles the axis; with
    ``Z`` taken from the pruned relaxation this bounds the rounding loss by
    ``eps`` times the integer optimum.  ``"max"`` uses ``eps * max profit / N``
    and widens the axis to ``ceil(N**2 / eps)``.
    """
    n = inst.n_classes
    if theta_mode in ("lp", "safe"):
        if not Z > 0:
            raise ConfigurationError("the LP bound Z must be positive")
        k = 1 if theta_mode == "lp" else 2
        theta = epsilon * Z / (k * n)
        n_prime = math.ceil(k * n / epsilon)
    elif theta_mode == "max":
        top = max(float(q.max()) for q in inst.profits)
        if not top > 0:
            raise ConfigurationError("all profits are zero")
        theta = epsilon * top / n
        n_prime = math.ceil(n * n / epsilon)
    else:
        raise ConfigurationError(f"unknown theta_mode {theta_mode!r}")
    scaled = [np.floor(q / theta).astype(np.int64) for q in inst.profits]
    return ScaledInstance(theta=theta, scaled_profits=scaled, n_prime=n_prime)


def dp_solve(scaled: ScaledInstance, inst: MckpInstance) -> DpResult:
    """Exact optimum of the scaled instance by min-demand dynamic programming.

    ``zeta[i, a]`` is the least total demand of a choice over the first
    ``i`` classes with scaled profit exactly ``a``; unreachable entries hold
    the sentinel ``capacity + 1``.  Ties prefer the smaller demand of the
    current class, then the lower item index.
    """
    B = float(inst.capacity)
    sentinel = B + 1.0 if B + 1.0 > B else math.inf
    n = inst.n_classes
    top = int(sum(int(s.max()) for s in scaled.scaled_profits))
    width = min(scaled.n_prime, top) + 1

    zeta = np.full((n + 1, width), sentinel)
    zeta[0, 0] = 0.0
    choice = np.full((n + 1, width), -1, dtype=np.int32)
    cols = np.arange(width)
    for i in range(n):
        d = inst.demands[i]
        # lightest demand first so argmin's first hit implements the tie rule
        order = np.lexsort((np.arange(d.size), d))
        shift = scaled.scaled_profits[i][order][:, None]
        src = cols[None, :] - shift
        cand = np.where(src >= 0, zeta[i][np.maximum(src, 0)] + d[order][:, None], sentinel)
        cand = np.minimum(cand, sentinel)
        best = np.argmin(cand, axis=0)
        row = cand[best, cols]
        zeta[i + 1] = row
        choice[i + 1] = np.where(row < sentinel, order[best], -1)

    ok = np.nonzero(zeta[n] <= B)[0]
    if ok.size == 0:
        raise InfeasibleError("no choice of demands fits the capacity")
    t = int(ok[-1])
    picks = np.empty(n, dtype=np.int64)
    a = t
    for i in range(n, 0, -1):
        k = int(choice[i, a])
        picks[i - 1] = k
        a -= int(scaled.scaled_profits[i - 1][k])
    chosen = np.array([inst.demands[i][picks[i]] for i in range(n)])
    total = 0.0
    for v in chosen:
        total += v
    profit = float(sum(inst.profits[i][picks[i]] for i in range(n)))
    return DpResult(choice=picks, demands=chosen, scaled_profit=t, total_demand=float(total),
                    profit=profit, zeta=zeta, sentinel=sentinel)


def solve_mckp(inst: MckpInstance, epsilon: float, theta_mode: str = "safe") -> DpResult:
    """LP bound, scaling and DP in one call.

    The returned profit is at least ``(1 - epsilon)`` times the integer
    optimum in the default ``"safe"`` mode.
    """
    Z = lp_relaxation_value(inst, prune=theta_mode == "safe")
    if Z <= 0:
        # every profit is zero: the lightest choice is optimal
        picks = np.array([int(np.argmin(d)) for d in inst.demands])
        chosen = np.array([d[k] for d, k in zip(inst.demands, picks)])
        return DpResult(choice=picks, demands=chosen, scaled_profit=0,
                        total_demand=float(chosen.sum()), profit=0.0,
                        zeta=np.zeros((0, 0)))
    return dp_solve(scale(inst, epsilon, Z, theta_mode), inst)
