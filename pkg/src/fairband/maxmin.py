"""Max-min fair value and the geometric grid of fairness levels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InfeasibleError
from .model import utility
from .rootfind import BisectionSpec, bisect_increasing


@dataclass(frozen=True)
class PhiGrid:
    phi_bar: float
    points: np.ndarray
    epsilon: float
    start: float = 1.0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points.tolist())


def phi_lower(scenario):
    """Smallest utility any feasible allocation can give its worst user."""
    return min(utility(u.lower, u) for u in scenario.users)


def inverse_utility(user, phi, tol):
    """Bandwidth at which ``user`` reaches utility ``phi`` (within ``tol``)."""
    return bisect_increasing(lambda x: utility(x, user), phi,
                             BisectionSpec(0.0, user.upper, tol))


def required_bandwidth(user, phi, tol):
    """Upper estimate of the least bandwidth in the user's range giving ``phi``.

    Returns ``inf`` when even the upper bound falls short of ``phi``.
    """
    if phi <= utility(user.lower, user):
        return user.lower
    if phi > utility(user.upper, user):
        return math.inf
    x = inverse_utility(user, phi, tol)
    # bisection returns the bracket midpoint, so x + tol/2 never undershoots
    return min(user.upper, max(user.lower, x + tol))


def _bandwidth_tol(scenario):
    span = min(u.upper - u.lower for u in scenario.users)
    return max(span * 1e-12, 1e-300)


def is_phi_feasible(scenario, phi, tol=None):
    """Whether every user can reach ``phi`` within the total bandwidth."""
    tol = _bandwidth_tol(scenario) if tol is None else tol
    total = 0.0
    for user in scenario.users:
        total += required_bandwidth(user, phi, tol)
        if total > scenario.total_bandwidth:
            return False
    return True


def max_min_value(scenario, epsilon=None):
    """Approximate the max-min fair utility from below.

    Bisects over the fairness level ``phi`` using the monotone feasibility
    test of :func:`is_phi_feasible`.  The result ``phi_bar`` satisfies
    ``(1 - epsilon) * phi_star <= phi_bar <= phi_star``.

    Parameters
    ----------
    scenario : Scenario
    epsilon : float, optional
        Relative accuracy; defaults to ``scenario.epsilon``.
    """
    epsilon = scenario.epsilon if epsilon is None else epsilon
    if not 0 < epsilon < 1:
        raise ConfigurationError("epsilon must lie in (0, 1)")
    if sum(u.lower for u in scenario.users) > scenario.total_bandwidth:
        raise InfeasibleError("lower bounds exceed the total bandwidth")
    tol = _bandwidth_tol(scenario)
    lo = phi_lower(scenario)
    hi = min(utility(u.upper, u) for u in scenario.users)
    if is_phi_feasible(scenario, hi, tol):
        return hi
    # absolute tolerance on the value axis; lo <= phi_star keeps it relative
    value_tol = epsilon * lo
    while hi - lo > value_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if is_phi_feasible(scenario, mid, tol):
            lo = mid
        else:
            hi = mid
    return lo


def build_phi_grid(phi_bar, epsilon, start=1.0):
    """Geometric fairness levels ``start * (1+eps)^h`` up to ``phi_bar``.

    ``phi_bar`` itself is appended when it is not already the last point.
    """
    if not 0 < epsilon:
        raise ConfigurationError("epsilon must be positive")
    if not start > 0:
        raise ConfigurationError("grid start must be positive")
    if phi_bar < start:
        raise ConfigurationError(f"phi_bar={phi_bar!r} lies below the grid start {start!r}")
    step = math.log1p(epsilon)
    n_steps = math.floor(math.log(phi_bar / start) / step)
    # guard the floor against rounding on either side
    while n_steps > 0 and start * math.exp(n_steps * step) > phi_bar:
        n_steps -= 1
    while start * math.exp((n_steps + 1) * step) <= phi_bar:
        n_steps += 1
    points = start * np.exp(np.arange(n_steps + 1) * step)
    if phi_bar > points[-1] * (1 + 1e-12):
        points = np.append(points, phi_bar)
    return PhiGrid(phi_bar=phi_bar, points=points, epsilon=epsilon, start=start)
