"""Efficiency, fairness and trade-off metrics for an allocation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class ObjectiveBreakdown:
    f_p: float
    f_min: float
    f_total: float
    per_user_utilities: np.ndarray


def lp_norm(values, p):
    values = np.asarray(values, dtype=float)
    # factor out the max so large utilities raised to p stay finite
    top = float(np.max(values)) if values.size else 0.0
    if top <= 0:
        return 0.0
    return top * float(np.sum((values / top) ** p)) ** (1.0 / p)


def f_p_norm(x, scenario):
    """Efficiency: the l_p norm of the per-user utility vector."""
    return lp_norm(scenario.utilities(x), scenario.p)


def f_min(x, scenario):
    """Fairness: the utility of the worst-off user."""
    u = scenario.utilities(x)
    if u.size == 0:
        raise DomainError("empty allocation")
    return float(np.min(u))


def feo_objective(x, scenario, alpha=None):
    """Weighted objective ``alpha * F_p + (1 - alpha) * F_min``.

    ``alpha`` defaults to the scenario's own weight.
    """
    alpha = scenario.alpha if alpha is None else alpha
    u = scenario.utilities(x)
    if u.size == 0:
        raise DomainError("empty allocation")
    fp = lp_norm(u, scenario.p)
    fm = float(np.min(u))
    return ObjectiveBreakdown(f_p=fp, f_min=fm, f_total=alpha * fp + (1.0 - alpha) * fm,
                              per_user_utilities=u)


def is_feasible(x, scenario, rtol=1e-12):
    """Capacity and per-user bound check with a small relative slack."""
    x = np.asarray(x, dtype=float)
    if x.shape != (scenario.n_users,):
        return False
    slack = rtol * max(1.0, scenario.total_bandwidth)
    return bool(
        np.sum(x) <= scenario.total_bandwidth + slack
        and np.all(x >= scenario.lower - rtol * np.maximum(1.0, scenario.lower))
        and np.all(x <= scenario.upper + rtol * np.maximum(1.0, scenario.upper))
    )


def price_of_fairness(eff_at_alpha1, eff_at_alpha):
    """Relative efficiency lost against the pure-efficiency allocation."""
    if not eff_at_alpha1 > 0:
        raise ConfigurationError("reference efficiency must be positive")
    return (eff_at_alpha1 - eff_at_alpha) / eff_at_alpha1


def price_of_efficiency(fair_at_alpha0, fair_at_alpha):
    """Relative loss of the minimum utility against the max-min allocation."""
    if not fair_at_alpha0 > 0:
        raise ConfigurationError("reference fairness must be positive")
    return (fair_at_alpha0 - fair_at_alpha) / fair_at_alpha0
