"""Discretize each user's bandwidth range into candidate demands.

Utility levels grow geometrically by ``1 + epsilon`` starting from
``epsilon * L / N**(1/p)``.  Each level is inverted by bisection to an
argument tolerance chosen from a Lipschitz bound on the utility, so the
utility at every approximate root is within a factor ``epsilon`` of its
level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .model import utility
from .objective import lp_norm
from .rootfind import BisectionSpec, bisect_increasing_many


@dataclass(frozen=True)
class BreakpointSet:
    user_index: int
    levels: np.ndarray
    roots: np.ndarray
    n_levels: int
    tolerance: float
    p: int
    evaluations: int = 0

    @property
    def K(self):
        return self.n_levels


@dataclass(frozen=True)
class DemandSet:
    user_index: int
    demands: np.ndarray
    utilities: np.ndarray
    profits: np.ndarray

    def __len__(self):
        return len(self.demands)

    def above(self, phi):
        """Sub-set of demands whose utility is at least ``phi``."""
        k = int(np.searchsorted(self.utilities, phi, side="left"))
        return DemandSet(self.user_index, self.demands[k:], self.utilities[k:],
                         self.profits[k:])


def lower_bound_L(scenario, strict=True):
    """The l_p norm of the users' utilities at their lower bounds.

    With ``strict`` set, every such utility must be at least one.
    """
    lows = np.array([utility(u.lower, u) for u in scenario.users])
    if strict and np.any(lows < 1.0):
        bad = int(np.argmin(lows))
        raise ConfigurationError(
            f"user {bad} has utility {lows[bad]!r} < 1 at its lower bound")
    return lp_norm(lows, scenario.p)


def level_base(epsilon, L, N, p):
    return epsilon * L / N ** (1.0 / p)


def level_count(user, epsilon, L, N, p):
    """Index of the highest utility level, ``ceil(log_{1+eps}(u(upper)/base))``."""
    ratio = utility(user.upper, user) / level_base(epsilon, L, N, p)
    return max(0, math.ceil(math.log(ratio) / math.log1p(epsilon)))


def slope_constant(user, epsilon, L=None, N=None, p=None):
    """Constant bounding the communication slope away from zero bandwidth.

    ``max(2, 2 log2(tau/eps))``; when ``L < N**(1/p)`` the level base is
    below ``epsilon`` and the bound is taken against ``N**(1/p)/L`` as well.
    """
    c = max(2.0, 2.0 * math.log2(user.tau / epsilon))
    if L is not None:
        c = max(c, 2.0 * math.log2(N ** (1.0 / p) * user.tau / (epsilon * L)))
    return c


def lipschitz_tolerance(user, epsilon, L, N, p, c=None):
    """Bisection tolerance that keeps utility errors within ``epsilon`` of each level."""
    if not 0 < epsilon < 1:
        raise ConfigurationError("epsilon must lie in (0, 1)")
    if c is None:
        c = slope_constant(user, epsilon, L, N, p)
    root_n = N ** (1.0 / p)
    slope = user.nu / (2.0 * user.t_pri) + user.tau * c * root_n / (epsilon * L)
    return (epsilon ** 2 * L / root_n) / slope


def bracket_floor(user, epsilon, L, N, p, c=None):
    """A positive bandwidth whose utility lies below the first level."""
    if c is None:
        c = slope_constant(user, epsilon, L, N, p)
    base = level_base(epsilon, L, N, p)
    y_comm = base / (2.0 * c)
    y_radar = math.expm1(user.t_pri * base * math.log(2.0)) / user.nu
    y0 = 0.5 * min(y_comm, y_radar, user.upper)
    while utility(y0, user) >= base and y0 > 0:
        y0 *= 0.5
    if not y0 > 0:
        raise ConfigurationError("could not bracket the first utility level")
    return y0


def breakpoints(user, epsilon, L, N, p, user_index=0):
    """Approximate roots of ``u(x) = base * (1+eps)^j`` for ``j = 0..K``.

    Levels above the utility at the upper bound have no root and are
    skipped; ``levels`` keeps all ``K + 1`` targets, ``roots`` only the
    attainable ones (a prefix of ``levels``).
    """
    K = level_count(user, epsilon, L, N, p)
    base = level_base(epsilon, L, N, p)
    levels = base * np.exp(np.arange(K + 1) * math.log1p(epsilon))
    tol = lipschitz_tolerance(user, epsilon, L, N, p)
    # below a few ulps the bracket cannot shrink further
    tol = max(tol, 4.0 * math.ulp(user.upper))
    lo = bracket_floor(user, epsilon, L, N, p)
    attainable = levels[levels <= utility(user.upper, user)]
    roots, k = bisect_increasing_many(lambda x: utility(x, user), attainable,
                                      BisectionSpec(lo, user.upper, tol))
    evals = attainable.size * k + 2
    return BreakpointSet(user_index=user_index, levels=levels, roots=roots,
                         n_levels=K, tolerance=tol, p=p, evaluations=evals)


def demand_set(breaks, user, phi):
    """Candidate demands of one user that reach utility ``phi``.

    The roots together with both bounds, restricted to ``[lower, upper]``.
    Roots within the bisection tolerance of a bound or of a larger root are
    dropped, so both bounds always survive the merge.
    """
    tol = breaks.tolerance
    roots = np.unique(breaks.roots)
    roots = roots[(roots > user.lower + tol) & (roots < user.upper - tol)]
    if roots.size > 1:
        roots = roots[np.append(np.diff(roots) > tol, True)]
    cand = np.concatenate([[user.lower], roots, [user.upper]])
    utils = utility(cand, user)
    mask = utils >= phi
    cand, utils = cand[mask], utils[mask]
    return DemandSet(user_index=breaks.user_index, demands=cand, utilities=utils,
                     profits=utils ** breaks.p)
