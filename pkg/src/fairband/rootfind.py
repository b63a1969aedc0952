"""Bisection for monotone increasing scalar functions.

The tolerance is on the argument: the returned point lies within
``tol_abs`` of the true root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BracketError, ConfigurationError, IterationError


def required_iterations(lo, hi, tol_abs):
    """Halvings needed to shrink ``[lo, hi]`` to width ``tol_abs``."""
    return max(0, math.ceil(math.log2((hi - lo) / tol_abs)))


@dataclass(frozen=True)
class BisectionSpec:
    lo: float
    hi: float
    tol_abs: float
    max_iter: Optional[int] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ConfigurationError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol_abs > 0:
            raise ConfigurationError("tol_abs must be positive")
        if self.max_iter is None:
            object.__setattr__(self, "max_iter",
                               required_iterations(self.lo, self.hi, self.tol_abs))

    @property
    def iterations_needed(self):
        return required_iterations(self.lo, self.hi, self.tol_abs)


def bisect_increasing(h: Callable[[float], float], target: float, spec: BisectionSpec,
                      full_output: bool = False):
    """Solve ``h(x) = target`` for strictly increasing ``h`` on ``[lo, hi]``.

    Parameters
    ----------
    h : callable
        Strictly increasing function of one float.
    target : float
        Value to invert; must satisfy ``h(lo) <= target <= h(hi)``.
    spec : BisectionSpec
        Bracket, argument tolerance and iteration cap.
    full_output : bool
        If true, also return the number of halvings performed.

    Returns
    -------
    x : float
        Midpoint of the final bracket, within ``tol_abs / 2`` of the root.
    iterations : int
        Only when ``full_output`` is set.
    """
    lo, hi = float(spec.lo), float(spec.hi)
    h_lo, h_hi = h(lo), h(hi)
    if not h_lo < h_hi:
        raise BracketError(f"h is flat or decreasing on [{lo}, {hi}]")
    if not h_lo <= target <= h_hi:
        raise BracketError(f"target {target!r} outside [{h_lo!r}, {h_hi!r}]")

    def done(x, k):
        return (x, k) if full_output else x

    if target == h_lo:
        return done(lo, 0)
    if target == h_hi:
        return done(hi, 0)

    k = 0
    while hi - lo > spec.tol_abs:
        if k >= spec.max_iter:
            raise IterationError(
                f"{spec.max_iter} iterations left a bracket of width {hi - lo!r} "
                f"> tol {spec.tol_abs!r}")
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket is down to adjacent floats
            break
        k += 1
        h_mid = h(mid)
        if h_mid == target:
            return done(mid, k)
        if h_mid < target:
            lo = mid
        else:
            hi = mid
    return done(0.5 * (lo + hi), k)


def bisect_increasing_many(h: Callable, targets, spec: BisectionSpec):
    """Vectorized :func:`bisect_increasing` for many targets on one bracket.

    ``h`` must accept and return arrays.  Every target is halved in lock
    step, so all roots are located to the same tolerance.

    Returns
    -------
    x : ndarray
        Approximate roots, each within ``tol_abs / 2`` of the true one.
    iterations : int
        Number of lock-step halvings.
    """
    targets = np.asarray(targets, dtype=float)
    lo0, hi0 = float(spec.lo), float(spec.hi)
    h_lo, h_hi = float(h(np.array(lo0))), float(h(np.array(hi0)))
    if not h_lo < h_hi:
        raise BracketError(f"h is flat or decreasing on [{lo0}, {hi0}]")
    if targets.size and not (np.all(targets >= h_lo) and np.all(targets <= h_hi)):
        raise BracketError(f"targets outside [{h_lo!r}, {h_hi!r}]")
    lo = np.full(targets.shape, lo0)
    hi = np.full(targets.shape, hi0)
    lo[targets == h_hi] = hi0
    hi[targets == h_lo] = lo0
    k = 0
    while targets.size and np.any(hi - lo > spec.tol_abs):
        if k >= spec.max_iter:
            raise IterationError(
                f"{spec.max_iter} iterations left a bracket of width "
                f"{float(np.max(hi - lo))!r} > tol {spec.tol_abs!r}")
        mid = 0.5 * (lo + hi)
        live = (mid > lo) & (mid < hi)
        if not live.any():
            break
        k += 1
        h_mid = h(mid)
        hit = h_mid == targets
        up = live & ((h_mid < targets) | hit)
        down = live & ((h_mid > targets) | hit)
        lo = np.where(up, mid, lo)
        hi = np.where(down, mid, hi)
    return 0.5 * (lo + hi), k
