"""Per-user rate and utility models for joint sensing/communication users.

Each user splits nothing internally: the bandwidth ``x`` it receives feeds
both its radar estimation rate and its communication rate, and its utility
is the sum of the two (bits/s).  All rates use base-2 logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, InfeasibleScenarioError

LN2 = math.log(2.0)

__all__ = [
    "PhysicalParams",
    "UserModel",
    "Scenario",
    "comm_rate",
    "est_rate",
    "utility",
    "utility_derivative",
    "derive_user",
    "dbm_to_watts",
    "db_to_linear",
    "sample_physical_users",
]


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Link-budget parameters of one user; defaults follow the reference setup.

    Powers are in dBm (communication) and W (radar), gains in dB/dBi,
    distances in metres.  The two channel gains are squared magnitudes.
    """

    comm_tx_power_dBm: float = 43.0
    comm_antenna_gain_dB: float = 19.0
    bs_antenna_gain_dB: float = 19.0
    comm_distance_m: float = 1e2
    radar_tx_power_W: float = 1e5
    radar_antenna_gain_dBi: float = 30.0
    target_distance_m: float = 5e3
    target_cross_section_m2: float = 10.0
    sigma_proc_m: float = 1e2
    carrier_freq_Hz: float = 1e8
    boltzmann_J_per_K: float = 1.38e-23
    temperature_K: float = 1e3
    pulse_repetition_interval_s: float = 1e-5
    comm_channel_gain: float = 1.0
    radar_channel_gain: float = 1.0

    def __post_init__(self):
        positive = (
            "comm_distance_m", "radar_tx_power_W", "target_distance_m",
            "target_cross_section_m2", "sigma_proc_m", "carrier_freq_Hz",
            "boltzmann_J_per_K", "temperature_K", "pulse_repetition_interval_s",
            "comm_channel_gain", "radar_channel_gain",
        )
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value!r}")
        # dB-valued fields may be negative but must be finite
        for name in ("comm_tx_power_dBm", "comm_antenna_gain_dB",
                     "bs_antenna_gain_dB", "radar_antenna_gain_dBi"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    def comm_received_power(self):
        """Received communication power at the base station (W)."""
        p = dbm_to_watts(self.comm_tx_power_dBm)
        g = db_to_linear(self.comm_antenna_gain_dB) * db_to_linear(self.bs_antenna_gain_dB)
        return p * g / ((4 * math.pi) ** 2 * self.comm_distance_m ** 2
                        * self.carrier_freq_Hz ** 2)

    def radar_received_power(self):
        """Echo power at the radar receiver (W)."""
        g = db_to_linear(self.radar_antenna_gain_dBi)
        return (self.radar_tx_power_W * g ** 2 * self.target_cross_section_m2
                / ((4 * math.pi) ** 3 * self.target_distance_m ** 4
                   * self.carrier_freq_Hz ** 2))

    def kappa(self):
        gamma2 = (2 * math.pi) ** 2 / 12.0
        return 8 * math.pi ** 2 * self.sigma_proc_m ** 2 * gamma2


@dataclass(frozen=True)
class UserModel:
    """Utility parameters of one user.

    ``tau`` scales the communication SNR, ``nu`` the radar SNR per Hz.
    ``lower``/``upper`` bound the bandwidth the user may receive.
    """

    tau: float
    nu: float
    t_pri: float
    lower: float
    upper: float

    def __post_init__(self):
        for name in ("tau", "nu", "t_pri"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value!r}")
        if not (0 < self.lower < self.upper and math.isfinite(self.upper)):
            raise ConfigurationError(
                f"bounds must satisfy 0 < lower < upper, got ({self.lower}, {self.upper})")

    def __call__(self, x):
        return utility(x, self)

    @property
    def is_normalized(self):
        """True when the utility at the lower bound is at least one."""
        return utility(self.lower, self) >= 1.0


def _check_nonnegative(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("bandwidth must be non-negative")
    return arr


def _x_log1p_ratio(x, tau):
    """``x * ln(1 + tau/x)`` with the zero limit at ``x = 0``."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        safe = np.where(x > 0, x, 1.0)
        ratio = tau / safe
        # for tiny x the ratio overflows; ln(tau) - ln(x) is then exact enough
        log_term = np.where(np.isfinite(ratio), np.log1p(ratio), np.log(tau) - np.log(safe))
        return np.where(x > 0, x * log_term, 0.0)


def comm_rate(x, user):
    """Shannon rate ``x * log2(1 + tau/x)``; zero at ``x = 0``."""
    val = _x_log1p_ratio(_check_nonnegative(x), user.tau) / LN2
    return float(val) if val.ndim == 0 else val


def est_rate(x, user):
    """Radar estimation rate ``log2(1 + nu*x) / (2*t_pri)``."""
    arr = _check_nonnegative(x)
    val = np.log1p(user.nu * arr) / (2.0 * user.t_pri * LN2)
    return float(val) if val.ndim == 0 else val


def utility(x, user):
    return est_rate(x, user) + comm_rate(x, user)


def utility_derivative(x, user):
    """Closed-form derivative of :func:`utility` for ``x > 0``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("derivative is only defined for positive bandwidth")
    tau, nu = user.tau, user.nu
    df = nu / (2.0 * user.t_pri * (1.0 + nu * arr) * LN2)
    dg = np.log1p(tau / arr) / LN2 - tau / ((tau + arr) * LN2)
    val = df + dg
    return float(val) if val.ndim == 0 else val


def derive_user(phys: PhysicalParams, lower: float, upper: float) -> UserModel:
    """Build a :class:`UserModel` from link-budget parameters."""
    noise = phys.boltzmann_J_per_K * phys.temperature_K
    tau = phys.comm_channel_gain * phys.comm_received_power() / noise
    nu = phys.kappa() * phys.radar_channel_gain * phys.radar_received_power() / noise
    if not (tau > 0 and nu > 0 and math.isfinite(tau) and math.isfinite(nu)):
        raise ConfigurationError(f"derived tau={tau!r}, nu={nu!r} must be positive")
    return UserModel(tau=tau, nu=nu, t_pri=phys.pulse_repetition_interval_s,
                     lower=lower, upper=upper)


def sample_physical_users(n, seed, base=None, lower=1e4, upper=1e7):
    """Draw ``n`` users whose channel gains are uniform on (0.5, 1)."""
    base = PhysicalParams() if base is None else base
    rng = np.random.default_rng(seed)
    gains = rng.uniform(0.5, 1.0, size=(n, 2))
    return [
        derive_user(replace(base, comm_channel_gain=float(gc), radar_channel_gain=float(gr)),
                    lower, upper)
        for gc, gr in gains
    ]


@dataclass(frozen=True)
class Scenario:
    """A full allocation problem: users, total bandwidth and objective weights.

    ``delta`` is the target relative accuracy of the approximation scheme;
    the internal grid ratio is ``epsilon = delta / 6``.
    """

    users: Sequence[UserModel]
    total_bandwidth: float
    alpha: float = 0.5
    p: int = 2
    delta: float = 0.6
    _arrays: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        if len(self.users) < 1:
            raise ConfigurationError("a scenario needs at least one user")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if int(self.p) != self.p or self.p < 1:
            raise ConfigurationError(f"p must be an integer >= 1, got {self.p}")
        object.__setattr__(self, "p", int(self.p))
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must lie in (0, 1), got {self.delta}")
        lo = sum(u.lower for u in self.users)
        hi = sum(u.upper for u in self.users)
        if lo > self.total_bandwidth:
            raise InfeasibleScenarioError(
                f"lower bounds sum to {lo} which exceeds the bandwidth {self.total_bandwidth}")
        if hi <= self.total_bandwidth:
            raise ConfigurationError(
                f"upper bounds sum to {hi} which does not exceed the bandwidth "
                f"{self.total_bandwidth}; the allocation is trivial")
        arrays = {
            name: np.array([getattr(u, name) for u in self.users], dtype=float)
            for name in ("tau", "nu", "t_pri", "lower", "upper")
        }
        object.__setattr__(self, "_arrays", arrays)

    @property
    def n_users(self):
        return len(self.users)

    @property
    def epsilon(self):
        return self.delta / 6.0

    @property
    def lower(self):
        return self._arrays["lower"]

    @property
    def upper(self):
        return self._arrays["upper"]

    def utilities(self, x):
        """Per-user utilities ``u_i(x_i)`` for an allocation vector."""
        a = self._arrays
        x = _check_nonnegative(x)
        if x.shape[-1] != self.n_users:
            raise DomainError(f"allocation has {x.shape[-1]} entries, expected {self.n_users}")
        g = _x_log1p_ratio(x, a["tau"]) / LN2
        f = np.log1p(a["nu"] * x) / (2.0 * a["t_pri"] * LN2)
        return f + g

    def with_(self, **changes):
        return replace(self, **changes)
