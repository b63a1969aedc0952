"""Reading and writing scenario files.

A scenario file is a JSON document with three sections::

    {
      "system":   {"B": 1e7, "alpha": 0.5, "p": 2, "delta": 0.6, "seed": 1, "n_users": 5},
      "defaults": {"comm_tx_power_dBm": 10.0, ..., "xi_lo": 1e4, "xi_hi": 1e7},
      "users":    [{"comm_channel_gain": 0.7}, {"tau": 2.0, "nu": 1.0, "t_pri": 0.5,
                                                 "xi_lo": 0.001, "xi_hi": 0.999}]
    }

A user entry holding ``tau`` is taken literally.  Any other entry overrides
physical parameters from ``defaults``; channel gains it does not set are
drawn uniformly from (0.5, 1) using ``system.seed``.  Without a ``users``
list, ``system.n_users`` physical users are generated from the defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError, InfeasibleScenarioError, ScenarioParseError
from .model import PhysicalParams, Scenario, UserModel, derive_user

SYSTEM_KEYS = {"B", "alpha", "p", "delta", "seed", "n_users"}
PHYSICAL_KEYS = {f.name for f in fields(PhysicalParams)}
BOUND_KEYS = {"xi_lo", "xi_hi"}
DIRECT_KEYS = {"tau", "nu", "t_pri"} | BOUND_KEYS
GAIN_KEYS = ("comm_channel_gain", "radar_channel_gain")

DEFAULT_LOWER = 1e4
DEFAULT_UPPER = 1e7


@dataclass(frozen=True)
class ScenarioDocument:
    """A parsed but not yet instantiated scenario file."""

    system: dict
    defaults: dict
    users: Optional[list]

    @property
    def seed(self):
        return self.system.get("seed")

    def build(self, n_users=None, **overrides) -> Scenario:
        """Instantiate the scenario, optionally truncating or growing the user list.

        ``overrides`` may replace ``total_bandwidth``, ``alpha``, ``p`` or ``delta``.
        """
        return _build(self, n_users, overrides)


def _number(value, path, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"expected a number, got {value!r}", field=path)
    if integer and int(value) != value:
        raise ScenarioParseError(f"expected an integer, got {value!r}", field=path)
    if not np.isfinite(value):
        raise ScenarioParseError("value must be finite", field=path)
    return int(value) if integer else float(value)


def _section(doc, name, required):
    if name not in doc:
        if required:
            raise ScenarioParseError("missing section", field=name)
        return None
    return doc[name]


def parse_scenario_text(text: str) -> ScenarioDocument:
    """Parse and validate the structure of a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ScenarioParseError("top level must be an object")
    unknown = set(doc) - {"system", "defaults", "users"}
    if unknown:
        raise ScenarioParseError("unknown section", field=sorted(unknown)[0])

    system = _section(doc, "system", True)
    if not isinstance(system, dict):
        raise ScenarioParseError("must be an object", field="system")
    for key in system:
        if key not in SYSTEM_KEYS:
            raise ScenarioParseError("unknown key", field=f"system.{key}")
    if "B" not in system:
        raise ScenarioParseError("missing key", field="system.B")
    sys_out = {}
    for key, value in system.items():
        if key == "seed" and value is None:
            sys_out[key] = None
            continue
        sys_out[key] = _number(value, f"system.{key}",
                               integer=key in ("p", "seed", "n_users"))

    defaults = _section(doc, "defaults", False) or {}
    if not isinstance(defaults, dict):
        raise ScenarioParseError("must be an object", field="defaults")
    def_out = {}
    for key, value in defaults.items():
        if key not in PHYSICAL_KEYS | BOUND_KEYS:
            raise ScenarioParseError("unknown key", field=f"defaults.{key}")
        def_out[key] = _number(value, f"defaults.{key}")

    users = _section(doc, "users", False)
    users_out = None
    if users is not None:
        if not isinstance(users, list):
            raise ScenarioParseError("must be a list", field="users")
        users_out = []
        for i, entry in enumerate(users):
            path = f"users[{i}]"
            if not isinstance(entry, dict):
                raise ScenarioParseError("must be an object", field=path)
            direct = "tau" in entry or "nu" in entry or "t_pri" in entry
            allowed = DIRECT_KEYS if direct else PHYSICAL_KEYS | BOUND_KEYS
            for key in entry:
                if key not in allowed:
                    raise ScenarioParseError("unknown key", field=f"{path}.{key}")
            if direct:
                for key in ("tau", "nu", "t_pri"):
                    if key not in entry:
                        raise ScenarioParseError("missing key", field=f"{path}.{key}")
            users_out.append({k: _number(v, f"{path}.{k}") for k, v in entry.items()})
    elif "n_users" not in sys_out:
        raise ScenarioParseError("give either a users list or system.n_users",
                                 field="system.n_users")
    return ScenarioDocument(sys_out, def_out, users_out)


def _build(doc, n_users, overrides):
    users = doc.users
    if users is None:
        users = [{}] * (doc.system["n_users"] if n_users is None else n_users)
    elif n_users is not None:
        if n_users > len(users):
            raise ConfigurationError(f"file lists {len(users)} users, {n_users} requested")
        users = users[:n_users]

    base_kwargs = {k: v for k, v in doc.defaults.items() if k in PHYSICAL_KEYS}
    try:
        base = PhysicalParams(**base_kwargs)
    except ConfigurationError as exc:
        raise ScenarioParseError(str(exc), field="defaults") from None
    lo_default = doc.defaults.get("xi_lo", DEFAULT_LOWER)
    hi_default = doc.defaults.get("xi_hi", DEFAULT_UPPER)
    rng = np.random.default_rng(doc.seed)

    models = []
    for i, entry in enumerate(users):
        path = f"users[{i}]"
        lower = entry.get("xi_lo", lo_default)
        upper = entry.get("xi_hi", hi_default)
        try:
            if "tau" in entry:
                models.append(UserModel(entry["tau"], entry["nu"], entry["t_pri"],
                                        lower, upper))
                continue
            # one gain pair per physical user keeps draws aligned with positions
            drawn = rng.uniform(0.5, 1.0, size=2)
            phys = {k: v for k, v in entry.items() if k in PHYSICAL_KEYS}
            for key, g in zip(GAIN_KEYS, drawn):
                if key not in phys and key not in base_kwargs:
                    phys[key] = float(g)
            models.append(derive_user(replace(base, **phys), lower, upper))
        except ConfigurationError as exc:
            raise ScenarioParseError(str(exc), field=path) from None

    kwargs = {"total_bandwidth": doc.system["B"]}
    for key in ("alpha", "p", "delta"):
        if key in doc.system:
            kwargs[key] = doc.system[key]
    kwargs.update(overrides)
    try:
        return Scenario(models, **kwargs)
    except InfeasibleScenarioError:
        raise
    except ConfigurationError as exc:
        raise ScenarioParseError(str(exc), field="system") from None


def load_scenario_document(path) -> ScenarioDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario_text(fh.read())


def load_scenario(path, **overrides) -> Scenario:
    return load_scenario_document(path).build(**overrides)


def scenario_to_text(scenario: Scenario, seed=None) -> str:
    """Serialize with every user in direct form so reloading is exact."""
    doc = {
        "system": {"B": scenario.total_bandwidth, "alpha": scenario.alpha, "p": scenario.p,
                   "delta": scenario.delta, "seed": seed},
        "users": [{"tau": u.tau, "nu": u.nu, "t_pri": u.t_pri, "xi_lo": u.lower,
                   "xi_hi": u.upper} for u in scenario.users],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_scenario(scenario: Scenario, path, seed=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_to_text(scenario, seed))
