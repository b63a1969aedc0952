"""Exception types raised by the solver library."""


class FeoError(Exception):
    """Base class for all library errors."""


class DomainError(FeoError, ValueError):
    """An argument lies outside the domain of a rate or utility function."""


class ConfigurationError(FeoError, ValueError):
    """Parameters do not describe a valid user, scenario or solver setup."""


class BracketError(FeoError, ValueError):
    """The bisection target is not bracketed by the interval endpoints."""


class IterationError(FeoError, RuntimeError):
    """Bisection ran out of iterations before reaching its tolerance."""


class InfeasibleError(FeoError):
    """No allocation satisfies the capacity and per-user bound constraints."""


class GuardError(FeoError, ValueError):
    """An oracle was asked to enumerate an instance beyond its size guard."""


class ScenarioParseError(FeoError, ValueError):
    """A scenario file could not be parsed into a valid scenario."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class InfeasibleScenarioError(InfeasibleError, ConfigurationError):
    """The users' lower bounds alone exceed the total bandwidth."""
