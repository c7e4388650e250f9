"""Exception hierarchy.

Argument errors that are plain misuse (bad counts, mismatched shapes) raise
``ValueError`` directly; the classes here mark failures callers may want to
catch separately, and the CLI maps them onto exit codes.
"""


class TorusLayerError(Exception):
    """Base class for package errors."""


class DomainError(TorusLayerError, ValueError):
    """A point lies outside the valid coordinate patch (a+q <= 0 or F_q <= 0)."""


class ConventionError(TorusLayerError, ValueError):
    """A coefficient normalization convention cannot be applied."""


class ConfigError(TorusLayerError, ValueError):
    """Bad run configuration. Carries the offending key and line when known."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class NumericalError(TorusLayerError, ArithmeticError):
    """Numerical failure: conditioning, convergence or self-adjointness."""


class LinearDependenceError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class AsymmetryError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass
