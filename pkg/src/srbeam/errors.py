"""Exception types shared across the package."""


class SrbeamError(Exception):
    """Base class for all srbeam errors."""


class InvalidArgumentError(SrbeamError, ValueError):
    """An input violates a documented precondition (bad shape, non-PD matrix, ...)."""


class NumericalFailureError(SrbeamError, RuntimeError):
    """A factorization or iterative routine failed to converge."""


class InfeasibleError(SrbeamError):
    """A constrained subproblem has an empty feasible set."""


class ConfigError(SrbeamError, ValueError):
    """Configuration file or command-line flags failed validation."""
