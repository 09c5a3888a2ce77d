"""Exception hierarchy shared by every module.

The CLI maps each family to an exit code: domain errors exit with 2,
data-validation errors with 3 and numerical non-convergence with 4.
"""


class CHError(Exception):
    exit_code = 1


class DomainError(CHError, ValueError):
    """Input outside the mathematical domain (boundary ray, phase pole, ...)."""

    exit_code = 2


class DataValidationError(CHError, ValueError):
    """Malformed or physically inadmissible data (|r| >= 1, m <= 0, ...)."""

    exit_code = 3


class ConvergenceError(CHError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""

    exit_code = 4
