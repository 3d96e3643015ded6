"""
Error hierarchy for the Charge Qubit Gate Control Toolkit.

Every error carries an ``error_class`` string that the command line reports
in its machine-readable failure message.
"""


class ChargeControlError(Exception):
    """Base class for all toolkit errors."""

    error_class = "error"
    exit_code = 1


class ConfigurationError(ChargeControlError, ValueError):
    """Invalid scenario, basis window or noise configuration."""

    error_class = "configuration"
    exit_code = 2


class InputError(ChargeControlError, ValueError):
    """Invalid runtime input such as NaN samples or unpinned pulse endpoints."""

    error_class = "input"
    exit_code = 3


class NumericalError(ChargeControlError):
    """Eigensolver failure or a non-finite optimizer update."""

    error_class = "numerical"
    exit_code = 4


class InternalError(ChargeControlError):
    """Inconsistent internal state (dimension mismatch and similar)."""

    error_class = "internal"
    exit_code = 5


def describe(exc: BaseException) -> dict:
    """Machine-readable description of an exception."""
    error_class = getattr(exc, "error_class", "error")
    return {"error_class": error_class, "message": str(exc) or exc.__class__.__name__}


def exit_code_for(error_class: str) -> int:
    """Process exit code for an error class string."""
    for cls in (ConfigurationError, InputError, NumericalError, InternalError):
        if cls.error_class == error_class:
            return cls.exit_code
    return ChargeControlError.exit_code
