"""Exception hierarchy shared by every package, with CLI exit codes."""


class WienerMCError(Exception):
    """Base class for all errors raised by this project."""

    exit_code = 1


class ValidationError(WienerMCError, ValueError):
    """Input violates a documented precondition (shape, finiteness, range)."""


class ConfigError(WienerMCError):
    """Config document is malformed or carries unknown fields."""


class SingularMatrixError(WienerMCError):
    """Direct solve hit a pivot below the singularity threshold."""


class NoPathError(WienerMCError):
    """No transient path of the requested length exists."""


class ZeroRegressorError(WienerMCError):
    """Normalized update asked to divide by a zero-norm regressor."""


class DivergentSystemError(WienerMCError):
    """Neumann series for the split system does not converge."""

    exit_code = 2

    def __init__(self, rho: float, message: str = ""):
        self.rho = rho
        super().__init__(
            message or f"refusing to solve: spectral radius of F is {rho:.6g} (must be < 1)"
        )


class ReportIOError(WienerMCError):
    """Report could not be written or read."""

    exit_code = 4

    def __init__(self, path, cause: Exception):
        self.path = str(path)
        super().__init__(f"{self.path}: {cause}")
