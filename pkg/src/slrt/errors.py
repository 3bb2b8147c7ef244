"""Shared exception types."""


class EmptyBandError(ValueError):
    """No matrix elements survive the band selection."""


class BasisCoverageError(ValueError):
    """Requested energy window is not covered by the retained basis."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


class SolverConvergenceError(RuntimeError):
    """Linear solve did not reach the requested residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class ConfigError(ValueError):
    """Malformed run configuration."""
