"""Exception types raised across the package."""


class LatticeError(ValueError):
    """Invalid lattice, index, or mode specification."""


class SolverError(RuntimeError):
    """Linear solve or time stepping failed.

    ``residuals`` holds the relative residual history of the failing solve
    (empty when the failure was not a Krylov breakdown), ``step`` the time
    step index if the failure happened inside a run.
    """

    def __init__(self, message, residuals=None, step=None):
        super().__init__(message)
        self.residuals = list(residuals or [])
        self.step = step


class ConfigError(ValueError):
    """Experiment configuration is malformed."""
