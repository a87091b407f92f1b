"""Exception types shared across the package.

The CLI maps SchemaError to exit code 2 and NumericError subclasses to
exit code 3.
"""


class MaxtailsError(Exception):
    pass


class DomainError(MaxtailsError, ValueError):
    """Point outside the chart a metric or operator is defined on."""


class DegenerateMetricError(MaxtailsError, ValueError):
    """Metric not invertible (or wrong signature) at the requested point."""


class FrameUndefinedError(DomainError):
    """Null frame requested on the axis or at r = 0."""


class InputError(MaxtailsError, ValueError):
    """Bad user-supplied data (NaNs, empty arrays, unusable profiles)."""


class SchemaError(MaxtailsError, ValueError):
    """Configuration fails schema validation (unknown/missing/ill-typed keys)."""


class UnsupportedConfigurationError(MaxtailsError, ValueError):
    """Configuration is well-formed but outside the supported physics."""


class NumericError(MaxtailsError, RuntimeError):
    """Numerical failure at runtime."""


class UnstableEvolutionError(NumericError):
    """Evolution produced non-finite data.

    Carries the first bad grid index and the time at which it appeared.
    """

    def __init__(self, index: int, time: float):
        self.index = index
        self.time = time
        super().__init__(f"non-finite state at grid index {index}, t = {time:.6g}")


class TailNotReachedError(NumericError):
    """No stable sign-definite power-law window found in a time series."""


class ReconstructionError(NumericError):
    """Null-transport reconstruction inconsistent with its algebraic cross-check."""
