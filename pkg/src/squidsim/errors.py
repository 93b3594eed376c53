"""Exception hierarchy shared by the computation modules and the CLI."""


class SquidSimError(Exception):
    """Base class for all simulator errors."""


class ParameterDomainError(SquidSimError, ValueError):
    """An input parameter is outside its physical domain."""

    def __init__(self, field, value, requirement):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: must be {requirement}")


class UndefinedQuantityError(SquidSimError, ValueError):
    """A derived quantity has no finite value for the given inputs (e.g. T = 0)."""


class GridTooSmallError(SquidSimError):
    """Eigenfunctions do not decay inside the flux grid."""


class NoDoubleWellError(SquidSimError, ValueError):
    def __init__(self, beta_L):
        self.beta_L = beta_L
        super().__init__(f"beta_L={beta_L:.6g}: a double well requires beta_L > 1")


class TwoLevelInvalidError(SquidSimError):
    def __init__(self, message, gap_ratio):
        self.gap_ratio = gap_ratio
        super().__init__(f"{message} (gap_ratio={gap_ratio:.6g})")


class DegenerateModelError(SquidSimError, ValueError):
    """The two-level model has zero tunnel splitting."""


class TruncationError(SquidSimError):
    """The Fock-space truncation could not be made adequate below the size cap."""


class ConsistencyError(SquidSimError):
    """An internal self-check between two independent evaluations failed."""


class ConfigError(SquidSimError):
    """Malformed or schema-violating run configuration."""
