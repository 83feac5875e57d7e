"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input fails a structural requirement (normalization, unitarity, shape)."""


class DimensionError(ValidationError):
    """Matrix or tensor dimensions are inconsistent or exceed a configured cap."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed an enumeration or size cap."""
