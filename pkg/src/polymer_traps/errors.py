"""Shared exception types."""


class ConfigurationError(ValueError):
    """A run parameter violates a resolution, stability, or resource policy."""


class CoverageError(RuntimeError):
    """A trap field's bounding box fails to cover the path's enlarged range."""
