"""Exception types shared across the package."""


class QReflectError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QReflectError):
    """A path was evaluated or combined outside its domain."""


class DegenerateInputError(QReflectError):
    """An operation received an input ruled out by its preconditions
    (e.g. inverting a path with zero total increase)."""


class UnsupportedMatrixError(QReflectError):
    """The reflection matrix is outside the triangular family handled here."""


class ConfigError(QReflectError):
    """An experiment configuration violates a model-level constraint."""
