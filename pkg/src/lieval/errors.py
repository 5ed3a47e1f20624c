"""Shared exception types."""


class LievalError(Exception):
    """Base class for all errors raised by this package."""


class EnumerationLimitError(LievalError):
    """An exhaustive enumeration would exceed the supported size."""


class PrecisionError(LievalError):
    """A p-adic computation ran out of precision to decide its answer."""


class NotAComplexError(LievalError):
    """Two maps that should compose to zero do not."""


class InvariantSearchError(LievalError):
    """The degree-by-degree invariant solver failed at an expected degree."""


class HypothesisViolation(LievalError):
    """A prime-size (or similar) hypothesis required by an operation fails."""
