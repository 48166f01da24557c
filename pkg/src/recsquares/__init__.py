"""Perfect squares in binary recurrence sequences of quadratic-field type."""
from .errors import DomainError, FactorizationError

__all__ = ["DomainError", "FactorizationError"]
