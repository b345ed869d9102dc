"""Shared exception types."""


class FieldError(ValueError):
    """Bad field construction or an operation outside its domain."""


class ParamError(ValueError):
    """Rejected (alpha, beta) pair; .code names the violated condition."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class DomainError(ValueError):
    """Operation applied outside its stated domain."""


class InvariantViolation(RuntimeError):
    """A combinatorial claim checked at runtime failed on actual data."""
