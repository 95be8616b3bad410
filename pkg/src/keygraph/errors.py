"""Exception types shared across the package."""


class KeygraphError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(KeygraphError, ValueError):
    """An argument violates a documented precondition or type invariant."""


class BudgetExceededError(KeygraphError):
    """A computation was refused because its input exceeds the configured budget."""


class ParseError(KeygraphError, ValueError):
    """Malformed input file. ``line`` is 1-based, or None when not line-specific."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(KeygraphError):
    """No channel probability in (0, 1] reaches the requested link probability."""

    def __init__(self, message, required_p_e=None, available_p_s=None, required_p=None):
        self.required_p_e = required_p_e
        self.available_p_s = available_p_s
        self.required_p = required_p
        super().__init__(message)


class InvariantViolation(KeygraphError, AssertionError):
    """A recorded result contradicts a property that must hold for every graph."""
