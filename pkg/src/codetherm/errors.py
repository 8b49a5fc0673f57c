"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called on inputs outside its stated domain."""


class ConvergenceError(RuntimeError):
    """An iterative numeric routine failed to reach its tolerance."""
