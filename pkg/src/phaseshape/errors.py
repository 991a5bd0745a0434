"""Exception types shared across the package.

Two failure families are distinguished so that callers (and the CLI exit
codes) can tell bad input apart from runtime numerical breakdown.
"""

__all__ = ["ValidationError", "NumericalError"]


class ValidationError(ValueError):
    """Invalid input data or configuration: bad shapes, non-finite values,
    violated preconditions, unparseable files."""


class NumericalError(RuntimeError):
    """A computation failed numerically: diverging integration, degenerate
    fits, non-finite intermediate state."""
