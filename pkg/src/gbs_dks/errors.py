"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 1,
BudgetExceededError -> 2, OSError -> 3.
"""


class InputError(ValueError):
    """A caller-supplied value violates a precondition."""


class GraphParseError(InputError):
    """A graph or matrix file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured budget."""


class EmptyDistributionError(RuntimeError):
    """No candidate carries positive weight, so proportional sampling is undefined.

    Callers are expected to fall back to uniform sampling when they see this.
    """
