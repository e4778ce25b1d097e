"""Exception hierarchy shared by every module.

The CLI maps each family to a distinct exit code, so new errors should
subclass one of these rather than raising bare built-ins.
"""


class ContourError(Exception):
    """Base class for library errors."""


class GrammarError(ContourError, ValueError):
    """A tree grammar failed validation or could not be parsed."""


class TreeStructureError(ContourError, ValueError):
    """An explicit tree violates an invariant or an operation's precondition."""


class VertexBudgetExceeded(ContourError):
    """Expanding a tree would create more vertices than the budget allows."""

    def __init__(self, budget: int):
        super().__init__(f"vertex budget of {budget} exceeded")
        self.budget = budget


class TruncationTooShallow(ContourError):
    """The truncation cuts off contours of the requested size."""

    def __init__(self, depth: int, required: int):
        super().__init__(
            f"truncation depth {depth} is below the required depth {required}"
        )
        self.depth = depth
        self.required = required


class InfiniteCoefficients(ContourError):
    """A series system has an unbounded coefficient (one-child cycle)."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(
            "one-child cycle makes coefficients infinite: " + " -> ".join(self.cycle)
        )


class InfiniteMultiplicity(ContourError):
    """A count that must be finite is infinite."""

    def __init__(self, size: int):
        super().__init__(f"infinitely many contours of size {size}")
        self.size = size


class MismatchError(ContourError):
    """Two counting routes disagree."""

    def __init__(self, message: str, contour=None, size=None):
        super().__init__(message)
        self.contour = contour
        self.size = size


class InfiniteIndependentPath(ContourError):
    """No finite depth bound exists because some branch never splits again."""
