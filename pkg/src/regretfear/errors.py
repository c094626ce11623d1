"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RegretFearError(Exception):
    """Base class for all package errors."""


class ValidationError(RegretFearError, ValueError):
    """A prospect violates its structural invariants."""


class NegativeProbability(ValidationError):
    def __init__(self, prob: float, index: int):
        self.prob = prob
        self.index = index
        super().__init__(f"branch {index} has negative probability {prob!r}")


class ProbabilitySumMismatch(ValidationError):
    def __init__(self, total: float):
        self.total = total
        super().__init__(f"probabilities sum to {total!r}, expected 1")


class EmptyProspect(ValidationError):
    def __init__(self):
        super().__init__("a prospect needs at least one branch")


class NonFiniteOutcome(ValidationError):
    def __init__(self, value: float, index: int):
        self.value = value
        self.index = index
        super().__init__(f"branch {index} has non-finite outcome {value!r}")


class NonFiniteInput(RegretFearError, ValueError):
    """A function was evaluated at NaN or infinity."""


class DomainViolation(RegretFearError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class UnknownOutcomePresent(RegretFearError, ValueError):
    """Classical evaluation was requested for a prospect with unknown outcomes."""


class NoRoot(RegretFearError):
    """No sign change of the choice functional was found on the scan grid."""


class HypothesisUnmet(RegretFearError):
    """The side conditions of an analytical check do not hold for the given setup."""


class NoReversalFound(RegretFearError):
    """The small-probability scan ended without a preference reversal."""


class ConvexityRequired(RegretFearError):
    """The operation needs a regret function that is convex on positive arguments."""


class RootSolveFailed(RegretFearError):
    """A one-dimensional inverse could not be bracketed or solved."""


class ParseError(RegretFearError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
