"""Exception types shared across the engine."""


class AccesswalkError(Exception):
    """Base class for all engine errors."""


class NetworkFormatError(AccesswalkError):
    """Raised when input network data is malformed (bad ids, duplicate
    edges, self-loops). The message carries file/record context."""


class ScenarioError(AccesswalkError):
    """Raised when a scenario is invalid against the loaded network."""


class BudgetExceededError(AccesswalkError):
    """Raised by the exact enumerator when the partial-path budget is hit,
    signalling the graph is too large for exact mode."""


class EstimationError(AccesswalkError):
    """Raised when probability inputs violate their contracts (negative
    probability, mass above one). Signals an upstream estimation bug."""
