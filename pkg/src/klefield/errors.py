"""Package exception types."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class InvalidMeshError(ValueError):
    """A triangle mesh fails validation (bad indices, degenerate elements)."""


class DisconnectedGraphError(RuntimeError):
    """A graph operation requires connectivity that the input lacks."""
