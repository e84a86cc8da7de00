class MeshcertError(Exception):
    """Base class for errors raised by this package."""


class GraphInputError(MeshcertError, ValueError):
    """Malformed graph or labeling input (loops, bad indices, parse errors)."""


class DisconnectedGraphError(MeshcertError, ValueError):
    """The input graph is not connected."""


class RadiusError(MeshcertError, ValueError):
    """A rule or predicate was evaluated on a view that is too small."""


class GuardExceeded(MeshcertError, RuntimeError):
    """A brute-force sub-oracle or search went past its configured size cap."""


class BudgetExceeded(GuardExceeded):
    """An exhaustive labeling search ran out of its node budget."""
