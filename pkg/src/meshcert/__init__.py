"""Local certification of distances and recognition of metric graph classes."""

from .errors import (
    BudgetExceeded,
    DisconnectedGraphError,
    GraphInputError,
    GuardExceeded,
    MeshcertError,
    RadiusError,
)
from .graph import Graph, LabeledView, build_graph, extract_view, parse_edge_list

__version__ = "0.1.0"
