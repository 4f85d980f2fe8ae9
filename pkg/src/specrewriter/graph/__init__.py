"""Host graphs: the labelled-graph type, its text format, and the AST encoding."""

from .encoding import decode, encode
from .hostfmt import read_host_graph, write_host_graph
from .labeled import KIND, Atom, GraphEdge, GraphNode, LabeledGraph, Mark, renumbered

__all__ = ["KIND", "Atom", "GraphEdge", "GraphNode", "LabeledGraph", "Mark", "decode", "encode", "read_host_graph",
           "renumbered", "write_host_graph"]
