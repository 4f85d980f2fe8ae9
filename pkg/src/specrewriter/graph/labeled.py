"""Directed graphs with atom labels and optional red marks (GP2 host graphs)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

Atom = Union[int, str]

KIND = "kind"


class Mark(Enum):
    NONE = "none"
    RED = "red"


@dataclass(frozen=True)
class GraphNode:
    id: int
    label: Atom
    mark: Mark = Mark.NONE


@dataclass(frozen=True)
class GraphEdge:
    id: int
    src: int
    tgt: int
    label: Atom


def is_atom(value) -> bool:
    return isinstance(value, str) or (isinstance(value, int) and not isinstance(value, bool))


class LabeledGraph:
    """Mutable builder; treat instances as values once handed out.

    Rewriting copies the host before changing it (``copy()`` is shallow over
    frozen node/edge records, so it is cheap).
    """

    def __init__(self):
        self.nodes: dict[int, GraphNode] = {}
        self.edges: dict[int, GraphEdge] = {}
        self.next_node_id = 0
        self.next_edge_id = 0
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}

    # ------------------------------------------------------------ building

    def add_node(self, label: Atom, mark: Mark = Mark.NONE, id: int | None = None) -> int:
        if not is_atom(label):
            raise TypeError(f"label must be an int or str atom, got {label!r}")
        if id is None:
            id = self.next_node_id
        if id in self.nodes:
            raise ValueError(f"duplicate node id {id}")
        self.nodes[id] = GraphNode(id, label, mark)
        self._out[id] = []
        self._in[id] = []
        self.next_node_id = max(self.next_node_id, id + 1)
        return id

    def add_edge(self, src: int, tgt: int, label: Atom, id: int | None = None) -> int:
        if not is_atom(label):
            raise TypeError(f"label must be an int or str atom, got {label!r}")
        if src not in self.nodes or tgt not in self.nodes:
            raise ValueError(f"edge endpoint missing: {src} -> {tgt}")
        if id is None:
            id = self.next_edge_id
        if id in self.edges:
            raise ValueError(f"duplicate edge id {id}")
        self.edges[id] = GraphEdge(id, src, tgt, label)
        self._out[src].append(id)
        self._in[tgt].append(id)
        self.next_edge_id = max(self.next_edge_id, id + 1)
        return id

    def remove_edge(self, id: int) -> None:
        edge = self.edges.pop(id)
        self._out[edge.src].remove(id)
        self._in[edge.tgt].remove(id)

    def remove_node(self, id: int) -> None:
        if self._out[id] or self._in[id]:
            raise ValueError(f"node {id} still has incident edges")
        del self.nodes[id]
        del self._out[id]
        del self._in[id]

    def relabel(self, id: int, label: Atom, mark: Mark) -> None:
        self.nodes[id] = GraphNode(id, label, mark)

    def copy(self) -> LabeledGraph:
        g = LabeledGraph()
        g.nodes = dict(self.nodes)
        g.edges = dict(self.edges)
        g.next_node_id = self.next_node_id
        g.next_edge_id = self.next_edge_id
        g._out = {k: list(v) for k, v in self._out.items()}
        g._in = {k: list(v) for k, v in self._in.items()}
        return g

    # ------------------------------------------------------------- queries

    def out_edges(self, node: int) -> list[GraphEdge]:
        return [self.edges[e] for e in self._out[node]]

    def in_edges(self, node: int) -> list[GraphEdge]:
        return [self.edges[e] for e in self._in[node]]

    def incident_edge_ids(self, node: int) -> set[int]:
        return set(self._out[node]) | set(self._in[node])

    def degree(self, node: int) -> int:
        return len(self._out[node]) + len(self._in[node])

    def children(self, node: int) -> dict[Atom, int]:
        """Targets of outgoing edges keyed by edge label."""
        return {self.edges[e].label: self.edges[e].tgt for e in self._out[node]}

    def marked(self, mark: Mark = Mark.RED) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.mark is mark)

    def validate(self) -> None:
        """Check id consistency and that no edge dangles."""
        for eid, e in self.edges.items():
            if eid != e.id:
                raise AssertionError(f"edge key {eid} != id {e.id}")
            if e.src not in self.nodes or e.tgt not in self.nodes:
                raise AssertionError(f"dangling edge {e}")
        for nid, n in self.nodes.items():
            if nid != n.id:
                raise AssertionError(f"node key {nid} != id {n.id}")

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[GraphNode]:
        return iter(sorted(self.nodes.values(), key=lambda n: n.id))

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledGraph) and self.nodes == other.nodes and self.edges == other.edges

    def __repr__(self) -> str:
        return f"<LabeledGraph {len(self.nodes)} nodes, {len(self.edges)} edges>"

    @classmethod
    def build(cls, nodes: Iterable[tuple], edges: Iterable[tuple]) -> LabeledGraph:
        """Convenience constructor: nodes as (id, label[, mark]), edges as (id, src, tgt, label)."""
        g = cls()
        for n in nodes:
            g.add_node(n[1], n[2] if len(n) > 2 else Mark.NONE, id=n[0])
        for e in edges:
            g.add_edge(e[1], e[2], e[3], id=e[0])
        return g


def renumbered(g: LabeledGraph) -> LabeledGraph:
    """Compact ids to 0..n-1 / 0..m-1 preserving relative order."""
    node_map = {old: new for new, old in enumerate(sorted(g.nodes))}
    out = LabeledGraph()
    for old in sorted(g.nodes):
        n = g.nodes[old]
        out.add_node(n.label, n.mark, id=node_map[old])
    for new, old in enumerate(sorted(g.edges)):
        e = g.edges[old]
        out.add_edge(node_map[e.src], node_map[e.tgt], e.label, id=new)
    return out
