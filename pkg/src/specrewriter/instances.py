"""Graph-colouring instances: seeded grids and edge-list ingestion."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, SpecRewriterError
from .values import RelationV, Value


class ConfigError(SpecRewriterError):
    pass


class SelfLoopError(ParseError):
    pass


@dataclass(frozen=True)
class EdgeList:
    n: int
    edges: frozenset[tuple[int, int]] = frozenset()


@dataclass(frozen=True)
class Instance:
    id: str
    bindings: dict[str, Value]


@dataclass(frozen=True)
class GridConfig:
    """Cartesian grid of instance parameters.

    ``numberColours = cpn * m + o`` for each multiplier ``m`` and offset
    ``o``; the offsets let small grids sweep ``cpn .. cpn + 2``.
    """

    n_values: list[int]
    edge_density_percents: list[int]
    cpn_values: list[int]
    colours_multipliers: list[int] = field(default_factory=lambda: [1])
    seed: int = 0
    colours_offsets: list[int] = field(default_factory=lambda: [0])
    directed: bool = False

    def validate(self, allow_empty: bool = False) -> None:
        """Check the invariants; ``allow_empty`` accepts empty lists (an empty product)."""
        for name in ("n_values", "edge_density_percents", "cpn_values", "colours_multipliers", "colours_offsets"):
            if not getattr(self, name) and not allow_empty:
                raise ConfigError(f"{name} must not be empty")
        if any(n < 0 for n in self.n_values):
            raise ConfigError("vertex counts must be non-negative")
        if any(not 0 < d <= 100 for d in self.edge_density_percents):
            raise ConfigError("densities must lie in (0, 100]")
        if any(c < 1 for c in self.cpn_values):
            raise ConfigError("colours per node must be at least 1")
        if any(m < 1 for m in self.colours_multipliers) or any(o < 0 for o in self.colours_offsets):
            raise ConfigError("colour multipliers must be >= 1 and offsets >= 0")

    @classmethod
    def from_dict(cls, data: dict, allow_empty: bool = False) -> GridConfig:
        known = {"n_values", "edge_density_percents", "cpn_values", "colours_multipliers", "seed",
                 "colours_offsets", "directed"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown grid keys: {sorted(unknown)}")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate(allow_empty)
        return cfg

    @classmethod
    def load(cls, path: str | Path, allow_empty: bool = False) -> GridConfig:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return cls.from_dict(data, allow_empty)


def edge_count(n: int, density: int) -> int:
    """floor(n^2 * d / 100), capped at the n(n-1) irreflexive pairs."""
    return min(n * n * density // 100, n * (n - 1))


def sample_edges(n: int, density: int, rng: random.Random, directed: bool = False) -> frozenset[tuple[int, int]]:
    """Shuffle all ordered pairs and take a prefix.

    Undirected graphs add each pair with its reverse, stopping at the target
    count rounded down to an even number.
    """
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(pairs)
    target = edge_count(n, density)
    if directed:
        return frozenset(pairs[:target])
    target -= target % 2
    chosen: set[tuple[int, int]] = set()
    for u, v in pairs:
        if len(chosen) >= target:
            break
        if (u, v) not in chosen:
            chosen.update({(u, v), (v, u)})
    return frozenset(chosen)


def generate_grid(cfg: GridConfig, allow_empty: bool = False) -> list[Instance]:
    """One instance per grid point; a fixed seed gives identical output."""
    cfg.validate(allow_empty)
    rng = random.Random(cfg.seed)
    out = []
    for n, d, cpn, m, o in itertools.product(cfg.n_values, cfg.edge_density_percents, cfg.cpn_values,
                                             cfg.colours_multipliers, cfg.colours_offsets):
        edges = sample_edges(n, d, rng, cfg.directed)
        colours = cpn * m + o
        ident = f"n{n}_d{d}_cpn{cpn}_m{m}" + (f"_o{o}" if cfg.colours_offsets != [0] else "")
        out.append(Instance(ident, edge_list_to_param(EdgeList(n, edges), colours, cpn)))
    return out


def read_edge_list(text: str, directed: bool = False) -> EdgeList:
    """Parse ``u v`` lines with an optional ``n <count>`` header.

    Blank lines and ``#`` comments are ignored, duplicates are dropped and,
    unless ``directed``, each edge is stored in both orientations.
    """
    n: int | None = None
    edges: set[tuple[int, int]] = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if n is not None or edges or len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("malformed 'n <count>' header", lineno, 1)
            n = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"expected 'u v', got {line!r}", lineno, 1, frozenset({"u v"}))
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise SelfLoopError(f"self-loop on vertex {u}", lineno, 1)
        if n is not None and max(u, v) >= n:
            raise ParseError(f"vertex {max(u, v)} out of range for n = {n}", lineno, 1)
        max_id = max(max_id, u, v)
        edges.add((u, v))
        if not directed:
            edges.add((v, u))
    return EdgeList(max_id + 1 if n is None else n, frozenset(edges))


def write_edge_list(g: EdgeList) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def edge_list_to_param(g: EdgeList, number_colours: int, colours_per_node: int) -> dict[str, Value]:
    return {"n": g.n, "edges": RelationV(g.edges), "numberColours": number_colours,
            "coloursPerNode": colours_per_node}


def dodecahedral() -> EdgeList:
    """The dodecahedral graph: 20 vertices, 30 undirected edges."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    middle = [(5 + i, 10 + i) for i in range(5)] + [(10 + i, 5 + (i + 1) % 5) for i in range(5)]
    inner_spokes = [(10 + i, 15 + i) for i in range(5)]
    inner = [(15 + i, 15 + (i + 1) % 5) for i in range(5)]
    undirected = outer + spokes + middle + inner_spokes + inner
    return EdgeList(20, frozenset(undirected) | frozenset((v, u) for u, v in undirected))
