"""Ground values: the currency of the evaluator, parameter files and the converter.

Integers and tuples are plain Python ``int`` / ``tuple``. Sets and relations
are ``frozenset`` subclasses so membership tests stay fast; functions keep an
explicit defined-set.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Union


class SetV(frozenset):
    __slots__ = ()

    def __repr__(self) -> str:
        return f"SetV({format_value(self)})"


class RelationV(frozenset):
    __slots__ = ()

    def __repr__(self) -> str:
        return f"RelationV({format_value(self)})"


class FunctionV:
    """A finite function; ``defined()`` is the set it is defined on."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping | Iterable[tuple] = ()):
        self._map = dict(mapping)
        self._hash: int | None = None

    def __call__(self, key):
        return self._map[key]

    def __contains__(self, key) -> bool:
        return key in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionV) and self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def items(self) -> list[tuple]:
        return sorted(self._map.items(), key=lambda kv: sort_key(kv[0]))

    def defined(self) -> SetV:
        return SetV(self._map)

    def __repr__(self) -> str:
        return f"FunctionV({format_value(self)})"


Value = Union[int, tuple, SetV, RelationV, FunctionV]


def sort_key(value: Value) -> tuple:
    """Recursive canonical key; collections order by size, then elementwise."""
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, tuple):
        return (1, len(value), tuple(sort_key(v) for v in value))
    if isinstance(value, SetV):
        return (2, len(value), tuple(sorted(sort_key(v) for v in value)))
    if isinstance(value, RelationV):
        return (3, len(value), tuple(sorted(sort_key(v) for v in value)))
    if isinstance(value, FunctionV):
        return (4, len(value), tuple((sort_key(k), sort_key(v)) for k, v in value.items()))
    raise TypeError(f"not a value: {value!r}")


def sorted_values(values: Iterable[Value]) -> list[Value]:
    return sorted(values, key=sort_key)


def iter_sorted(collection: frozenset) -> Iterator[Value]:
    return iter(sorted(collection, key=sort_key))


def format_value(value: Value) -> str:
    """Render a value in the `.param` / `.solution` literal syntax."""
    if isinstance(value, (bool, int)):
        return str(int(value))
    if isinstance(value, tuple):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    if isinstance(value, RelationV):
        return "relation(" + ", ".join(format_value(v) for v in iter_sorted(value)) + ")"
    if isinstance(value, SetV):
        return "{" + ", ".join(format_value(v) for v in iter_sorted(value)) + "}"
    if isinstance(value, FunctionV):
        body = ", ".join(f"{format_value(k)} --> {format_value(v)}" for k, v in value.items())
        return f"function({body})"
    raise TypeError(f"not a value: {value!r}")
