"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class SpecRewriterError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SpecRewriterError):
    """Malformed text in any of the supported formats.

    ``line`` and ``col`` are 1-based; ``expected`` is the set of token
    descriptions that would have been accepted at that point.
    """

    def __init__(self, message: str, line: int = 0, col: int = 0, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        where = f"{line}:{col}: " if line else ""
        extra = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{where}{message}{extra}")


class ScopeError(SpecRewriterError):
    pass


class ArityError(ScopeError):
    pass


class DecodeError(SpecRewriterError):
    def __init__(self, node_id: int | None, rule: str):
        self.node_id = node_id
        self.rule = rule
        super().__init__(f"node {node_id}: {rule}" if node_id is not None else rule)
