"""Errors raised while grounding domains or evaluating expressions."""

from __future__ import annotations

from ..errors import SpecRewriterError


class EvaluationError(SpecRewriterError):
    pass


class TooLarge(EvaluationError):
    """A domain has more values than the configured cap (or is unbounded)."""

    def __init__(self, what: str, size: int | None, cap: int):
        self.size = size
        self.cap = cap
        amount = "unbounded" if size is None else f"{size} values"
        super().__init__(f"{what} is too large to enumerate ({amount}; cap {cap})")


class UnboundIdentifier(EvaluationError):
    pass


class NegativeSize(EvaluationError):
    pass


class TypeMismatch(EvaluationError):
    pass


class PartialApplication(EvaluationError):
    """A function was applied outside its defined set."""


class IndexOutOfArity(EvaluationError):
    pass


class InvalidInstance(EvaluationError):
    """A parameter binding is missing or does not inhabit its declared domain."""
