"""`.param` and `.solution` files: `letting <name> be <value-literal>` lines."""

from __future__ import annotations

from typing import Mapping

from ..values import FunctionV, RelationV, SetV, Value, format_value
from .lexer import TokenStream


def parse_value(text: str) -> Value:
    ts = TokenStream(text)
    value = _value(ts)
    if ts.peek.kind != "EOF":
        ts.fail({"end of input"})
    return value


def parse_param(text: str) -> dict[str, Value]:
    """Parse a parameter or solution file into an ordered name -> value map."""
    ts = TokenStream(text)
    bindings: dict[str, Value] = {}
    while ts.peek.kind != "EOF":
        if ts.accept("language"):
            ts.expect_ident()
            while ts.peek.kind == "INT" or ts.at("."):
                ts.next()
            continue
        ts.expect("letting")
        name = ts.expect_ident()
        if name in bindings:
            ts.pos -= 1
            ts.fail(set(), f"duplicate binding for {name!r}")
        ts.expect("be")
        bindings[name] = _value(ts)
    return bindings


def format_param(bindings: Mapping[str, Value]) -> str:
    return "".join(f"letting {name} be {format_value(v)}\n" for name, v in bindings.items())


def _value(ts: TokenStream) -> Value:
    tok = ts.peek
    if tok.kind == "INT":
        ts.next()
        return int(tok.text)
    if ts.at("-") and ts.peek_at(1).kind == "INT":
        ts.next()
        return -int(ts.next().text)
    if ts.accept("("):
        elems = [_value(ts)]
        while ts.accept(","):
            elems.append(_value(ts))
        ts.expect(")")
        return elems[0] if len(elems) == 1 else tuple(elems)
    if ts.accept("{"):
        return SetV(_sequence(ts, "}", _value))
    if ts.accept("relation"):
        ts.expect("(")
        tuples = _sequence(ts, ")", _value)
        for t in tuples:
            if not isinstance(t, tuple):
                ts.fail({"tuple"}, "relation literals contain tuples")
        return RelationV(tuples)
    if ts.accept("function"):
        ts.expect("(")
        return FunctionV(_sequence(ts, ")", _maplet))
    ts.fail({"integer", "tuple", "set", "relation(...)", "function(...)"})


def _maplet(ts: TokenStream) -> tuple[Value, Value]:
    key = _value(ts)
    ts.expect("-->")
    return key, _value(ts)


def _sequence(ts: TokenStream, close: str, item) -> list:
    items = []
    if ts.accept(close):
        return items
    items.append(item(ts))
    while ts.accept(","):
        items.append(item(ts))
    ts.expect(close)
    return items
