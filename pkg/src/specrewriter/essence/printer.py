"""Deterministic pretty-printer; output always re-parses to an equal AST."""

from __future__ import annotations

from .ast import (
    Apply, Attribute, BinOp, Declaration, Defined, Domain, EmptySet, Expr, Find, ForAll,
    FunctionDomain, Given, Ident, IntLit, IntRange, IntUnbounded, LettingDomain, LettingValue,
    NamedDomain, Not, OverCollection, OverDomain, RelationDomain, SetDomain, Specification, Sum,
    ToInt, TupleDomain, TupleIndex, TupleLit,
)
from .parser import PRECEDENCE, RIGHT_ASSOC, UNARY_LEVEL

INDENT = "    "
_TIGHT_OPS = frozenset({"+", "-", "*"})
_PRIMARY = UNARY_LEVEL + 1


def print_spec(spec: Specification) -> str:
    """One declaration per line, then `such that` with constraints joined by ",\\n"."""
    comments: dict[int, list[str]] = {}
    for index, text in spec.comments:
        comments.setdefault(index, []).append(text)

    lines: list[str] = []
    item = 0

    def emit_comments(index: int) -> None:
        for text in comments.pop(index, []):
            lines.append(f"$ {text}".rstrip())

    for decl in spec.declarations:
        emit_comments(item)
        lines.append(print_declaration(decl))
        item += 1
    if spec.constraints:
        lines.append("such that")
        for i, c in enumerate(spec.constraints):
            emit_comments(item)
            text = print_expr(c)
            lines.append(text + ("," if i < len(spec.constraints) - 1 else ""))
            item += 1
    for index in sorted(comments):
        emit_comments(index)
    return "\n".join(lines) + "\n" if lines else ""


def print_declaration(decl: Declaration) -> str:
    match decl:
        case Given(name, domain):
            return f"given {name} : {print_domain(domain)}"
        case Find(name, domain):
            return f"find {name} : {print_domain(domain)}"
        case LettingDomain(name, domain):
            return f"letting {name} be domain {print_domain(domain)}"
        case LettingValue(name, expr):
            return f"letting {name} be {print_expr(expr)}"
    raise TypeError(f"not a declaration: {decl!r}")


def print_domain(domain: Domain) -> str:
    match domain:
        case IntUnbounded():
            return "int"
        case IntRange(lo, hi):
            lo_s = "" if lo is None else print_expr(lo)
            hi_s = "" if hi is None else print_expr(hi)
            return f"int({lo_s}..{hi_s})"
        case NamedDomain(name):
            return name
        case RelationDomain(attrs, comps):
            inner = " * ".join(print_domain(c) for c in comps)
            return f"relation{_attrs(attrs)} of ({inner})"
        case SetDomain(attrs, element):
            return f"set{_attrs(attrs)} of {print_domain(element)}"
        case FunctionDomain(attrs, source, target):
            return f"function{_attrs(attrs)} {print_domain(source)} --> {print_domain(target)}"
        case TupleDomain(comps):
            return "tuple (" + ", ".join(print_domain(c) for c in comps) + ")"
    raise TypeError(f"not a domain: {domain!r}")


def _attrs(attrs: tuple[Attribute, ...]) -> str:
    if not attrs:
        return ""
    parts = [a.name if a.arg is None else f"{a.name} {print_expr(a.arg)}" for a in attrs]
    return " (" + ", ".join(parts) + ")"


def _level(e: Expr) -> int:
    if isinstance(e, (ForAll, Sum)):
        return 0
    if isinstance(e, BinOp):
        return PRECEDENCE[e.op]
    if isinstance(e, Not) or (isinstance(e, IntLit) and e.value < 0):
        return UNARY_LEVEL
    return _PRIMARY


def print_expr(e: Expr, required: int = 0, indent: str = "") -> str:
    text = _expr(e, indent)
    if _level(e) < required:
        return f"({text})"
    return text


def _expr(e: Expr, indent: str) -> str:
    match e:
        case IntLit(value):
            return str(value)
        case Ident(name):
            return name
        case EmptySet():
            return "{}"
        case TupleLit(elems):
            return "(" + ", ".join(print_expr(x, 0, indent) for x in elems) + ")"
        case BinOp(op, lhs, rhs):
            level = PRECEDENCE[op]
            if op in RIGHT_ASSOC:
                left, right = level + 1, level
            else:
                left, right = level, level + 1
            right_text = print_expr(rhs, right, indent)
            # keep `a - -3` readable rather than `a--3`
            sep = op if op in _TIGHT_OPS and not right_text.startswith("-") else f" {op} "
            return print_expr(lhs, left, indent) + sep + right_text
        case Not(inner):
            return "!" + print_expr(inner, UNARY_LEVEL, indent)
        case TupleIndex(inner, index):
            return f"{print_expr(inner, _PRIMARY, indent)}[{index}]"
        case Apply(fn, args):
            return fn + "(" + ", ".join(print_expr(a, 0, indent) for a in args) + ")"
        case ToInt(inner):
            return f"toInt({print_expr(inner, 0, indent)})"
        case Defined(inner):
            return f"defined({print_expr(inner, 0, indent)})"
        case ForAll() | Sum():
            kw = "forAll" if isinstance(e, ForAll) else "sum"
            binders = f"({','.join(e.binders)})" if e.destructure else ", ".join(e.binders)
            match e.source:
                case OverDomain(domain):
                    source = f": {print_domain(domain)}"
                case OverCollection(coll):
                    source = f"in {print_expr(coll, PRECEDENCE['intersect'], indent)}"
            inner_indent = indent + INDENT
            body = print_expr(e.body, 0, inner_indent)
            return f"{kw} {binders} {source} .\n{inner_indent}{body}"
    raise TypeError(f"not an expression: {e!r}")
