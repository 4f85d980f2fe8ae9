"""The Essence subset: syntax tree, parser, printer, scoping and parameter files."""

from .ast import *  # noqa: F401,F403
from .compare import alpha_normalize, rename_identifiers, struct_eq
from .params import format_param, parse_param, parse_value
from .parser import parse_domain, parse_expr, parse_spec
from .printer import print_declaration, print_domain, print_expr, print_spec
from .scope import check_scope
