"""Command-line entry point: ``specrewriter <command> ...``.

Exit codes: 0 ok, 1 parse/input error, 2 engine error, 3 not applicable,
4 too large, 5 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .converter import (NoConversionNeeded, bridge_for, convert_solution, generate_converter,
                        validate)
from .engine import FuelExhausted, Stuck, RuleSet, parse_rule_file
from .errors import DecodeError, ParseError, ScopeError, SpecRewriterError
from .essence import Specification, format_param, parse_param, parse_spec, print_spec
from .evaluator import DEFAULT_MAX_GROUND, InvalidInstance, TooLarge, build_env, solve
from .graph import encode, write_host_graph
from .instances import ConfigError, GridConfig, Instance, edge_list_to_param, generate_grid, read_edge_list
from .reformulation import NotApplicable, export_rules, load_rules, reformulate
from .values import Value, format_value, sort_key

EXIT_OK, EXIT_PARSE, EXIT_ENGINE, EXIT_NOT_APPLICABLE, EXIT_TOO_LARGE, EXIT_VERIFY = 0, 1, 2, 3, 4, 5

RULES_DIR_ENV = "SPECREWRITER_RULES_DIR"


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


def _read_spec(path: str) -> Specification:
    return parse_spec(Path(path).read_text(), name=Path(path).stem)


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _rules(extra: Sequence[str] | None) -> RuleSet:
    """Built-in rules (or those in $SPECREWRITER_RULES_DIR) plus user files, later wins."""
    override = os.environ.get(RULES_DIR_ENV)
    if override:
        rules = RuleSet()
        for path in sorted(Path(override).glob("*.gp2r"), key=lambda p: (p.stem == "main", p.name)):
            rules = rules.merge(_parse_rules(path))
    else:
        rules = load_rules()
    for path in extra or ():
        rules = rules.merge(_parse_rules(Path(path)))
    rules.check()
    return rules


def _parse_rules(path: Path) -> RuleSet:
    try:
        return parse_rule_file(path.read_text())
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}:{exc}") from None


# ------------------------------------------------------------------ rewrite


def cmd_rewrite(args) -> int:
    spec = _read_spec(args.input)
    rules = _rules(args.rules)
    try:
        result = reformulate(spec, rules, fuel=args.fuel)
    except NotApplicable as exc:
        _write(args.out, Path(args.input).read_text())
        print(f"notice: {exc}; input copied unchanged", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except (Stuck, FuelExhausted) as exc:
        stage = exc.position.split("/")[1] if exc.position.count("/") else exc.position
        raise _Exit(EXIT_ENGINE, f"rewriting failed in stage {stage}: {exc}") from None
    if args.emit_host:
        base = Path(args.out) if args.out and args.out != "-" else Path(args.input)
        base.with_suffix(".before.host").write_text(write_host_graph(encode(spec)) + "\n")
        base.with_suffix(".after.host").write_text(write_host_graph(encode(result.rewritten)) + "\n")
    _write(args.out, print_spec(result.rewritten))
    stages: dict[str, int] = {}
    for app in result.report:
        stages[app.stage] = stages.get(app.stage, 0) + 1
    summary = ", ".join(f"{stage} {count}" for stage, count in stages.items())
    print(f"rewrote {args.input}: {len(result.report)} rule applications ({summary})", file=sys.stderr)
    return EXIT_OK


# -------------------------------------------------------------------- solve


def _instance(path: str) -> dict[str, Value]:
    return parse_param(Path(path).read_text())


def _solution_text(solution: dict[str, Value]) -> str:
    return format_param(solution)


def cmd_solve(args) -> int:
    spec = _read_spec(args.spec)
    inst = _instance(args.param)
    solutions = solve(spec, inst, limit=args.limit, max_ground=args.max_ground)
    out_dir = Path(args.out) if args.out else Path(args.param).parent
    if solutions:
        out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.param).stem
    for i, sol in enumerate(solutions, start=1):
        (out_dir / f"{stem}-{i:06d}.solution").write_text(_solution_text(sol))
    print(f"{len(solutions)} solution{'' if len(solutions) == 1 else 's'}")
    return EXIT_OK


# --------------------------------------------------------- converter tools


def cmd_gen_converter(args) -> int:
    try:
        conv = generate_converter(_read_spec(args.original), _read_spec(args.rewritten))
    except NoConversionNeeded as exc:
        print(f"notice: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    _write(args.out, print_spec(conv.spec))
    return EXIT_OK


def cmd_convert(args) -> int:
    original, rewritten = _read_spec(args.original), _read_spec(args.rewritten)
    bridge = bridge_for(original, rewritten)
    name = original.finds[0].name
    solution = parse_param(Path(args.solution).read_text())
    if name not in solution:
        raise _Exit(EXIT_PARSE, f"{args.solution} has no value for {name!r}")
    env = build_env(original, _instance(args.param)) if args.param else None
    value = convert_solution(solution[name], original.finds[0].domain, env, bridge)
    _write(args.out, format_param({name: value}))
    return EXIT_OK


def cmd_validate(args) -> int:
    original = _read_spec(args.original)
    verdict = validate(original, _instance(args.param), parse_param(Path(args.solution).read_text()))
    if verdict:
        print("Valid")
        return EXIT_OK
    print("Invalid")
    for failure in verdict.failures:
        print(f"  failing: {failure}")
    return EXIT_VERIFY


# ---------------------------------------------------------------- instances


def _grid(args, allow_empty: bool = False) -> GridConfig:
    cfg = GridConfig.load(args.grid, allow_empty)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.directed:
        changes["directed"] = True
    if changes:
        cfg = GridConfig(**{**cfg.__dict__, **changes})
    return cfg


def cmd_gen_instances(args) -> int:
    if args.edges:
        if args.number_colours is None or args.cpn is None:
            raise _Exit(EXIT_PARSE, "--edges needs --number-colours and --cpn")
        g = read_edge_list(Path(args.edges).read_text(), directed=args.directed)
        target = Path(args.out or ".")
        if target.suffix != ".param":
            target = target / f"{Path(args.edges).stem}.param"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(format_param(edge_list_to_param(g, args.number_colours, args.cpn)))
        print(f"wrote {target}")
        return EXIT_OK
    if not args.grid:
        raise _Exit(EXIT_PARSE, "give --grid or --edges")
    instances = generate_grid(_grid(args))
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for inst in instances:
        (out / f"{inst.id}.param").write_text(format_param(inst.bindings))
    print(f"wrote {len(instances)} instances to {out}")
    return EXIT_OK


# ------------------------------------------------------------------- verify


@dataclass
class Record:
    id: str
    original: int | None = None
    rewritten: int | None = None
    bijection: str = "skipped"
    validation: str = "skipped"
    timings: dict[str, float] = field(default_factory=dict)
    applications: int = 0
    counterexample: str = ""

    @property
    def passed(self) -> bool:
        return self.bijection != "fail" and self.validation != "fail"

    def machine_line(self) -> str:
        parts = [f"id={self.id}", f"original={'' if self.original is None else self.original}",
                 f"rewritten={'' if self.rewritten is None else self.rewritten}",
                 f"bijection={self.bijection}", f"validation={self.validation}",
                 f"applications={self.applications}"]
        parts += [f"{k}_ms={v:.3f}" for k, v in self.timings.items()]
        return "record " + " ".join(parts)


def verify_instance(original: Specification, rewritten: Specification, inst: Instance, max_ground: int,
                    applications: int = 0, rewrite_ms: float = 0.0) -> Record:
    """Solve both specifications and check the conversion is a bijection onto valid solutions."""
    rec = Record(inst.id, applications=applications, timings={"rewrite": rewrite_ms})
    name = original.finds[0].name
    bridge = bridge_for(original, rewritten)
    try:
        t0 = time.perf_counter()
        orig_solutions = solve(original, inst.bindings, max_ground=max_ground)
        t1 = time.perf_counter()
        new_solutions = solve(rewritten, inst.bindings, max_ground=max_ground)
        t2 = time.perf_counter()
    except TooLarge:
        rec.bijection = rec.validation = "skipped(TooLarge)"
        return rec
    rec.original, rec.rewritten = len(orig_solutions), len(new_solutions)
    rec.timings["solve_original"] = (t1 - t0) * 1000
    rec.timings["solve_rewritten"] = (t2 - t1) * 1000

    converted = [convert_solution(s[name], None, None, bridge) for s in new_solutions]
    t3 = time.perf_counter()
    rec.timings["convert"] = (t3 - t2) * 1000
    invalid = [c for c in converted if not validate(original, inst.bindings, c)]
    rec.timings["validate"] = (time.perf_counter() - t3) * 1000
    targets = {s[name] for s in orig_solutions}
    image = set(converted)
    bijective = len(image) == len(converted) and image == targets
    rec.bijection = "pass" if bijective else "fail"
    rec.validation = "fail" if invalid else "pass"
    if invalid or not bijective:
        # smallest offending value in canonical order
        offenders = invalid or sorted(image ^ targets, key=sort_key) or converted
        rec.counterexample = format_value(min(offenders, key=sort_key))
    return rec


def cmd_verify(args) -> int:
    original = _read_spec(args.original)
    rules = _rules(args.rules)
    t0 = time.perf_counter()
    try:
        result = reformulate(original, rules, fuel=args.fuel)
    except NotApplicable as exc:
        raise _Exit(EXIT_NOT_APPLICABLE, str(exc)) from None
    rewrite_ms = (time.perf_counter() - t0) * 1000
    if args.grid:
        # an empty product is a valid (empty) verification run
        instances = generate_grid(_grid(args, allow_empty=True), allow_empty=True)
    elif args.param:
        instances = [Instance(Path(args.param).stem, _instance(args.param))]
    else:
        raise _Exit(EXIT_PARSE, "give a parameter file or --grid")
    records = [verify_instance(original, result.rewritten, inst, args.max_ground, len(result.report), rewrite_ms)
               for inst in sorted(instances, key=lambda i: i.id)]
    print(format_report(records))
    failed = [r for r in records if not r.passed]
    for r in failed:
        print(f"FAIL {r.id}: bijection={r.bijection} validation={r.validation} counterexample={r.counterexample}")
    return EXIT_VERIFY if failed else EXIT_OK


def format_report(records: list[Record]) -> str:
    header = ("instance", "original", "rewritten", "bijection", "validation", "solve ms", "rules")
    rows = [header]
    for r in records:
        solve_ms = r.timings.get("solve_original", 0.0) + r.timings.get("solve_rewritten", 0.0)
        rows.append((r.id, "-" if r.original is None else str(r.original),
                     "-" if r.rewritten is None else str(r.rewritten), r.bijection, r.validation,
                     f"{solve_ms:.1f}", str(r.applications)))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines += [r.machine_line() for r in records]
    passed = sum(r.passed for r in records)
    lines.append(f"summary records={len(records)} passed={passed} failed={len(records) - passed}")
    return "\n".join(lines)


def cmd_export_rules(args) -> int:
    for path in export_rules(Path(args.directory)):
        print(path)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specrewriter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True, rules=False, ground=False):
        if out:
            sp.add_argument("-o", "--out", help="output path (default: stdout)")
        if rules:
            sp.add_argument("--rules", nargs="+", metavar="PATH", help="extra rule files (override built-ins)")
            sp.add_argument("--fuel", type=int, default=10_000, help="maximum rule applications")
        if ground:
            sp.add_argument("--max-ground", type=int, default=DEFAULT_MAX_GROUND,
                            help="refuse to enumerate more candidates than this")

    sp = sub.add_parser("rewrite", help="reformulate a specification")
    sp.add_argument("input")
    sp.add_argument("--emit-host", action="store_true", help="also write the host graphs before/after")
    common(sp, rules=True)
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("solve", help="enumerate solutions by brute force")
    sp.add_argument("spec")
    sp.add_argument("param")
    sp.add_argument("--limit", type=int)
    sp.add_argument("-o", "--out", help="directory for .solution files (default: next to the parameter file)")
    common(sp, out=False, ground=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("gen-converter", help="emit the solution-converter specification")
    sp.add_argument("original")
    sp.add_argument("rewritten")
    common(sp)
    sp.set_defaults(func=cmd_gen_converter)

    sp = sub.add_parser("convert", help="convert a rewritten solution to the original type")
    sp.add_argument("original")
    sp.add_argument("rewritten")
    sp.add_argument("solution")
    sp.add_argument("param", nargs="?", help="instance, to check the converted value's domain")
    common(sp)
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("validate", help="check a solution against a specification")
    sp.add_argument("original")
    sp.add_argument("param")
    sp.add_argument("solution")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen-instances", help="write .param files for a grid or an edge list")
    sp.add_argument("--grid", help="JSON grid configuration")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--directed", action="store_true", help="store edges one way only")
    sp.add_argument("--edges", help="edge-list file to convert instead of a grid")
    sp.add_argument("--number-colours", type=int)
    sp.add_argument("--cpn", type=int, help="colours per node")
    sp.add_argument("-o", "--out", help="output directory (or .param file with --edges)")
    sp.set_defaults(func=cmd_gen_instances)

    sp = sub.add_parser("verify", help="check the reformulation against the original on instances")
    sp.add_argument("original")
    sp.add_argument("param", nargs="?")
    sp.add_argument("--grid")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--directed", action="store_true")
    common(sp, out=False, rules=True, ground=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export-rules", help="copy the built-in rule files into a directory")
    sp.add_argument("directory")
    sp.set_defaults(func=cmd_export_rules)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except (ParseError, ScopeError, ConfigError, InvalidInstance, DecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoConversionNeeded as exc:
        print(f"notice: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except SpecRewriterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
