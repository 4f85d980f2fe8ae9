import subprocess
import sys

import pytest

from conftest import DATA
from specrewriter.cli import main
from specrewriter.essence import format_param, parse_param, parse_spec
from specrewriter.graph import read_host_graph
from specrewriter.reformulation import builtin_rule_files
from specrewriter.values import RelationV

RELATION_SPEC = str(DATA / "relation_colouring.essence")


@pytest.fixture
def param(tmp_path, tiny_instance):
    path = tmp_path / "tiny.param"
    path.write_text(format_param(tiny_instance))
    return path


@pytest.fixture
def rewritten(tmp_path):
    out = tmp_path / "rewritten.essence"
    assert main(["rewrite", RELATION_SPEC, "-o", str(out)]) == 0
    return out


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


# ------------------------------------------------------------------ rewrite


def test_rewrite_to_stdout(capsys):
    assert main(["rewrite", RELATION_SPEC]) == 0
    captured = capsys.readouterr()
    assert "find colouring : function (total) vertices --> coloursSet" in captured.out
    assert "rule applications" in captured.err


def test_rewrite_emits_host_graphs(tmp_path):
    out = tmp_path / "out.essence"
    assert main(["rewrite", RELATION_SPEC, "-o", str(out), "--emit-host"]) == 0
    before = read_host_graph((tmp_path / "out.before.host").read_text())
    after = read_host_graph((tmp_path / "out.after.host").read_text())
    assert len(after) < len(before)


def test_rewrite_parse_error(tmp_path, capsys):
    bad = write(tmp_path, "bad.essence", "find x : bool\n")
    assert main(["rewrite", str(bad)]) == 1
    assert "1:10" in capsys.readouterr().err


def test_rewrite_missing_file(tmp_path):
    assert main(["rewrite", str(tmp_path / "nope.essence")]) == 1


def test_broken_rule_file_reports_position(tmp_path, capsys):
    broken = write(tmp_path, "broken.gp2r", "r(x:any)\n[ (a, x) | ] => [ (a, x) \n")
    assert main(["rewrite", RELATION_SPEC, "--rules", str(broken)]) == 1
    assert "broken.gp2r:3:" in capsys.readouterr().err


def test_stuck_stage_is_named(tmp_path, capsys):
    never = write(tmp_path, "never.gp2r", 'glueAuxDomain()\n[ (a, "no such label") | ] => [ | ] interface = {}\n')
    assert main(["rewrite", RELATION_SPEC, "--rules", str(never)]) == 2
    assert "stage Glue" in capsys.readouterr().err


def test_fuel_exhaustion_exit(capsys):
    assert main(["rewrite", RELATION_SPEC, "--fuel", "5"]) == 2
    assert "stage Propagate" in capsys.readouterr().err


def test_not_applicable_copies_input(tmp_path, rewritten, capsys):
    again = tmp_path / "again.essence"
    assert main(["rewrite", str(rewritten), "-o", str(again)]) == 3
    assert again.read_text() == rewritten.read_text()
    assert "notice" in capsys.readouterr().err


def test_rules_dir_override(tmp_path, monkeypatch):
    rules_dir = tmp_path / "rules"
    assert main(["export-rules", str(rules_dir)]) == 0
    assert sorted(p.name for p in rules_dir.iterdir()) == sorted(f"{n}.gp2r" for n, _ in builtin_rule_files())
    glue = rules_dir / "glue.gp2r"
    glue.write_text(glue.read_text().replace('(i, "=")', '(i, "!=")'))
    monkeypatch.setenv("SPECREWRITER_RULES_DIR", str(rules_dir))
    out = tmp_path / "out.essence"
    assert main(["rewrite", RELATION_SPEC, "-o", str(out)]) == 0
    assert "!= {}" in out.read_text()


# -------------------------------------------------------------------- solve


def test_solve_writes_numbered_solutions(tmp_path, param, capsys):
    out = tmp_path / "sols"
    assert main(["solve", RELATION_SPEC, str(param), "-o", str(out)]) == 0
    assert "2 solutions" in capsys.readouterr().out
    files = sorted(p.name for p in out.iterdir())
    assert files == ["tiny-000001.solution", "tiny-000002.solution"]
    assert parse_param((out / files[0]).read_text()) == {"colouring": RelationV({(0, 1), (1, 2)})}


def test_solve_limit(tmp_path, param, capsys):
    assert main(["solve", RELATION_SPEC, str(param), "--limit", "1", "-o", str(tmp_path / "s")]) == 0
    assert "1 solution" in capsys.readouterr().out


def test_solve_unsatisfiable(tmp_path, capsys):
    unsat = write(tmp_path, "unsat.param", format_param(
        {"n": 2, "edges": RelationV({(0, 1), (1, 0)}), "numberColours": 1, "coloursPerNode": 1}))
    assert main(["solve", RELATION_SPEC, str(unsat)]) == 0
    assert "0 solutions" in capsys.readouterr().out


def test_solve_too_large(tmp_path, capsys):
    edges = {(u, (u + 1) % 40) for u in range(40)}
    huge = write(tmp_path, "huge.param", format_param(
        {"n": 40, "edges": RelationV(edges | {(v, u) for u, v in edges}), "numberColours": 8, "coloursPerNode": 2}))
    assert main(["solve", RELATION_SPEC, str(huge)]) == 4
    assert "too large" in capsys.readouterr().err


def test_solve_invalid_instance(tmp_path):
    bad = write(tmp_path, "bad.param", format_param(
        {"n": 2, "edges": RelationV({(0, 0)}), "numberColours": 1, "coloursPerNode": 1}))
    assert main(["solve", RELATION_SPEC, str(bad)]) == 1


# ---------------------------------------------------------------- converter


def test_gen_converter(tmp_path, rewritten, relation_spec):
    out = tmp_path / "conv.essence"
    assert main(["gen-converter", RELATION_SPEC, str(rewritten), "-o", str(out)]) == 0
    conv = parse_spec(out.read_text())
    assert conv.finds[0].domain == relation_spec.finds[0].domain


def test_gen_converter_not_needed():
    assert main(["gen-converter", RELATION_SPEC, RELATION_SPEC]) == 3


def test_convert_and_validate(tmp_path, rewritten, param, capsys):
    sols = tmp_path / "rs"
    assert main(["solve", str(rewritten), str(param), "-o", str(sols)]) == 0
    converted = tmp_path / "converted.solution"
    solution = sols / "tiny-000001.solution"
    assert main(["convert", RELATION_SPEC, str(rewritten), str(solution), str(param), "-o", str(converted)]) == 0
    assert parse_param(converted.read_text()) == {"colouring": RelationV({(0, 1), (1, 2)})}
    capsys.readouterr()
    assert main(["validate", RELATION_SPEC, str(param), str(converted)]) == 0
    assert capsys.readouterr().out.strip() == "Valid"


def test_validate_invalid(tmp_path, param, capsys):
    wrong = write(tmp_path, "wrong.solution", "letting colouring be relation((0, 1), (1, 1))\n")
    assert main(["validate", RELATION_SPEC, str(param), str(wrong)]) == 5
    out = capsys.readouterr().out
    assert out.startswith("Invalid") and "failing: forAll (u,v) in edges" in out


def test_convert_missing_find(tmp_path, rewritten):
    empty = write(tmp_path, "empty.solution", "letting other be 1\n")
    assert main(["convert", RELATION_SPEC, str(rewritten), str(empty)]) == 1


# ---------------------------------------------------------------- instances


def test_gen_instances_grid(tmp_path, capsys):
    grid = write(tmp_path, "grid.json", '{"n_values": [2, 3], "edge_density_percents": [50], "cpn_values": [1]}')
    out = tmp_path / "inst"
    assert main(["gen-instances", "--grid", str(grid), "--seed", "3", "-o", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["n2_d50_cpn1_m1.param", "n3_d50_cpn1_m1.param"]


def test_gen_instances_edges(tmp_path):
    out = tmp_path / "d.param"
    assert main(["gen-instances", "--edges", str(DATA / "dodecahedral.edges"), "--number-colours", "15",
                 "--cpn", "5", "-o", str(out)]) == 0
    values = parse_param(out.read_text())
    assert values["n"] == 20 and len(values["edges"]) == 60 and values["coloursPerNode"] == 5


def test_gen_instances_errors(tmp_path):
    assert main(["gen-instances", "--edges", str(DATA / "dodecahedral.edges")]) == 1
    assert main(["gen-instances"]) == 1
    loop = write(tmp_path, "loop.edges", "0 0\n")
    assert main(["gen-instances", "--edges", str(loop), "--number-colours", "1", "--cpn", "1"]) == 1
    grid = write(tmp_path, "grid.json", '{"n_values": [2]}')
    assert main(["gen-instances", "--grid", str(grid)]) == 1


# ------------------------------------------------------------------- verify


def test_verify_grid_passes(tmp_path, capsys):
    grid = write(tmp_path, "grid.json",
                 '{"n_values": [2, 3, 4], "edge_density_percents": [50], "cpn_values": [1, 2], '
                 '"colours_multipliers": [2]}')
    assert main(["verify", RELATION_SPEC, "--grid", str(grid), "--seed", "1"]) == 0
    out = capsys.readouterr().out
    records = [line for line in out.splitlines() if line.startswith("record ")]
    assert len(records) == 6
    assert all("bijection=pass" in r and "validation=pass" in r for r in records)
    assert "summary records=6 passed=6 failed=0" in out


def test_verify_report_is_seed_determined(tmp_path, capsys):
    grid = write(tmp_path, "grid.json", '{"n_values": [3], "edge_density_percents": [50], "cpn_values": [1]}')

    def counts():
        main(["verify", RELATION_SPEC, "--grid", str(grid), "--seed", "5"])
        lines = capsys.readouterr().out.splitlines()
        return [" ".join(f for f in line.split() if not f.split("=")[0].endswith("_ms"))
                for line in lines if line.startswith("record ")]

    assert counts() == counts()


def test_verify_empty_grid(tmp_path, capsys):
    grid = write(tmp_path, "grid.json", '{"n_values": [], "edge_density_percents": [50], "cpn_values": [1]}')
    assert main(["verify", RELATION_SPEC, "--grid", str(grid)]) == 0
    assert "summary records=0" in capsys.readouterr().out


def test_verify_catches_corrupted_rules(tmp_path, param, capsys):
    glue = dict(builtin_rule_files())["glue"].replace('(i, "=")', '(i, "!=")')
    mutant = write(tmp_path, "glue.gp2r", glue)
    assert main(["verify", RELATION_SPEC, str(param), "--rules", str(mutant)]) == 5
    out = capsys.readouterr().out
    assert "validation=fail" in out
    assert "counterexample=relation((0, 1), (1, 1))" in out


def test_verify_skips_too_large(tmp_path, capsys):
    big = write(tmp_path, "big.param", format_param(
        {"n": 4, "edges": RelationV({(0, 1), (1, 0)}), "numberColours": 4, "coloursPerNode": 2}))
    assert main(["verify", RELATION_SPEC, str(big), "--max-ground", "100"]) == 0
    assert "skipped(TooLarge)" in capsys.readouterr().out


def test_verify_not_applicable(rewritten):
    assert main(["verify", str(rewritten), "--grid", "unused.json"]) == 3


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "specrewriter", "rewrite", RELATION_SPEC],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert parse_spec(result.stdout).finds[0].name == "colouring"
