import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read
from generators import random_pair
from oracles import application_violations, brute_force_matches, match_tuple
from specrewriter.engine import (Call, FuelExhausted, InterfaceMismatch, Loop, RuleSet, Stuck, UndeclaredVariable,
                                 UnknownRule, apply_rule, find_matches, first_match, format_program,
                                 parse_rule_file, run)
from specrewriter.errors import ParseError
from specrewriter.graph import LabeledGraph, Mark, encode

RULES = """
\\\\ toggles used by the program tests
redden(x:any)
[ (a, x) | ] => [ (a, x # red) | ] interface = {a}

unredden(x:any)
[ (a, x # red) | ] => [ (a, x) | ] interface = {a}

dropB()
[ (a, "b") | ] => [ | ] interface = {}

grow()
[ (a, "a") | ] => [ (a, "a") (b, "a") | (e, a, b, 1) ] interface = {a}

never()
[ (a, "zzz") | ] => [ | ] interface = {}

tagInt(x:int)
[ (a, x) | ] => [ (a, x # red) | ] interface = {a}

suffix(s:string)
[ (a, s) | ] => [ (a, s."!" # red) | ] interface = {a}

anyMark(x:any)
[ (a, x # any) | ] => [ | ] interface = {}
"""


@pytest.fixture
def rules():
    return parse_rule_file(RULES)


def host(*labels, edges=()):
    return LabeledGraph.build(list(enumerate(labels)), [(i, s, t, lab) for i, (s, t, lab) in enumerate(edges)])


# ----------------------------------------------------------------- parsing


def test_tagging_rule_parses_verbatim():
    rules = parse_rule_file(read("tag_relation_rule.gp2r"))
    rule = rules.rules["tagRelationDecisionVariable"]
    assert rule.params == (("specName", "string"), ("decisionVariableName", "string"), ("findPos", "int"),
                           ("n", "int"))
    assert rule.unused_params == ("n",)
    assert rule.interface == {"n0", "n1", "n2", "n3"}
    assert rule.preserved_edges == {"e1", "e2", "e3"}
    assert format_program(rules.main) == "tagRelationDecisionVariable"


@pytest.mark.parametrize("text, error, fragment", [
    ("r(x:any)\n[ (a, y) | ] => [ (a, y) | ] interface = {a}", UndeclaredVariable, "'y'"),
    ("r(x:any)\n[ (a, 1) | ] => [ (a, x) | ] interface = {a}", UndeclaredVariable, "not bound"),
    ("r(x:any)\n[ (a, x) | ] => [ (b, x) | ] interface = {a}", InterfaceMismatch, "'a'"),
    ("r(x:any)\n[ (a, x:x) | ] => [ (a, x) | ] interface = {a}", ParseError, "list labels"),
    ("r(x:any)\n[ (a, x) | ] => [ (a, x # any) | ] interface = {a}", ParseError, "concrete mark"),
    ("r(x:any)\n[ (a, x) (a, x) | ] => [ (a, x) | ] interface = {a}", ParseError, "duplicate"),
    ("r(x:int)\n[ (a, x) | ] => [ (a, x.\"s\") | ] interface = {a}", ParseError, "concatenate"),
    ("Main = if r then r\nr(x:any)\n[ (a, x) | ] => [ (a, x) | ] interface = {a}", ParseError, "'if'"),
])
def test_rule_errors(text, error, fragment):
    with pytest.raises(error, match=fragment) as info:
        parse_rule_file(text)
    assert info.value.line >= 1


def test_unknown_rule_in_program():
    rules = parse_rule_file("Main = foo!\nr(x:any)\n[ (a, x) | ] => [ (a, x) | ] interface = {a}")
    with pytest.raises(UnknownRule, match="foo"):
        rules.check()


def test_program_syntax_round_trip():
    text = "Main = (r; try s)!; {r, s}\nr(x:any)\n[ (a, x) | ] => [ (a, x) | ] interface = {a}\n" \
           "s()\n[ (a, 1) | ] => [ | ] interface = {}"
    assert format_program(parse_rule_file(text).main) == "(r; try s)!; {r, s}"


def test_merge_later_wins(rules):
    override = parse_rule_file('redden()\n[ (a, "q") | ] => [ | ] interface = {}')
    merged = rules.merge(override)
    assert merged.rules["redden"] is override.rules["redden"]
    assert merged.rules["grow"] is rules.rules["grow"]


# ---------------------------------------------------------------- matching


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_matcher_agrees_with_brute_force(rng):
    rule, g = random_pair(rng)
    found = find_matches(rule, g)
    assert {match_tuple(rule, m) for m in found} == brute_force_matches(rule, g)
    assert len({match_tuple(rule, m) for m in found}) == len(found)


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_application_invariants(rng):
    rule, g = random_pair(rng)
    snapshot = g.copy()
    for m in find_matches(rule, g):
        result = apply_rule(rule, m, g)
        assert application_violations(rule, m, g, result) == []
    assert g == snapshot  # the input host is never modified


def test_matches_are_canonically_ordered(rules):
    g = host("x", "y", "z")
    matches = find_matches(rules.rules["redden"], g)
    assert [m.nodes["a"] for m in matches] == [0, 1, 2]
    assert first_match(rules.rules["redden"], g).nodes["a"] == 0


def test_dangling_condition_blocks_deletion(rules):
    g = host("b", "c", edges=[(1, 0, 1)])
    assert find_matches(rules.rules["dropB"], g) == []
    g.remove_edge(0)
    assert len(find_matches(rules.rules["dropB"], g)) == 1


def test_label_types_are_exact(rules):
    g = host("1", 1)
    (m,) = find_matches(rules.rules["tagInt"], g)
    assert m.nodes["a"] == 1 and m.assignment == {"x": 1}


def test_marks(rules):
    g = host("a", "b")
    g.relabel(1, "b", Mark.RED)
    assert [m.nodes["a"] for m in find_matches(rules.rules["unredden"], g)] == [1]
    assert [m.nodes["a"] for m in find_matches(rules.rules["redden"], g)] == [0]
    assert len(find_matches(rules.rules["anyMark"], g)) == 2


def test_concatenated_label(rules):
    out = run(Call("suffix"), rules, host(3, "go"))
    assert out.nodes[1].label == "go!" and out.nodes[1].mark is Mark.RED


# ---------------------------------------------------------------- programs


def test_call_rewrites_first_match(rules):
    out = run("redden", rules, host("x", "y"))
    assert out.marked() == [0]


def test_stuck_reports_position(rules):
    rs = parse_rule_file(RULES + "\nMain = Inner\nInner = redden; never")
    with pytest.raises(Stuck) as info:
        run("Main", rs, host("x"))
    assert info.value.position == "Main/Inner/never"


def test_choice_takes_first_applicable(rules):
    rs = parse_rule_file(RULES + "\nMain = {never, dropB, redden}")
    out = run("Main", rs, host("b", "c"))
    assert sorted(out.nodes) == [1] and out.marked() == []


def test_loop_runs_to_fixpoint(rules):
    rs = parse_rule_file(RULES + "\nMain = redden!")
    out = run("Main", rs, host("x", "y", "z"))
    assert out.marked() == [0, 1, 2]


def test_failed_loop_iteration_rolls_back(rules):
    rs = parse_rule_file(RULES + "\nMain = (redden; dropB)!")
    # first iteration: redden x, drop b. Second: redden y, then dropB is stuck -> undo
    out = run("Main", rs, host("x", "b", "y"))
    assert sorted(out.nodes) == [0, 2]
    assert out.marked() == [0]


def test_try_rolls_back(rules):
    rs = parse_rule_file(RULES + "\nMain = try (redden; never)")
    g = host("x")
    assert run("Main", rs, g) == g


def test_loop_with_empty_body_step_stops():
    rs = parse_rule_file('r()\n[ (a, "q") | ] => [ | ] interface = {}\nMain = (try r)!')
    g = host("x")
    assert run("Main", rs, g) == g


def test_fuel_exhaustion(rules):
    with pytest.raises(FuelExhausted) as info:
        run(Loop(Call("grow")), rules, host("a"), fuel=25)
    assert info.value.fuel == 25 and info.value.position == "grow"


def test_fuel_is_exact(rules):
    rs = parse_rule_file(RULES + "\nMain = redden!")
    run("Main", rs, host("x", "y", "z"), fuel=3)
    with pytest.raises(FuelExhausted):
        run("Main", rs, host("x", "y", "z"), fuel=2)


def test_trace_records_stage(rules):
    rs = parse_rule_file(RULES + "\nMain = Paint\nPaint = redden!")
    trace = []
    run("Main", rs, host("x", "y"), trace=trace)
    assert [(a.stage, a.rule, a.nodes["a"]) for a in trace] == [("Paint", "redden", 0), ("Paint", "redden", 1)]


def test_runs_are_deterministic():
    rs = parse_rule_file(RULES + "\nMain = {grow, redden}; grow; grow; redden!")
    a = run("Main", rs, host("a", "b", "a"))
    b = run("Main", rs, host("a", "b", "a"))
    assert a == b


def test_empty_ruleset_stuck():
    with pytest.raises(Stuck):
        run("Main", RuleSet(), host("x"))


# ------------------------------------------------------------ small examples


def test_empty_rule_is_identity():
    rs = parse_rule_file("Main = r\nr()[|]=>[|] interface = {}")
    g = host("a", edges=[(0, 0, 1)])
    assert len(find_matches(rs.rules["r"], g)) == 1
    assert len(find_matches(rs.rules["r"], LabeledGraph())) == 1
    assert run("Main", rs, g) == g


def test_nonempty_pattern_on_empty_host(rules):
    assert find_matches(rules.rules["redden"], LabeledGraph()) == []


def test_tagging_rule_binds_find_position(relation_spec):
    rule = parse_rule_file(read("tag_relation_rule.gp2r")).rules["tagRelationDecisionVariable"]
    (m,) = find_matches(rule, encode(relation_spec))
    find_index = [d.name for d in relation_spec.declarations].index("colouring") + 1
    assert m.assignment == {"specName": "spec", "decisionVariableName": "colouring", "findPos": find_index}


DELETE_RED_CHILD = """
Main = deleteRedChild!
deleteRedChild(x, y:any; k:int)
[ (p, x # red) (c, y # red) | (e, p, c, k) ] => [ (p, x # red) | ] interface = {p}
"""


def test_red_chain_shrinks_to_one_node():
    rs = parse_rule_file(DELETE_RED_CHILD)
    chain = host("a", "b", "c", edges=[(0, 1, 1), (1, 2, 1)])
    for nid in chain.nodes:
        chain.relabel(nid, chain.nodes[nid].label, Mark.RED)
    out = run("Main", rs, chain)
    assert out.marked() == [0] and len(out.edges) == 0


def test_delete_leaf_removes_one_node_and_edge():
    rs = parse_rule_file('leaf(x:any)\n[ (p, "root") (c, x) | (e, p, c, 1) ] => [ (p, "root") | ] interface = {p}')
    g = host("root", "a", "b", edges=[(0, 1, 1), (0, 2, 2)])
    out = run("leaf", rs, g)
    assert (len(g) - len(out), len(g.edges) - len(out.edges)) == (1, 1)
