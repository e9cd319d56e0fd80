import pytest

from djasp.errors import ArityError, ParseError
from djasp.model import BuiltinKind, Constant, Variable
from djasp.parser import (
    format_program,
    parse_literal_set,
    parse_program,
    parse_query,
    parse_source,
)


def test_guess_rule_shape():
    prog = parse_program("inPath(X,Y) v outPath(X,Y) :- arc(X,Y).")
    assert len(prog.rules) == 1
    rule = prog.rules[0]
    assert len(rule.head) == 2
    assert [l.atom.predicate for l in rule.head] == ["inPath", "outPath"]
    assert [l.atom.predicate for l in rule.pos_body] == ["arc"]
    assert not rule.neg_body


def test_constraint_shape():
    rule = parse_program(":- node(X), not reached(X).").rules[0]
    assert rule.head == ()
    assert [l.atom.predicate for l in rule.pos_body] == ["node"]
    assert [l.atom.predicate for l in rule.neg_body] == ["reached"]


def test_fact_without_arrow():
    rule = parse_program("a.").rules[0]
    assert rule.is_fact
    assert rule.head[0].atom.predicate == "a"


def test_facts_preserve_source_order():
    prog = parse_program("b. a. c :- a.")
    assert [r.head[0].atom.predicate for r in prog.rules] == ["b", "a", "c"]


def test_query_ground():
    q = parse_query("strat(c)?")
    assert len(q.conjuncts) == 1
    assert str(q) == "strat(c)?"
    assert q.is_ground()


def test_query_shared_variable():
    q = parse_query("p(X), q(X)?")
    assert q.variables() == ["X"]
    assert len(q.conjuncts) == 2


def test_query_empty_is_error():
    with pytest.raises(ParseError):
        parse_query("?")


def test_query_missing_terminator():
    with pytest.raises(ParseError):
        parse_query("p(X), q(X)")


def test_query_with_default_negation():
    q = parse_query("p(X), not q(X)?")
    assert [c.default_negated for c in q.conjuncts] == [False, True]


def test_query_starting_with_default_negation():
    q = parse_query("not a?")
    assert [c.default_negated for c in q.conjuncts] == [True]


def test_query_in_rule_stream():
    prog, q = parse_source("a v b. a?")
    assert len(prog.rules) == 1
    assert q is not None


def test_at_most_one_query():
    with pytest.raises(ParseError, match="multiple queries"):
        parse_source("a? b?")


def test_neq_synonyms():
    prog = parse_program("p :- q(X), r(Y), X <> Y. p :- q(X), r(Y), X != Y.")
    kinds = [r.builtins[0].kind for r in prog.rules]
    assert kinds == [BuiltinKind.NE, BuiltinKind.NE]


def test_disjunction_bar_synonym():
    a = parse_program("a v b v c.")
    b = parse_program("a | b | c.")
    assert format_program(a) == format_program(b)


def test_v_still_usable_as_name():
    prog = parse_program("v(a). q(X) :- v(X). p v v(b).")
    assert prog.rules[0].head[0].atom.predicate == "v"
    assert [l.atom.predicate for l in prog.rules[2].head] == ["p", "v"]


def test_anonymous_variables_are_fresh():
    rule = parse_program("p :- q(_,_).").rules[0]
    t1, t2 = rule.pos_body[0].atom.args
    assert isinstance(t1, Variable) and isinstance(t2, Variable)
    assert t1.name != t2.name
    assert str(t1) == str(t2) == "_"


def test_arith_sugar():
    rule = parse_program("p(Z) :- q(X), Z = X + X.").rules[0]
    b = rule.builtins[0]
    assert b.kind is BuiltinKind.PLUS
    # stored inputs-first: (X, X, Z)
    assert [t.name for t in b.args] == ["X", "X", "Z"]


def test_times_and_succ_and_int():
    prog = parse_program(
        "p(Z) :- q(X), Z = X * X. r(Y) :- #succ(X,Y), #int(X).")
    assert prog.rules[0].builtins[0].kind is BuiltinKind.TIMES
    kinds = {b.kind for b in prog.rules[1].builtins}
    assert kinds == {BuiltinKind.SUCC, BuiltinKind.INT_CHECK}


def test_comparison_between_constants():
    rule = parse_program("p :- a < b.").rules[0]
    assert rule.builtins[0].kind is BuiltinKind.LT
    assert rule.builtins[0].args == (Constant("a"), Constant("b"))


def test_strong_negation_forms():
    rule = parse_program("-p(1,c) :- q, not -r.").rules[0]
    assert rule.head[0].strongly_negated
    assert rule.neg_body[0].strongly_negated


def test_arity_clash_is_arity_error():
    with pytest.raises(ArityError) as exc:
        parse_program("p(a). p(a,b).")
    assert exc.value.span.line == 1


def test_parse_error_carries_span():
    with pytest.raises(ParseError) as exc:
        parse_program("p(a).\nq(a,.\n")
    assert exc.value.span.line == 2
    assert exc.value.span.column >= 5


def test_unexpected_character():
    with pytest.raises(ParseError, match="unexpected character"):
        parse_program("p :- q & r.")


def test_unknown_builtin():
    with pytest.raises(ParseError, match="unknown built-in"):
        parse_program("p :- #foo(X).")


def test_comments_and_whitespace():
    prog = parse_program("% leading comment\n  a.  % trailing\n\n b.\n")
    assert len(prog.rules) == 2


def test_multi_segment_spans():
    prog, _ = parse_source([("one.dl", "a.\n"), ("two.dl", "b.\nc.\n")])
    spans = [r.span for r in prog.rules]
    assert (spans[0].file, spans[0].line) == ("one.dl", 1)
    assert (spans[1].file, spans[1].line) == ("two.dl", 1)
    assert (spans[2].file, spans[2].line) == ("two.dl", 2)


ROUND_TRIP_SOURCES = [
    "a v b :- c, not d.",
    "inPath(X,Y) v outPath(X,Y) :- arc(X,Y).",
    ":- inPath(X,Y), inPath(X,Y1), Y <> Y1.",
    ":- start(Y), inPath(_,Y).",
    "p(Z) :- q(X), Z = X + X, X < 3.",
    "r(Y) :- #succ(X,Y), #int(X).",
    "-p(1,c) v q :- not -r, s(2).",
    "a.",
    "p(0). p(12). p(c1).",
]


@pytest.mark.parametrize("source", ROUND_TRIP_SOURCES)
def test_pretty_print_round_trip(source):
    once = format_program(parse_program(source))
    twice = format_program(parse_program(once))
    assert once == twice


def test_pretty_print_round_trip_randomized():
    from random import Random

    from helpers import random_safe_program_text

    rng = Random(71)
    for _ in range(40):
        source = random_safe_program_text(rng)
        once = format_program(parse_program(source))
        twice = format_program(parse_program(once))
        assert once == twice


def test_literal_set_parsing():
    lits = parse_literal_set("{a, -p(b,1)}")
    assert {str(l) for l in lits} == {"a", "-p(b,1)"}
    assert parse_literal_set("{}") == frozenset()


def test_literal_set_rejects_variables():
    with pytest.raises(ParseError, match="ground"):
        parse_literal_set("{p(X)}")


def test_not_is_reserved():
    with pytest.raises(ParseError):
        parse_program("not. a.")


def test_integers_and_symbols_distinct():
    prog = parse_program("p(1). p(c).")
    args = [r.head[0].atom.args[0] for r in prog.rules]
    assert args[0] == Constant(1)
    assert args[1] == Constant("c")
    assert args[0] != args[1]
