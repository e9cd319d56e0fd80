from random import Random

from djasp.frontends import brave, cautious
from djasp.grounding import ground_program
from djasp.model import Constant
from djasp.parser import parse_program, parse_query, parse_source
from djasp.solver import enumerate_answer_sets


def test_brave_ground_true_with_witness():
    answer = brave(parse_program("a v b."), parse_query("a?"),
                   want_witness=True)
    assert answer.result is True
    assert answer.witness is not None
    assert {str(l) for l in answer.witness} == {"a"}


def test_brave_ground_false_without_answer_sets():
    prog = parse_program("a. :- a.")
    answer = brave(prog, parse_query("a?"))
    assert answer.result is False
    assert answer.no_answer_sets


def test_brave_nonground_stratcomp_witnesses():
    prog = parse_program(
        "strat(Y) v strat(Z) :- produced_by(X,Y,Z).\n"
        "strat(W) :- controlled_by(W,X,Y,Z), strat(X), strat(Y), strat(Z).\n"
        "produced_by(p1,c1,c2).")
    answer = brave(prog, parse_query("strat(X)?"))
    assert answer.variables == ("X",)
    assert answer.substitutions == ((Constant("c1"),), (Constant("c2"),))


def test_cautious_ground_false_with_counterexample():
    answer = cautious(parse_program("a v b."), parse_query("a?"),
                      want_witness=True)
    assert answer.result is False
    assert {str(l) for l in answer.witness} == {"b"}


def test_cautious_true_when_forced():
    # {b} is not closed under `a :- b.`, so {a} is the only answer set
    prog = parse_program("a v b. a :- b.")
    assert cautious(prog, parse_query("a?")).result is True


def test_cautious_vacuous_truth_is_flagged():
    prog = parse_program("a. :- a.")
    answer = cautious(prog, parse_query("zork?"))
    assert answer.result is True
    assert answer.no_answer_sets


def test_unknown_predicate_in_query():
    prog = parse_program("a v b.")
    assert brave(prog, parse_query("zork?")).result is False
    assert cautious(prog, parse_query("zork?")).result is False


def test_query_with_default_negation_conjunct():
    prog = parse_program("a v b. c.")
    assert brave(prog, parse_query("c, not a?")).result is True
    assert cautious(prog, parse_query("c, not a?")).result is False


def test_nonground_cautious_intersection():
    prog = parse_program("p(1). p(2) v q. ")
    answer = cautious(prog, parse_query("p(X)?"))
    assert answer.substitutions == ((Constant(1),),)


def test_nonground_query_constants_restrict():
    prog = parse_program("edge(a,b). edge(b,c).")
    answer = brave(prog, parse_query("edge(a,X)?"))
    assert answer.substitutions == ((Constant("b"),),)


def test_multi_variable_substitutions_sorted():
    prog = parse_program("edge(b,c). edge(a,b).")
    answer = brave(prog, parse_query("edge(X,Y)?"))
    assert answer.substitutions == (
        (Constant("a"), Constant("b")), (Constant("b"), Constant("c")))


def test_duality_on_ground_queries():
    rng = Random(19)
    from helpers import random_safe_program_text

    for _ in range(40):
        text = random_safe_program_text(rng)
        prog = parse_program(text)
        if not list(enumerate_answer_sets(ground_program(prog))):
            continue
        q = parse_query("t(c1)?")
        if cautious(prog, q).result:
            assert brave(prog, q).result


def test_brave_cautious_equal_union_intersection():
    rng = Random(47)
    from helpers import random_safe_program_text

    query = parse_query("t(X)?")
    for _ in range(40):
        text = random_safe_program_text(rng)
        prog = parse_program(text)
        gp = ground_program(prog)
        per_set = []
        for x in enumerate_answer_sets(gp):
            names = {gp.table.format(l) for l in x}
            per_set.append({n[2:-1] for n in names
                            if n.startswith("t(") and not n.startswith("-")})
        b = {c[0].value for c in brave(prog, query).substitutions}
        assert b == set().union(*per_set) if per_set else b == set()
        if per_set:
            c = {c[0].value for c in cautious(prog, query).substitutions}
            assert c == set.intersection(*per_set)


def test_early_stop_equals_full_enumeration():
    rng = Random(53)
    from helpers import random_safe_program_text

    query = parse_query("t(c1)?")
    for _ in range(30):
        prog = parse_program(random_safe_program_text(rng))
        fast = brave(prog, query, early_stop=True)
        slow = brave(prog, query, early_stop=False)
        assert fast.result == slow.result
        fast_c = cautious(prog, query, early_stop=True)
        slow_c = cautious(prog, query, early_stop=False)
        assert fast_c.result == slow_c.result


def test_query_parsed_from_program_stream():
    prog, query = parse_source("a v b. a?")
    assert query is not None
    assert brave(prog, query).result is True
