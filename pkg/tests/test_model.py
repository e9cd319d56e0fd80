from hypothesis import given
from hypothesis import strategies as st

from djasp.model import (
    Atom,
    Constant,
    Literal,
    complement,
    herbrand_base,
    herbrand_universe,
    is_consistent,
)
from djasp.parser import parse_program


def lit(name, *args, neg=False):
    return Literal(Atom(name, tuple(Constant(a) for a in args)), neg)


def test_complement_definition():
    assert complement(lit("a")) == lit("a", neg=True)
    assert complement(lit("p", 1, "c", neg=True)) == lit("p", 1, "c")


def test_complement_involution_example():
    q = lit("q")
    assert complement(complement(q)) == q


literals = st.builds(
    Literal,
    st.builds(
        Atom,
        st.sampled_from(["p", "q", "r"]),
        st.tuples(st.one_of(st.integers(0, 9).map(Constant),
                            st.sampled_from(["a", "b"]).map(Constant))),
    ),
    st.booleans(),
)


@given(literals)
def test_complement_is_involution_and_flips_sign_only(l):
    c = complement(l)
    assert c != l
    assert c.atom == l.atom
    assert complement(c) == l


def test_is_consistent_examples():
    assert is_consistent({lit("a"), lit("b")})
    assert not is_consistent({lit("a"), lit("a", neg=True)})
    assert is_consistent(set())


@given(st.sets(literals, max_size=8))
def test_consistency_monotone_downward(s):
    if is_consistent(s):
        for drop in s:
            assert is_consistent(s - {drop})


def test_herbrand_universe_reads_constants():
    prog = parse_program("p(a). q(b,a).")
    assert herbrand_universe(prog) == {Constant("a"), Constant("b")}


def test_herbrand_universe_integer_builtin_range():
    prog = parse_program("p(X) :- #int(X).", max_int=2)
    assert herbrand_universe(prog) == {Constant(0), Constant(1), Constant(2)}


def test_herbrand_universe_empty_program():
    prog = parse_program("")
    assert herbrand_universe(prog) == frozenset()


def test_herbrand_universe_no_integer_range_without_trigger():
    # no integer constant or integer built-in: the 0..max_int range stays out
    prog = parse_program("p(a).", max_int=7)
    assert herbrand_universe(prog) == {Constant("a")}


def test_herbrand_universe_integer_constant_triggers_range():
    prog = parse_program("p(5).", max_int=3)
    assert herbrand_universe(prog) == {
        Constant(5), Constant(0), Constant(1), Constant(2), Constant(3)}


def test_herbrand_base_single_atom():
    prog = parse_program("p(a).")
    assert herbrand_base(prog) == {lit("p", "a"), lit("p", "a", neg=True)}


def test_herbrand_base_binary_predicate():
    prog = parse_program("q(a,b).")
    base = herbrand_base(prog)
    assert len(base) == 8  # 2^2 tuples, both signs
    assert lit("q", "b", "a") in base
    assert lit("q", "a", "a", neg=True) in base


def test_herbrand_base_empty_program():
    assert herbrand_base(parse_program("")) == frozenset()


def test_herbrand_base_cardinality_formula():
    prog = parse_program("p(a). q(b,a). r. s(a,b).")
    universe = herbrand_universe(prog)
    base = herbrand_base(prog)
    expected = 2 * sum(len(universe) ** arity
                       for arity in prog.predicates().values())
    assert len(base) == expected


def test_constant_order_integers_before_symbols():
    keys = [Constant(2).order_key(), Constant(10).order_key(),
            Constant("a").order_key(), Constant("b").order_key()]
    assert keys == sorted(keys)
    assert Constant(10).order_key() < Constant("a").order_key()
