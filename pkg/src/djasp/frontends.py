"""Brave and cautious query answering over the enumeration stream.

A ground query is brave-true when some answer set satisfies every conjunct
and cautious-true when all of them do (vacuously true when there are no
answer sets; the answer carries an explicit flag for that case).  Non-ground
queries return witnessing substitutions: query variables range over the
Herbrand universe, and per answer set the satisfying substitutions are
computed by matching the query against it; brave takes the union, cautious
the intersection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .grounding import GroundProgram, encode_constant, ground_program
from .model import Constant, Literal, Program, Variable, herbrand_universe
from .parser import Query
from .solver import enumerate_answer_sets


@dataclass(frozen=True)
class QueryAnswer:
    mode: str                     # "brave" | "cautious"
    variables: tuple[str, ...]    # empty for ground queries
    result: bool | None           # ground queries only
    substitutions: tuple[tuple[Constant, ...], ...] | None
    witness: frozenset[Literal] | None
    no_answer_sets: bool = False

    @property
    def is_ground(self) -> bool:
        return not self.variables


def brave(program: Program, query: Query, *, want_witness: bool = False,
          early_stop: bool = True) -> QueryAnswer:
    """True / the union of substitutions over some answer set."""
    return _answer(program, query, "brave", want_witness, early_stop)


def cautious(program: Program, query: Query, *, want_witness: bool = False,
             early_stop: bool = True) -> QueryAnswer:
    """True / the intersection of substitutions over all answer sets;
    vacuously true when the program has no answer set."""
    return _answer(program, query, "cautious", want_witness, early_stop)


def _answer(program: Program, query: Query, mode: str,
            want_witness: bool, early_stop: bool) -> QueryAnswer:
    gp = ground_program(program)
    table = program.table
    qvars = tuple(query.variables())
    if not qvars:
        return _ground_answer(program, gp, query, mode, want_witness,
                              early_stop)

    universe = sorted(
        (encode_constant(c, table) for c in herbrand_universe(program)),
        key=lambda code: _code_key(code, table))
    collected: set[tuple[int, ...]] | None = None
    saw_any = False
    for x in enumerate_answer_sets(gp):
        saw_any = True
        thetas = _substitutions(query, qvars, gp, program, x, universe)
        if collected is None:
            collected = set(thetas)
        elif mode == "brave":
            collected |= thetas
        else:
            collected &= thetas
    if not saw_any:
        # brave over nothing: empty; cautious over nothing: everything
        collected = set() if mode == "brave" else {
            combo for combo in itertools.product(universe, repeat=len(qvars))}
    assert collected is not None
    decoded = sorted(collected, key=lambda c: tuple(_code_key(v, table)
                                                    for v in c))
    subs = tuple(tuple(_decode(v, table) for v in combo) for combo in decoded)
    return QueryAnswer(mode, qvars, None, subs, None,
                       no_answer_sets=not saw_any)


def _ground_answer(program: Program, gp: GroundProgram, query: Query,
                   mode: str, want_witness: bool,
                   early_stop: bool) -> QueryAnswer:
    want_hit = mode == "brave"
    hit_result = want_hit  # brave: first satisfying set proves true;
    #                        cautious: first violating set proves false
    saw_any = False
    decisive: frozenset[int] | None = None
    for x in enumerate_answer_sets(gp):
        saw_any = True
        if _satisfies(query, gp, program, x) == want_hit:
            decisive = x
            if early_stop:
                break
    if decisive is not None:
        witness = _decode_set(gp, decisive) if want_witness else None
        return QueryAnswer(mode, (), hit_result, None, witness)
    return QueryAnswer(mode, (), not hit_result, None, None,
                       no_answer_sets=not saw_any)


def _code_key(code: int, table):
    if code >= 0:
        return (0, code, "")
    return (1, 0, table.symbol_names[-code - 1])


def _decode(code: int, table) -> Constant:
    if code >= 0:
        return Constant(code)
    return Constant(table.symbol_names[-code - 1])


def _decode_set(gp: GroundProgram, x: frozenset[int]) -> frozenset[Literal]:
    return frozenset(gp.table.decode(l) for l in x)


def _encode_ground_atom(lit: Literal, program: Program):
    """Literal table key for a ground literal, or None when the predicate or
    a constant never occurs in the program."""
    table = program.table
    pid = table.predicate_id(lit.atom.predicate)
    if pid is None or table.predicate_arities[pid] != lit.atom.arity:
        return None
    args = []
    for t in lit.atom.args:
        if isinstance(t.value, int):
            args.append(t.value)
        else:
            sid = table.symbol_id(t.value)
            if sid is None:
                return None
            args.append(-sid - 1)
    return (pid, tuple(args), lit.strongly_negated)


def _satisfies(query: Query, gp: GroundProgram, program: Program,
               x: frozenset[int]) -> bool:
    for conj in query.conjuncts:
        key = _encode_ground_atom(conj.literal, program)
        lid = gp.table.lookup(key) if key is not None else None
        holds = lid is not None and lid in x
        if holds == conj.default_negated:
            return False
    return True


def _substitutions(query: Query, qvars: tuple[str, ...], gp: GroundProgram,
                   program: Program, x: frozenset[int],
                   universe: list[int]) -> set[tuple[int, ...]]:
    table = program.table
    positive = [c.literal for c in query.conjuncts if not c.default_negated]
    negated = [c.literal for c in query.conjuncts if c.default_negated]

    # index the answer set by (predicate, sign)
    index: dict[tuple[int, bool], list[tuple[int, ...]]] = {}
    keys = gp.table.keys
    for lid in sorted(x):
        pid, args, sneg = keys[lid]
        index.setdefault((pid, sneg), []).append(args)

    def term_code(t, subst):
        if isinstance(t, Variable):
            return subst.get(t.name)
        if isinstance(t.value, int):
            return t.value
        sid = table.symbol_id(t.value)
        return None if sid is None else -sid - 1

    results: set[tuple[int, ...]] = set()

    def naf_ok(subst) -> bool:
        for lit in negated:
            pid = table.predicate_id(lit.atom.predicate)
            if pid is None or table.predicate_arities[pid] != lit.atom.arity:
                continue
            args = []
            for t in lit.atom.args:
                code = term_code(t, subst)
                if code is None:
                    break
                args.append(code)
            else:
                lid = gp.table.lookup((pid, tuple(args),
                                       lit.strongly_negated))
                if lid is not None and lid in x:
                    return False
        return True

    def fill_rest(subst) -> None:
        unbound = [v for v in qvars if v not in subst]
        for combo in itertools.product(universe, repeat=len(unbound)):
            for v, code in zip(unbound, combo):
                subst[v] = code
            if naf_ok(subst):
                results.add(tuple(subst[v] for v in qvars))
        for v in unbound:
            subst.pop(v, None)

    def match(i: int, subst: dict) -> None:
        if i == len(positive):
            fill_rest(subst)
            return
        lit = positive[i]
        pid = table.predicate_id(lit.atom.predicate)
        if pid is None or table.predicate_arities[pid] != lit.atom.arity:
            return
        for args in index.get((pid, lit.strongly_negated), ()):
            added = []
            ok = True
            for t, code in zip(lit.atom.args, args):
                if isinstance(t, Variable):
                    have = subst.get(t.name)
                    if have is None:
                        subst[t.name] = code
                        added.append(t.name)
                    elif have != code:
                        ok = False
                        break
                else:
                    want = term_code(t, subst)
                    if want != code:
                        ok = False
                        break
            if ok:
                match(i + 1, subst)
            for name in added:
                del subst[name]

    match(0, {})
    return results
