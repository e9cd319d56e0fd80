"""Shared test machinery: an independent naive-grounding oracle, brute-force
answer-set enumeration, and seeded random program generators.

Nothing here reuses the grounder's join engine or the solver's search: the
naive oracle substitutes every universe tuple and evaluates built-ins
directly, and brute force enumerates subsets of the head literals (any
answer set is contained in the heads of the ground program, since dropping
a never-derived literal preserves closure and minimality kills it).
"""

from __future__ import annotations

import itertools
from random import Random

from djasp.checker import is_answer_set
from djasp.grounding import GroundProgram, GroundRule, LiteralTable
from djasp.model import (
    Atom,
    BuiltinKind,
    Constant,
    Literal,
    Program,
    Rule,
    SymbolTable,
    Variable,
    herbrand_universe,
)


def build_ground_program(rules: list[Rule], table: SymbolTable
                         ) -> GroundProgram:
    """GroundProgram straight from ground AST rules, bypassing the grounder
    (no simplification, no candidate restriction)."""
    lt = LiteralTable(table)

    def intern(lit: Literal) -> int:
        pid = table.predicate(lit.atom.predicate, lit.atom.arity)
        args = []
        for t in lit.atom.args:
            if isinstance(t.value, int):
                args.append(t.value)
            else:
                args.append(-table.symbol(t.value) - 1)
        return lt.intern((pid, tuple(args), lit.strongly_negated))

    ground_rules = []
    facts = []
    for rule in rules:
        assert not rule.builtins, "built-ins must be resolved before this"
        head = tuple(sorted({intern(l) for l in rule.head}))
        pos = tuple(sorted({intern(l) for l in rule.pos_body}))
        neg = tuple(sorted({intern(l) for l in rule.neg_body}))
        gr = GroundRule(head, pos, neg)
        ground_rules.append(gr)
        if gr.is_fact:
            facts.append(head[0])
    return GroundProgram(tuple(ground_rules), lt, frozenset(facts))


def eval_builtin_ground(kind: BuiltinKind, values: list, max_int: int) -> bool:
    """Direct truth of one ground built-in (values are Constant.value)."""

    def key(v):
        return (0, v, "") if isinstance(v, int) else (1, 0, v)

    if kind is BuiltinKind.INT_CHECK:
        return isinstance(values[0], int) and 0 <= values[0] <= max_int
    if kind is BuiltinKind.SUCC:
        a, b = values
        return (isinstance(a, int) and isinstance(b, int)
                and a >= 0 and b == a + 1 and b <= max_int)
    if kind is BuiltinKind.PLUS or kind is BuiltinKind.TIMES:
        a, b, c = values
        if not all(isinstance(v, int) for v in (a, b)):
            return False
        r = a + b if kind is BuiltinKind.PLUS else a * b
        return r <= max_int and c == r
    a, b = key(values[0]), key(values[1])
    if kind is BuiltinKind.LT:
        return a < b
    if kind is BuiltinKind.LE:
        return a <= b
    if kind is BuiltinKind.GT:
        return a > b
    if kind is BuiltinKind.GE:
        return a >= b
    if kind is BuiltinKind.EQ:
        return a == b
    return a != b


def naive_ground(program: Program) -> list[Rule]:
    """Full instantiation over the Herbrand universe, keeping an instance
    iff all its built-ins hold."""
    universe = sorted(herbrand_universe(program), key=Constant.order_key)
    out: list[Rule] = []
    for rule in program.rules:
        names = rule.variables()
        for combo in itertools.product(universe, repeat=len(names)):
            sigma = dict(zip(names, combo))

            def subst_term(t):
                return sigma[t.name] if isinstance(t, Variable) else t

            def subst_lit(lit: Literal) -> Literal:
                return Literal(
                    Atom(lit.atom.predicate,
                         tuple(subst_term(t) for t in lit.atom.args)),
                    lit.strongly_negated)

            ok = all(
                eval_builtin_ground(
                    b.kind, [subst_term(t).value for t in b.args],
                    program.max_int)
                for b in rule.builtins)
            if not ok:
                continue
            out.append(Rule(tuple(subst_lit(l) for l in rule.head),
                            tuple(subst_lit(l) for l in rule.pos_body),
                            tuple(subst_lit(l) for l in rule.neg_body)))
        if not names and not rule.builtins and not universe:
            # product over an empty universe with zero variables still
            # yields the rule itself; handled above, nothing extra here
            pass
    return out


def brute_force_answer_sets(gp: GroundProgram) -> set[frozenset[int]]:
    """All X with is_answer_set(gp, X), enumerating subsets of the head
    literals of the ground program."""
    domain = sorted({h for r in gp.rules for h in r.head})
    found: set[frozenset[int]] = set()
    for r in range(len(domain) + 1):
        for combo in itertools.combinations(domain, r):
            x = frozenset(combo)
            if is_answer_set(gp, x):
                found.add(x)
    return found


def answer_sets_as_strings(gp: GroundProgram,
                           sets: set[frozenset[int]] | list[frozenset[int]]
                           ) -> set[frozenset[str]]:
    return {frozenset(gp.table.format(l) for l in x) for x in sets}


# --- random generators -------------------------------------------------

def random_ground_rules(rng: Random, max_literals: int = 12,
                        max_rules: int = 10, max_head: int = 3
                        ) -> tuple[list[Rule], list[Literal]]:
    """Random propositional rules over 0-ary literals, some strongly
    negated, within the given size bounds."""
    names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"]
    n_lits = rng.randint(2, max_literals)
    pool = []
    for name in names[:n_lits]:
        negated = rng.random() < 0.2
        pool.append(Literal(Atom(name), negated))
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = rng.sample(pool, k=min(rng.randint(0, max_head), len(pool)))
        rest = [l for l in pool if l not in head]
        pos = rng.sample(rest, k=min(rng.randint(0, 2), len(rest)))
        rest2 = [l for l in rest if l not in pos]
        neg = rng.sample(rest2, k=min(rng.randint(0, 2), len(rest2)))
        rules.append(Rule(tuple(head), tuple(pos), tuple(neg)))
    if not any(r.head for r in rules):
        rules.append(Rule((pool[0],), (), ()))
    return rules, pool


def random_ground_program(rng: Random, max_literals: int = 12,
                          max_rules: int = 10, max_head: int = 3
                          ) -> GroundProgram:
    rules, _pool = random_ground_rules(rng, max_literals, max_rules, max_head)
    return build_ground_program(rules, SymbolTable())


_SAFE_PRED_POOL = (("p", 1), ("q", 1), ("r", 2), ("s", 0), ("t", 1))


def random_safe_program_text(rng: Random, max_consts: int = 4,
                             max_rules: int = 5) -> str:
    """Source text of a random safe non-ground program (small enough for the
    naive oracle and brute force)."""
    n_consts = rng.randint(1, max_consts)
    consts = [f"c{i + 1}" for i in range(n_consts)]
    variables = ["X", "Y"]
    lines = []
    for _ in range(rng.randint(1, 3)):  # facts
        name, arity = rng.choice(_SAFE_PRED_POOL)
        args = [rng.choice(consts) for _ in range(arity)]
        lines.append(_atom_text(name, args) + ".")

    for _ in range(rng.randint(1, max_rules)):
        used_vars = [v for v in variables if rng.random() < 0.5]

        def mk_args(arity):
            return [rng.choice(used_vars) if used_vars and rng.random() < 0.6
                    else rng.choice(consts) for _ in range(arity)]

        def mk_lit():
            name, arity = rng.choice(_SAFE_PRED_POOL)
            sign = "-" if rng.random() < 0.15 else ""
            return sign + _atom_text(name, mk_args(arity))

        head = [mk_lit() for _ in range(rng.randint(0, 2))]
        pos = [mk_lit() for _ in range(rng.randint(0, 2))]
        neg = [mk_lit() for _ in range(rng.randint(0, 1))]
        # close off safety: every used variable gets a positive domain atom
        mentioned = set()
        for txt in head + pos + neg:
            for v in used_vars:
                if v in txt:
                    mentioned.add(v)
        for v in sorted(mentioned):
            pos.append(f"t({v})")
        body = ", ".join(pos + [f"not {l}" for l in neg])
        if rng.random() < 0.3 and len(used_vars) == 2 and mentioned == {"X", "Y"}:
            body += ", X != Y"
        if head and not body:
            lines.append(" v ".join(head) + ".")
        elif head:
            lines.append(" v ".join(head) + " :- " + body + ".")
        elif body:
            lines.append(":- " + body + ".")
    for c in consts:
        if rng.random() < 0.7:
            lines.append(f"t({c}).")
    return "\n".join(lines) + "\n"


def _atom_text(name: str, args: list[str]) -> str:
    return name if not args else f"{name}({','.join(args)})"


def preservation_case(rng: Random, max_domain: int = 12):
    """Random safe program whose naive grounding keeps the brute-force
    domain tractable; returns (text, program, naive ground program)."""
    from djasp.parser import parse_program

    while True:
        text = random_safe_program_text(rng)
        prog = parse_program(text)
        naive = build_ground_program(naive_ground(prog), prog.table)
        domain = {h for r in naive.rules for h in r.head}
        if len(domain) <= max_domain:
            return text, prog, naive
