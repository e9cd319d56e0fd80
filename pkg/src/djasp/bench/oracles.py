"""Independent exhaustive-search oracles for small benchmark instances.

The oracles share nothing with the solver besides the fact parser: paths
are enumerated by DFS, strategic sets and prime implicants by explicit
subset / term enumeration, colorings by full assignment products.  Caps
(10 nodes, 10 companies, 12 propositional variables) keep them tractable;
exceeding a cap raises ValueError("oracle cap exceeded ...").
"""

from __future__ import annotations

import itertools

from ..model import Constant, Program
from ..parser import parse_program

MAX_NODES = 10
MAX_COMPANIES = 10
MAX_VARIABLES = 12

COLORS = ("red", "green", "blue")


def _facts(program: Program, predicate: str) -> list[tuple]:
    out = []
    for rule in program.rules:
        if rule.is_fact and rule.head[0].atom.predicate == predicate:
            out.append(tuple(t.value for t in rule.head[0].atom.args
                             if isinstance(t, Constant)))
    return out


def oracle(kind: str, facts_text: str) -> set[frozenset]:
    """Exhaustive solution set of a generated instance.

    hpath: arc sets of simple paths from the start covering every node;
    stratcomp: inclusion-minimal company sets preserving production and
    closed under control; 3col: proper colorings as (node, color) sets;
    prime: prime implicants as (variable, sign) sets.
    """
    program = parse_program(facts_text)
    if kind == "hpath":
        return hamiltonian_paths(program)
    if kind == "stratcomp":
        return strategic_sets(program)
    if kind == "3col":
        return proper_colorings(program)
    if kind == "prime":
        return prime_implicants(program)
    raise ValueError(f"unknown benchmark kind {kind!r}")


def hamiltonian_paths(program: Program) -> set[frozenset[tuple[str, str]]]:
    nodes = [a[0] for a in _facts(program, "node")]
    arcs = {a for a in _facts(program, "arc")}
    starts = [a[0] for a in _facts(program, "start")]
    if len(nodes) > MAX_NODES:
        raise ValueError(f"oracle cap exceeded: {len(nodes)} nodes > "
                         f"{MAX_NODES}")
    if not starts:
        return set()
    start = starts[0]
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in sorted(arcs):
        if a in succ and b in succ:
            succ[a].append(b)
    found: set[frozenset[tuple[str, str]]] = set()
    n = len(nodes)

    def dfs(at: str, visited: set[str], path_arcs: list[tuple[str, str]]):
        if len(visited) == n:
            found.add(frozenset(path_arcs))
            return
        for nxt in succ.get(at, ()):
            if nxt not in visited:
                visited.add(nxt)
                path_arcs.append((at, nxt))
                dfs(nxt, visited, path_arcs)
                path_arcs.pop()
                visited.remove(nxt)

    if start in succ:
        dfs(start, {start}, [])
    return found


def strategic_sets(program: Program) -> set[frozenset[str]]:
    companies = sorted(a[0] for a in _facts(program, "company"))
    produced = _facts(program, "produced_by")
    controlled = _facts(program, "controlled_by")
    if len(companies) > MAX_COMPANIES:
        raise ValueError(f"oracle cap exceeded: {len(companies)} companies "
                         f"> {MAX_COMPANIES}")

    def admissible(sel: frozenset[str]) -> bool:
        for _p, y, z in produced:
            if y not in sel and z not in sel:
                return False
        for w, x, y, z in controlled:
            if x in sel and y in sel and z in sel and w not in sel:
                return False
        return True

    satisfying = []
    for r in range(len(companies) + 1):
        for combo in itertools.combinations(companies, r):
            sel = frozenset(combo)
            if admissible(sel):
                satisfying.append(sel)
    return {s for s in satisfying
            if not any(t < s for t in satisfying)}


def proper_colorings(program: Program) -> set[frozenset[tuple[str, str]]]:
    nodes = sorted(a[0] for a in _facts(program, "node"))
    edges = _facts(program, "edge")
    if len(nodes) > MAX_NODES:
        raise ValueError(f"oracle cap exceeded: {len(nodes)} nodes > "
                         f"{MAX_NODES}")
    out: set[frozenset[tuple[str, str]]] = set()
    for assignment in itertools.product(COLORS, repeat=len(nodes)):
        color = dict(zip(nodes, assignment))
        if all(color.get(a) != color.get(b) for a, b in edges
               if a in color and b in color):
            out.add(frozenset(color.items()))
    return out


def prime_implicants(program: Program) -> set[frozenset[tuple[str, str]]]:
    clauses = _facts(program, "clause")
    variables = sorted({v for c in clauses for v in (c[1], c[3], c[5])})
    if len(variables) > MAX_VARIABLES:
        raise ValueError(f"oracle cap exceeded: {len(variables)} variables "
                         f"> {MAX_VARIABLES}")
    clause_lits = [frozenset(((c[1], c[2]), (c[3], c[4]), (c[5], c[6])))
                   for c in clauses]
    implicants = []
    # per variable: absent, positive, or negative in the candidate term
    for states in itertools.product(("absent", "pos", "neg"),
                                    repeat=len(variables)):
        term = frozenset((v, s) for v, s in zip(variables, states)
                         if s != "absent")
        if all(term & c for c in clause_lits):
            implicants.append(term)
    return {t for t in implicants if not any(u < t for u in implicants)}
