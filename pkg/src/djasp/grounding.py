"""Grounding: safety checking, dependency analysis, and bottom-up
instantiation restricted to derivable atoms.

The output ground program contains only rules whose positive body can be
satisfied by derivable atoms, and has exactly the answer sets of the full
instantiation over the Herbrand universe (verified against a naive-grounding
oracle in the test suite).  Applied simplifications:

  * built-ins are evaluated during instantiation and never appear in output;
  * body literals that are facts are removed (rules whose head contains a
    fact, or whose negative body mentions a fact, are dropped entirely);
  * negative body literals whose atom is never derivable are removed.

Ground atoms are encoded as dense integer ids.  Constants are packed into
single ints: value >= 0 is the integer constant itself, value < 0 is a
constant-symbol id (`-sym_id - 1`), so tuples of encoded constants hash
independently of string hash randomization.
"""

from __future__ import annotations

import itertools
import resource
from dataclasses import dataclass, field

from .errors import ResourceLimitError, SafetyError
from .model import (
    Atom,
    BuiltinKind,
    COMPARISON_KINDS,
    Constant,
    Literal,
    Program,
    Rule,
    SourceSpan,
    SymbolTable,
    Variable,
)

# ground literal key: (predicate id, encoded argument tuple, strongly negated)
LiteralKey = tuple[int, tuple[int, ...], bool]


def encode_constant(constant: Constant, table: SymbolTable) -> int:
    value = constant.value
    if isinstance(value, int):
        return value
    return -table.symbol(value) - 1


def decode_constant(code: int, table: SymbolTable) -> Constant:
    if code >= 0:
        return Constant(code)
    return Constant(table.symbol_names[-code - 1])


def encoded_order_key(code: int, table: SymbolTable) -> tuple[int, int | str]:
    """Total constant order: integers numerically, below all symbols;
    symbols by byte order."""
    if code >= 0:
        return (0, code)
    return (1, table.symbol_names[-code - 1])


class LiteralTable:
    """Dense id <-> ground literal interning table."""

    def __init__(self, symbols: SymbolTable) -> None:
        self.symbols = symbols
        self._ids: dict[LiteralKey, int] = {}
        self.keys: list[LiteralKey] = []

    def __len__(self) -> int:
        return len(self.keys)

    def intern(self, key: LiteralKey) -> int:
        lid = self._ids.get(key)
        if lid is None:
            lid = len(self.keys)
            self._ids[key] = lid
            self.keys.append(key)
        return lid

    def lookup(self, key: LiteralKey) -> int | None:
        return self._ids.get(key)

    def complement_id(self, lid: int) -> int | None:
        pred, args, neg = self.keys[lid]
        return self._ids.get((pred, args, not neg))

    def decode(self, lid: int) -> Literal:
        pred, args, neg = self.keys[lid]
        name = self.symbols.predicate_names[pred]
        terms = tuple(decode_constant(c, self.symbols) for c in args)
        return Literal(Atom(name, terms), neg)

    def format(self, lid: int) -> str:
        return str(self.decode(lid))


@dataclass(frozen=True, slots=True)
class GroundRule:
    """Variable-free rule over literal ids; parts are sorted and duplicate
    free; built-ins are already evaluated away."""

    head: tuple[int, ...] = ()
    pos_body: tuple[int, ...] = ()
    neg_body: tuple[int, ...] = ()

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.pos_body and not self.neg_body


@dataclass
class GroundProgram:
    rules: tuple[GroundRule, ...]
    table: LiteralTable
    facts: frozenset[int]
    warnings: tuple[str, ...] = ()
    _complements: list[int] | None = field(default=None, repr=False)

    def complements(self) -> list[int]:
        """Complement literal id per id (-1 when absent), cached."""
        if self._complements is None or len(self._complements) != len(self.table):
            comp = []
            for lid in range(len(self.table)):
                c = self.table.complement_id(lid)
                comp.append(-1 if c is None else c)
            self._complements = comp
        return self._complements

    def format_rule(self, rule: GroundRule) -> str:
        fmt = self.table.format
        head = " v ".join(fmt(l) for l in rule.head)
        body = [fmt(l) for l in rule.pos_body]
        body += [f"not {fmt(l)}" for l in rule.neg_body]
        if not body:
            return f"{head}."
        if not head:
            return f":- {', '.join(body)}."
        return f"{head} :- {', '.join(body)}."

    def format(self) -> str:
        return "".join(self.format_rule(r) + "\n" for r in self.rules)


# --- safety ----------------------------------------------------------

def check_safety(rule: Rule) -> None:
    """Every variable must occur in a positive non-built-in body literal,
    be the output of an arithmetic built-in / #succ whose inputs are safe,
    or occur in #int."""
    safe: set[str] = set()
    for lit in rule.pos_body:
        for t in lit.atom.args:
            if isinstance(t, Variable):
                safe.add(t.name)
    for b in rule.builtins:
        if b.kind is BuiltinKind.INT_CHECK and isinstance(b.args[0], Variable):
            safe.add(b.args[0].name)

    def bound(t) -> bool:
        return isinstance(t, Constant) or t.name in safe

    changed = True
    while changed:
        changed = False
        for b in rule.builtins:
            if b.kind is BuiltinKind.SUCC:
                out = b.args[1]
            elif b.kind in (BuiltinKind.PLUS, BuiltinKind.TIMES):
                out = b.args[2]
            else:
                continue
            inputs = b.args[:-1]
            if (isinstance(out, Variable) and out.name not in safe
                    and all(bound(t) for t in inputs)):
                safe.add(out.name)
                changed = True

    for name in rule.variables():
        if name not in safe:
            span = rule.span or SourceSpan("<unknown>", 1, 1)
            display = "_" if name.startswith("_#") else name
            raise SafetyError(span, display)


# --- dependency graph -------------------------------------------------

@dataclass
class DependencyGraph:
    """Predicate dependency graph.

    Edges are (head predicate, body predicate, positive?) pairs.  Distinct
    head predicates of one disjunctive rule are additionally linked by
    positive edges in both directions so that co-guessed predicates land in
    the same strongly connected component.  Components follow the positive
    subgraph: negative edges neither merge components nor order them
    (candidate generation ignores negative bodies, so only positive
    derivation order matters); the component list is a topological order of
    the positive condensation, dependencies first.
    """

    predicates: tuple[int, ...]
    edges: frozenset[tuple[int, int, bool]]
    sccs: tuple[tuple[int, ...], ...]
    scc_index: dict[int, int]


def build_dependency_graph(program: Program) -> DependencyGraph:
    table = program.table
    nodes = list(range(len(table.predicate_names)))
    edges: set[tuple[int, int, bool]] = set()
    for rule in program.rules:
        head_preds = [table.predicate_id(l.atom.predicate) for l in rule.head]
        for hp in head_preds:
            for lit in rule.pos_body:
                edges.add((hp, table.predicate_id(lit.atom.predicate), True))
            for lit in rule.neg_body:
                edges.add((hp, table.predicate_id(lit.atom.predicate), False))
        for a, b in itertools.combinations(sorted(set(head_preds)), 2):
            edges.add((a, b, True))
            edges.add((b, a, True))

    # successor lists follow the positive derivation direction: body -> head
    succ: dict[int, list[int]] = {n: [] for n in nodes}
    for head, body, positive in edges:
        if positive:
            succ[body].append(head)
    for n in nodes:
        succ[n] = sorted(set(succ[n]))

    sccs = _tarjan(nodes, succ)
    scc_index = {p: i for i, comp in enumerate(sccs) for p in comp}
    return DependencyGraph(tuple(nodes), frozenset(edges),
                           tuple(tuple(c) for c in sccs), scc_index)


def _tarjan(nodes: list[int], succ: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; emits SCCs sinks-first, returned dependencies-first."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            neighbors = succ[v]
            while pi < len(neighbors):
                w = neighbors[pi]
                pi += 1
                if w not in index:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    out.reverse()
    return out


# --- rule compilation and instantiation --------------------------------

_CONST, _BOUND, _FREE, _DUP = 0, 1, 2, 3

_S_PROBE, _S_INDEX, _S_SCAN, _S_BUILTIN = 0, 1, 2, 3


class _CompiledRule:
    __slots__ = ("rule", "head_specs", "pos_specs", "neg_specs",
                 "builtin_specs", "pos_preds", "plans")

    def __init__(self, rule: Rule, table: SymbolTable) -> None:
        self.rule = rule

        def spec(term):
            if isinstance(term, Constant):
                return (_CONST, encode_constant(term, table))
            return (_FREE, term.name)

        def lit_spec(lit: Literal):
            pid = table.predicate(lit.atom.predicate, lit.atom.arity)
            return (pid, lit.strongly_negated,
                    tuple(spec(t) for t in lit.atom.args))

        self.head_specs = tuple(lit_spec(l) for l in rule.head)
        self.pos_specs = tuple(lit_spec(l) for l in rule.pos_body)
        self.neg_specs = tuple(lit_spec(l) for l in rule.neg_body)
        self.builtin_specs = tuple(
            (b.kind, tuple(spec(t) for t in b.args)) for b in rule.builtins)
        self.pos_preds = tuple(p for p, _, _ in self.pos_specs)
        self.plans: dict[int | None, tuple] = {}

    def plan(self, delta_pos: int | None) -> tuple:
        cached = self.plans.get(delta_pos)
        if cached is None:
            cached = _build_plan(self, delta_pos)
            self.plans[delta_pos] = cached
        return cached


def _lit_step(lit_spec, bound: set[str], use_delta: bool):
    """Compile one positive-literal match against the current bound set."""
    pid, sneg, terms = lit_spec
    roles = []
    seen_here: set[str] = set()
    for i, (tk, tv) in enumerate(terms):
        if tk == _CONST:
            roles.append((_CONST, tv))
        elif tv in bound:
            roles.append((_BOUND, tv))
        elif tv in seen_here:
            roles.append((_DUP, tv))
        else:
            roles.append((_FREE, tv))
            seen_here.add(tv)
    bound.update(seen_here)
    fixed = tuple(i for i, r in enumerate(roles) if r[0] in (_CONST, _BOUND))
    frees = tuple((i, r[1]) for i, r in enumerate(roles) if r[0] == _FREE)
    dups = tuple((i, r[1]) for i, r in enumerate(roles) if r[0] == _DUP)
    if not frees and not dups:
        return (_S_PROBE, (pid, sneg), tuple(roles), use_delta)
    if fixed and not use_delta:
        return (_S_INDEX, (pid, sneg), fixed,
                tuple(roles[i] for i in fixed), frees, dups)
    return (_S_SCAN, (pid, sneg), tuple(roles), frees, dups, use_delta)


def _builtin_roles(args, bound: set[str]):
    roles = []
    for tk, tv in args:
        if tk == _CONST:
            roles.append((_CONST, tv))
        elif tv in bound:
            roles.append((_BOUND, tv))
        else:
            roles.append((_FREE, tv))
    return roles


def _build_plan(cr: _CompiledRule, delta_pos: int | None) -> tuple:
    """Evaluation order: built-ins as soon as their inputs are bound, then
    positive literals by textual order preferring fully-bound ones, then
    literals sharing a bound variable; unbound #int checks enumerate last.
    A delta position, when given, is matched first (semi-naive seeding)."""
    steps = []
    bound: set[str] = set()
    remaining_lits = [i for i in range(len(cr.pos_specs)) if i != delta_pos]
    remaining_bs = list(range(len(cr.builtin_specs)))
    if delta_pos is not None:
        steps.append(_lit_step(cr.pos_specs[delta_pos], bound, True))

    def builtin_ready(bi: int) -> bool:
        kind, args = cr.builtin_specs[bi]
        roles = _builtin_roles(args, bound)
        if kind in COMPARISON_KINDS:
            return all(r[0] != _FREE for r in roles)
        if kind is BuiltinKind.INT_CHECK:
            return roles[0][0] != _FREE
        # succ / plus / times: all inputs bound
        return all(r[0] != _FREE for r in roles[:-1])

    def flush_builtins() -> None:
        progressed = True
        while progressed:
            progressed = False
            for bi in list(remaining_bs):
                if builtin_ready(bi):
                    kind, args = cr.builtin_specs[bi]
                    steps.append(
                        (_S_BUILTIN, kind, tuple(_builtin_roles(args, bound))))
                    for _, tv in cr.builtin_specs[bi][1]:
                        if isinstance(tv, str):
                            bound.add(tv)
                    remaining_bs.remove(bi)
                    progressed = True
                    break

    flush_builtins()
    while remaining_lits or remaining_bs:
        if remaining_lits:
            pick = None
            for i in remaining_lits:
                _, _, terms = cr.pos_specs[i]
                if all(tk == _CONST or tv in bound for tk, tv in terms):
                    pick = i
                    break
            if pick is None:
                for i in remaining_lits:
                    _, _, terms = cr.pos_specs[i]
                    if any(tk != _CONST and tv in bound for tk, tv in terms):
                        pick = i
                        break
            if pick is None:
                pick = remaining_lits[0]
            remaining_lits.remove(pick)
            steps.append(_lit_step(cr.pos_specs[pick], bound, False))
        else:
            # only enumerable #int checks can make progress here
            pick = None
            for bi in remaining_bs:
                kind, _args = cr.builtin_specs[bi]
                if kind is BuiltinKind.INT_CHECK:
                    pick = bi
                    break
            if pick is None:  # unreachable for safe rules
                raise AssertionError("no evaluable built-in in safe rule")
            kind, args = cr.builtin_specs[pick]
            steps.append((_S_BUILTIN, kind, tuple(_builtin_roles(args, bound))))
            bound.add(args[0][1])
            remaining_bs.remove(pick)
        flush_builtins()
    return tuple(steps)


class _Extents:
    """Per (predicate, sign) sets of derived argument tuples, with
    insertion-ordered iteration and on-demand hash indexes."""

    def __init__(self) -> None:
        self.data: dict[tuple[int, bool], dict[tuple[int, ...], None]] = {}
        self._indexes: dict[tuple, tuple[int, dict]] = {}

    def rows(self, ps: tuple[int, bool]) -> dict[tuple[int, ...], None]:
        return self.data.get(ps, {})

    def add(self, ps: tuple[int, bool], args: tuple[int, ...]) -> bool:
        rows = self.data.get(ps)
        if rows is None:
            rows = self.data[ps] = {}
        if args in rows:
            return False
        rows[args] = None
        return True

    def index(self, ps: tuple[int, bool], positions: tuple[int, ...]) -> dict:
        rows = self.rows(ps)
        key = (ps, positions)
        cached = self._indexes.get(key)
        if cached is not None and cached[0] == len(rows):
            return cached[1]
        idx: dict[tuple[int, ...], list] = {}
        for args in rows:
            proj = tuple(args[i] for i in positions)
            bucket = idx.get(proj)
            if bucket is None:
                idx[proj] = [args]
            else:
                bucket.append(args)
        self._indexes[key] = (len(rows), idx)
        return idx


class _Instantiator:
    """Executes compiled plans against extents; counts arithmetic drops."""

    def __init__(self, max_int: int, symbol_names: list[str]) -> None:
        self.max_int = max_int
        self.symbol_names = symbol_names
        self.overflow = 0

    def compare(self, kind: BuiltinKind, a: int, b: int) -> bool:
        if kind is BuiltinKind.EQ:
            return a == b
        if kind is BuiltinKind.NE:
            return a != b
        ka = (0, a, "") if a >= 0 else (1, 0, self.symbol_names[-a - 1])
        kb = (0, b, "") if b >= 0 else (1, 0, self.symbol_names[-b - 1])
        return _CMP_TRUE[kind](ka, kb)

    def run(self, cr: _CompiledRule, extents: _Extents, emit,
            delta_pos: int | None = None,
            delta_rows: dict | None = None) -> None:
        plan = cr.plan(delta_pos)
        subst: dict[str, int] = {}
        max_int = self.max_int
        nsteps = len(plan)

        def rec(i: int) -> None:
            if i == nsteps:
                emit(cr, subst)
                return
            step = plan[i]
            tag = step[0]
            if tag == _S_PROBE:
                _, ps, roles, use_delta = step
                key = tuple(v if k == _CONST else subst[v] for k, v in roles)
                rows = delta_rows if use_delta else extents.rows(ps)
                if rows is not None and key in rows:
                    rec(i + 1)
                return
            if tag == _S_INDEX:
                _, ps, fixed, fixed_roles, frees, dups = step
                proj = tuple(v if k == _CONST else subst[v]
                             for k, v in fixed_roles)
                for args in extents.index(ps, fixed).get(proj, ()):
                    ok = True
                    for pos_i, name in frees:
                        subst[name] = args[pos_i]
                    for pos_i, name in dups:
                        if subst[name] != args[pos_i]:
                            ok = False
                            break
                    if ok:
                        rec(i + 1)
                for _, name in frees:
                    if name in subst:
                        del subst[name]
                return
            if tag == _S_SCAN:
                _, ps, roles, frees, dups, use_delta = step
                rows = delta_rows if use_delta else extents.rows(ps)
                if not rows:
                    return
                checks = [(j, v if k == _CONST else subst[v])
                          for j, (k, v) in enumerate(roles) if k in (_CONST, _BOUND)]
                for args in rows:
                    ok = True
                    for pos_i, val in checks:
                        if args[pos_i] != val:
                            ok = False
                            break
                    if ok:
                        for pos_i, name in frees:
                            subst[name] = args[pos_i]
                        for pos_i, name in dups:
                            if subst[name] != args[pos_i]:
                                ok = False
                                break
                        if ok:
                            rec(i + 1)
                for _, name in frees:
                    if name in subst:
                        del subst[name]
                return
            # built-in
            _, kind, roles = step
            vals = [v if k == _CONST else subst.get(v) for k, v in roles]
            if kind is BuiltinKind.INT_CHECK:
                x = vals[0]
                if x is None:  # enumerate the integer domain
                    name = roles[0][1]
                    for n in range(max_int + 1):
                        subst[name] = n
                        rec(i + 1)
                    del subst[name]
                elif 0 <= x <= max_int:
                    rec(i + 1)
                return
            if kind in COMPARISON_KINDS:
                if self.compare(kind, vals[0], vals[1]):
                    rec(i + 1)
                return
            # succ / plus / times: integer inputs, result within 0..max_int
            ins = vals[:-1]
            if any(v < 0 for v in ins):
                return
            if kind is BuiltinKind.SUCC:
                result = ins[0] + 1
            elif kind is BuiltinKind.PLUS:
                result = ins[0] + ins[1]
            else:
                result = ins[0] * ins[1]
            if result > max_int:
                self.overflow += 1
                return
            out = vals[-1]
            if out is None:
                name = roles[-1][1]
                subst[name] = result
                rec(i + 1)
                del subst[name]
            elif out == result:
                rec(i + 1)
            return

        rec(0)


_CMP_TRUE = {
    BuiltinKind.LT: (lambda a, b: a < b),
    BuiltinKind.LE: (lambda a, b: a <= b),
    BuiltinKind.GT: (lambda a, b: a > b),
    BuiltinKind.GE: (lambda a, b: a >= b),
}


# --- grounding driver ---------------------------------------------------

def ground_rule(rule: Rule, candidates, *, program: Program
                ) -> tuple[list[Rule], int]:
    """Instantiate one safe rule against a set of candidate ground literals.

    Returns the ground instances (as variable-free rules with built-ins
    evaluated away, in a deterministic order) and the number of instances
    dropped because an arithmetic result fell outside 0..max_int.
    """
    check_safety(rule)
    table = program.table
    extents = _Extents()
    encoded = []
    for lit in candidates:
        pid = table.predicate_id(lit.atom.predicate)
        if pid is None:
            pid = table.predicate(lit.atom.predicate, lit.atom.arity)
        args = tuple(encode_constant(t, table) for t in lit.atom.args)
        encoded.append(((pid, lit.strongly_negated), args))
    for ps, args in sorted(encoded):
        extents.add(ps, args)

    cr = _CompiledRule(rule, table)
    inst = _Instantiator(program.max_int, table.symbol_names)
    out: list[Rule] = []

    def decode_lit(spec, subst) -> Literal:
        pid, sneg, terms = spec
        args = tuple(
            decode_constant(v if k == _CONST else subst[v], table)
            for k, v in terms)
        return Literal(Atom(table.predicate_names[pid], args), sneg)

    def emit(cr_, subst) -> None:
        def dedup(lits):
            seen: dict[Literal, None] = {}
            for l in lits:
                seen.setdefault(l, None)
            return tuple(seen)

        out.append(Rule(
            dedup(decode_lit(s, subst) for s in cr_.head_specs),
            dedup(decode_lit(s, subst) for s in cr_.pos_specs),
            dedup(decode_lit(s, subst) for s in cr_.neg_specs),
            (),
            rule.span,
        ))

    inst.run(cr, extents, emit)
    return out, inst.overflow


def ground_program(program: Program, *, max_memory_mb: int | None = None
                   ) -> GroundProgram:
    """Bottom-up instantiation over dependency components in topological
    order, semi-naive within each component."""
    for rule in program.rules:
        check_safety(rule)

    sym = program.table
    table = LiteralTable(sym)
    extents = _Extents()
    facts: dict[int, None] = {}
    budget = _MemoryBudget(max_memory_mb)

    compiled: list[_CompiledRule] = []
    for rule in program.rules:
        if rule.is_fact and rule.head[0].is_ground():
            lit = rule.head[0]
            pid = sym.predicate_id(lit.atom.predicate)
            args = tuple(encode_constant(t, sym) for t in lit.atom.args)
            lid = table.intern((pid, args, lit.strongly_negated))
            if lid not in facts:
                facts[lid] = None
                extents.add((pid, lit.strongly_negated), args)
        else:
            compiled.append(_CompiledRule(rule, sym))

    graph = build_dependency_graph(program)
    n_sccs = len(graph.sccs)
    buckets: list[list[_CompiledRule]] = [[] for _ in range(n_sccs)]
    constraints: list[_CompiledRule] = []
    for cr in compiled:
        if not cr.head_specs:
            constraints.append(cr)
        else:
            buckets[graph.scc_index[cr.head_specs[0][0]]].append(cr)

    inst = _Instantiator(program.max_int, sym.symbol_names)
    emitted: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = []
    seen_rules: set[tuple] = set()
    pending_new: list[tuple[tuple[int, bool], tuple[int, ...]]] = []

    def part(ids: list[int]) -> tuple[int, ...]:
        if len(ids) < 2:
            return tuple(ids)
        return tuple(sorted(set(ids)))

    def emit(cr_: _CompiledRule, subst: dict) -> None:
        head_ids = []
        for pid, sneg, terms in cr_.head_specs:
            args = tuple(v if k == _CONST else subst[v] for k, v in terms)
            head_ids.append(table.intern((pid, args, sneg)))
            pending_new.append(((pid, sneg), args))
        pos_ids = [
            table.intern((pid, tuple(v if k == _CONST else subst[v]
                                     for k, v in terms), sneg))
            for pid, sneg, terms in cr_.pos_specs]
        neg_ids = [
            table.intern((pid, tuple(v if k == _CONST else subst[v]
                                     for k, v in terms), sneg))
            for pid, sneg, terms in cr_.neg_specs]
        key = (part(head_ids), part(pos_ids), part(neg_ids))
        if key not in seen_rules:
            seen_rules.add(key)
            emitted.append(key)
            budget.tick()

    def merge_pending() -> dict[tuple[int, bool], dict]:
        delta: dict[tuple[int, bool], dict] = {}
        for ps, args in pending_new:
            if extents.add(ps, args):
                delta.setdefault(ps, {})[args] = None
        pending_new.clear()
        return delta

    for scc_i in range(n_sccs):
        rules_here = buckets[scc_i]
        if not rules_here:
            continue
        scc_preds = set(graph.sccs[scc_i])
        recursive = [cr for cr in rules_here
                     if any(p in scc_preds for p in cr.pos_preds)]
        # first pass: every rule against the current extents
        for cr in rules_here:
            inst.run(cr, extents, emit)
        delta = merge_pending()
        while delta:
            for cr in recursive:
                for pos_i, pid in enumerate(cr.pos_preds):
                    sneg = cr.pos_specs[pos_i][1]
                    if pid in scc_preds and (pid, sneg) in delta:
                        inst.run(cr, extents, emit, pos_i, delta[(pid, sneg)])
            delta = merge_pending()

    for cr in constraints:
        inst.run(cr, extents, emit)
    pending_new.clear()

    rules, fact_ids = _simplify(emitted, facts, budget)
    warnings = ()
    if inst.overflow:
        warnings = (
            f"{inst.overflow} arithmetic result(s) outside 0..{program.max_int}; "
            f"instances dropped",)
    final = [GroundRule((lid,), (), ()) for lid in fact_ids]
    final.extend(GroundRule(h, p, n) for h, p, n in rules)
    return GroundProgram(tuple(final), table, frozenset(fact_ids), warnings)


def _simplify(emitted, facts: dict[int, None], budget) -> tuple[list, list[int]]:
    """Fact propagation to fixpoint: drop rules subsumed by a head fact or
    blocked by a negative fact, strip satisfied body literals, drop negative
    literals on never-derivable atoms, and promote emptied unit rules to
    facts."""
    derivable = set(facts)
    for h, _p, _n in emitted:
        derivable.update(h)
    fact_set = set(facts)
    fact_list = list(facts)
    rules = emitted
    changed = True
    while changed:
        # another pass is useful only when a new fact was registered: drops
        # and body-stripping consume facts, they never produce new ones
        changed = False
        out = []
        for h, p, n in rules:
            if any(x in fact_set for x in h):
                continue
            if any(x in fact_set for x in n):
                continue
            p2 = tuple(x for x in p if x not in fact_set)
            n2 = tuple(x for x in n if x in derivable)
            if len(h) == 1 and not p2 and not n2:
                fact_set.add(h[0])
                fact_list.append(h[0])
                changed = True
                continue
            out.append((h, p2, n2))
            budget.tick()
        rules = out
    seen: set[tuple] = set()
    deduped = []
    for r in rules:
        if r not in seen:
            seen.add(r)
            deduped.append(r)
    return deduped, fact_list


class _MemoryBudget:
    """Coarse peak-RSS guard checked every few thousand emissions."""

    def __init__(self, limit_mb: int | None, period: int = 8192) -> None:
        self.limit_kb = None if limit_mb is None else limit_mb * 1024
        self.period = period
        self._n = 0

    def tick(self) -> None:
        if self.limit_kb is None:
            return
        self._n += 1
        if self._n % self.period:
            return
        used = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        if used > self.limit_kb:
            raise ResourceLimitError(
                f"memory budget exceeded: {used // 1024} MiB used, "
                f"budget {self.limit_kb // 1024} MiB")
