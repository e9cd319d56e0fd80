"""Answer-set candidate generation.

Three-valued search over ground literal ids with deterministic propagation
and chronological backtracking.  Propagation closes the assignment under:

  (i)   forward inference: a rule whose body is satisfied and which has
        exactly one non-false head literal forces that literal true;
  (ii)  contraposition: a rule with every head literal false and all body
        literals but one satisfied forces the remaining one (positive body
        literal -> false, default-negated literal -> its atom true);
  (iii) consistency: a true literal forces its complement false;
  (iv)  support: a literal is forced false once no rule can still derive
        it.  A rule supports a head literal l while its body is not
        falsified, no other head literal is true, and l does not occur in
        the rule's own positive body (self-loops never support).

On top of the per-literal support rule, the driver interleaves a loop
check over the head-cycle-free strongly connected components of the
positive atom dependency graph (no rule may have two head literals in the
same component; for such components greatest-unfounded-set reasoning is
polynomial, while in general it is as hard as the minimality check
itself).  A component member that cannot be non-circularly derived even
when every undefined literal is taken optimistically true is forced false
(conflict when already true).  In a head-cycle-free component any answer
set derives its true atoms acyclically through rules whose other head
literals are false, so the check never prunes one; without it, candidates
with circularly supported atoms only die at the verification step, which
is exponentially wasteful under chronological backtracking.

Total conflict-free assignments are candidates; each one is verified with
the model checker before being emitted, so enumeration is sound by
construction and complete because propagation never forces against any
answer set.  Duplicates are impossible: flipping the last open decision
visits each total assignment at most once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .checker import is_answer_set
from .grounding import GroundProgram

UNDEFINED, TRUE, FALSE = 0, 1, 2

_OP_ASSIGN, _OP_COUNTS, _OP_DEAD = 0, 1, 2


class Conflict(Exception):
    """A literal was forced both true and false."""

    def __init__(self, level: int) -> None:
        super().__init__(f"conflict at decision level {level}")
        self.level = level


@dataclass
class SolverStats:
    choices: int = 0
    backtracks: int = 0
    candidates: int = 0
    rejected: int = 0
    emitted: int = 0


@dataclass(frozen=True)
class EnumerationLimit:
    """0 means enumerate everything."""

    max_answer_sets: int = 0


@dataclass
class SolverState:
    """Assignment, trail and rule counters for one enumeration."""

    gp: GroundProgram
    stats: SolverStats = field(default_factory=SolverStats)

    def __post_init__(self) -> None:
        gp = self.gp
        self.n = len(gp.table)
        self.assignment = bytearray(self.n)
        self.comp = gp.complements()
        rules = gp.rules
        self.m = len(rules)
        self.heads = [r.head for r in rules]
        self.pos = [r.pos_body for r in rules]
        self.neg = [r.neg_body for r in rules]
        self.hd_true = [0] * self.m
        self.hd_false = [0] * self.m
        self.bp_true = [0] * self.m
        self.bp_false = [0] * self.m
        self.bn_true = [0] * self.m
        self.bn_false = [0] * self.m
        self.dead = bytearray(self.m)
        self.occ_head: list[list[int]] = [[] for _ in range(self.n)]
        self.occ_pos: list[list[int]] = [[] for _ in range(self.n)]
        self.occ_neg: list[list[int]] = [[] for _ in range(self.n)]
        self.supports: list[tuple[int, ...]] = []
        self.support_count = [0] * self.n
        for ri in range(self.m):
            for l in self.heads[ri]:
                self.occ_head[l].append(ri)
            for l in self.pos[ri]:
                self.occ_pos[l].append(ri)
            for l in self.neg[ri]:
                self.occ_neg[l].append(ri)
            sup = tuple(h for h in self.heads[ri] if h not in self.pos[ri])
            self.supports.append(sup)
            for h in sup:
                self.support_count[h] += 1
        # trail: assignment order; undo: typed operations; decisions:
        # [literal, flipped?, undo mark, trail mark]
        self.trail: list[tuple[int, int]] = []
        self.undo: list[tuple] = []
        self.decisions: list[list] = []
        self.queue: deque = deque()
        self.num_assigned = 0
        self._build_loop_components()

    def _build_loop_components(self) -> None:
        """Head-cycle-free SCCs (size >= 2) of the positive atom dependency
        graph, with the per-component support-rule views the loop check
        uses.  Components where some rule has two head literals are left to
        the model checker (collective support through a shared disjunctive
        head makes circular derivations legitimate there)."""
        succ: list[list[int]] = [[] for _ in range(self.n)]
        for ri in range(self.m):
            heads = self.heads[ri]
            for b in self.pos[ri]:
                succ[b].extend(heads)
        sccs = _tarjan_atoms(self.n, succ)
        self.loop_components: list[tuple] = []
        for comp in sccs:
            if len(comp) < 2:
                continue
            members = frozenset(comp)
            rule_views = []
            head_cycle = False
            seen_rules = set()
            for h in comp:
                for ri in self.occ_head[h]:
                    if ri in seen_rules:
                        continue
                    seen_rules.add(ri)
                    if sum(x in members for x in self.heads[ri]) > 1:
                        head_cycle = True
                        break
                    sup = tuple(x for x in self.supports[ri]
                                if x in members)
                    if not sup:
                        continue
                    pos_in = tuple(x for x in self.pos[ri] if x in members)
                    rule_views.append((ri, sup, pos_in))
                if head_cycle:
                    break
            if not head_cycle:
                self.loop_components.append((tuple(sorted(comp)), members,
                                             tuple(rule_views)))

    # --- assignment and propagation ------------------------------------

    def level(self) -> int:
        return len(self.decisions)

    def assign(self, lit: int, value: int) -> None:
        """Record an assignment; effects are applied by propagate()."""
        cur = self.assignment[lit]
        if cur:
            if cur != value:
                raise Conflict(self.level())
            return
        self.assignment[lit] = value
        self.trail.append((lit, value))
        self.undo.append((_OP_ASSIGN, lit))
        self.num_assigned += 1
        self.queue.append((lit, value))

    def propagate(self) -> None:
        """Run assignments to fixpoint; raises Conflict and unwinds the
        pending queue on contradiction."""
        q = self.queue
        try:
            while q:
                lit, value = q.popleft()
                self._apply(lit, value)
        except Conflict:
            q.clear()
            raise

    def _apply(self, lit: int, value: int) -> None:
        # counters first (they must match the undo entry exactly); effects
        # afterwards, since forcing may raise
        self.undo.append((_OP_COUNTS, lit))
        occ_head = self.occ_head[lit]
        occ_pos = self.occ_pos[lit]
        occ_neg = self.occ_neg[lit]
        if value == TRUE:
            for ri in occ_head:
                self.hd_true[ri] += 1
            for ri in occ_pos:
                self.bp_true[ri] += 1
            for ri in occ_neg:
                self.bn_true[ri] += 1
            c = self.comp[lit]
            if c >= 0:
                self.assign(c, FALSE)
            for ri in occ_head:
                if self.hd_true[ri] == 1:
                    self._kill_support(ri, lit)
            for ri in occ_neg:
                if self.bn_true[ri] == 1:
                    self._kill_support(ri, -1)
            for ri in occ_pos:
                self._examine(ri)
        else:
            for ri in occ_head:
                self.hd_false[ri] += 1
            for ri in occ_pos:
                self.bp_false[ri] += 1
            for ri in occ_neg:
                self.bn_false[ri] += 1
            for ri in occ_pos:
                if self.bp_false[ri] == 1:
                    self._kill_support(ri, -1)
            for ri in occ_head:
                self._examine(ri)
            for ri in occ_neg:
                self._examine(ri)

    def _kill_support(self, ri: int, exclude: int) -> None:
        """The rule can no longer derive its (other) head literals."""
        if self.dead[ri]:
            return
        self.dead[ri] = 1
        counts = self.support_count
        dec = [h for h in self.supports[ri] if h != exclude]
        for h in dec:
            counts[h] -= 1
        self.undo.append((_OP_DEAD, ri, dec))
        assignment = self.assignment
        for h in dec:
            if counts[h] == 0:
                if assignment[h] == TRUE:
                    raise Conflict(self.level())
                self.assign(h, FALSE)

    def _examine(self, ri: int) -> None:
        if self.hd_true[ri] or self.bp_false[ri] or self.bn_true[ri]:
            return  # satisfied (or body already falsified)
        heads = self.heads[ri]
        undef_heads = len(heads) - self.hd_false[ri]
        np_, nn = len(self.pos[ri]), len(self.neg[ri])
        body_sat = self.bp_true[ri] == np_ and self.bn_false[ri] == nn
        if body_sat:
            if undef_heads == 0:
                raise Conflict(self.level())
            if undef_heads == 1:
                assignment = self.assignment
                for h in heads:
                    if assignment[h] == UNDEFINED:
                        self.assign(h, TRUE)
                        return
            return
        if undef_heads == 0:
            unsat = (np_ - self.bp_true[ri]) + (nn - self.bn_false[ri])
            if unsat == 1:
                assignment = self.assignment
                for b in self.pos[ri]:
                    if assignment[b] == UNDEFINED:
                        self.assign(b, FALSE)
                        return
                for b in self.neg[ri]:
                    if assignment[b] == UNDEFINED:
                        self.assign(b, TRUE)
                        return

    def _unfounded_pass(self) -> bool:
        """Force false every component member with no acyclic support under
        the optimistic (undefined = true) reading; True when anything was
        forced.  Raises Conflict when such a member is already true."""
        assignment = self.assignment
        forced = False
        for comp_sorted, members, rule_views in self.loop_components:
            if all(assignment[l] == FALSE for l in comp_sorted):
                continue
            founded: set[int] = set()
            occ: dict[int, list[int]] = {}
            pending: list[int] = []
            ready: list[int] = []
            for vi, (ri, _sup, pos_in) in enumerate(rule_views):
                n_wait = 0
                if not (self.bp_false[ri] or self.bn_true[ri]):
                    for p in pos_in:
                        if p not in founded:
                            n_wait += 1
                            occ.setdefault(p, []).append(vi)
                    if n_wait == 0:
                        ready.append(vi)
                pending.append(n_wait)
            while ready:
                vi = ready.pop()
                ri, sup, _pos_in = rule_views[vi]
                ht = self.hd_true[ri]
                for h in sup:
                    if h in founded:
                        continue
                    if ht and not (ht == 1 and assignment[h] == TRUE):
                        continue  # another head literal is true
                    founded.add(h)
                    for wi in occ.get(h, ()):
                        pending[wi] -= 1
                        if pending[wi] == 0:
                            ready.append(wi)
            for l in comp_sorted:
                if l not in founded and assignment[l] != FALSE:
                    self.assign(l, FALSE)  # Conflict when l is true
                    forced = True
        return forced

    def propagate_full(self) -> None:
        """Propagation fixpoint interleaved with the loop-support check."""
        while True:
            self.propagate()
            if not self._unfounded_pass():
                return

    def initial_propagate(self) -> None:
        for lit in range(self.n):
            if self.support_count[lit] == 0:
                self.assign(lit, FALSE)
        self.propagate()
        for ri in range(self.m):
            self._examine(ri)
        self.propagate_full()

    # --- search ---------------------------------------------------------

    def choose_branch(self) -> int:
        """Undefined literal with the highest occurrence count in the bodies
        of unsatisfied rules; ties break to the lowest id; heads of
        unsatisfied rules enter the pool with count zero."""
        assignment = self.assignment
        counts: dict[int, int] = {}
        for ri in range(self.m):
            if self.hd_true[ri] or self.bp_false[ri] or self.bn_true[ri]:
                continue
            for b in self.pos[ri]:
                if assignment[b] == UNDEFINED:
                    counts[b] = counts.get(b, 0) + 1
            for b in self.neg[ri]:
                if assignment[b] == UNDEFINED:
                    counts[b] = counts.get(b, 0) + 1
            for h in self.heads[ri]:
                if assignment[h] == UNDEFINED:
                    counts.setdefault(h, 0)
        best = -1
        best_count = -1
        for lit, cnt in counts.items():
            if cnt > best_count or (cnt == best_count and lit < best):
                best = lit
                best_count = cnt
        if best < 0:
            raise RuntimeError(
                "choose_branch: no undefined literal in an unsatisfied rule")
        return best

    def decide(self, lit: int) -> None:
        self.stats.choices += 1
        self.decisions.append([lit, False, len(self.undo), len(self.trail)])
        self.assign(lit, TRUE)

    def flip_last_decision(self) -> bool:
        """Chronological backtracking: revert to the most recent unflipped
        decision and take its false branch.  False when exhausted."""
        while self.decisions:
            lit, flipped, undo_mark, trail_mark = self.decisions[-1]
            self._undo_to(undo_mark, trail_mark)
            if flipped:
                self.decisions.pop()
                continue
            self.decisions[-1][1] = True
            self.stats.backtracks += 1
            self.assign(lit, FALSE)
            return True
        return False

    def _undo_to(self, undo_mark: int, trail_mark: int) -> None:
        self.queue.clear()
        undo = self.undo
        assignment = self.assignment
        while len(undo) > undo_mark:
            op = undo.pop()
            tag = op[0]
            if tag == _OP_COUNTS:
                lit = op[1]
                value = assignment[lit]
                if value == TRUE:
                    for ri in self.occ_head[lit]:
                        self.hd_true[ri] -= 1
                    for ri in self.occ_pos[lit]:
                        self.bp_true[ri] -= 1
                    for ri in self.occ_neg[lit]:
                        self.bn_true[ri] -= 1
                else:
                    for ri in self.occ_head[lit]:
                        self.hd_false[ri] -= 1
                    for ri in self.occ_pos[lit]:
                        self.bp_false[ri] -= 1
                    for ri in self.occ_neg[lit]:
                        self.bn_false[ri] -= 1
            elif tag == _OP_ASSIGN:
                assignment[op[1]] = UNDEFINED
                self.num_assigned -= 1
            else:
                _, ri, dec = op
                self.dead[ri] = 0
                for h in dec:
                    self.support_count[h] += 1
        del self.trail[trail_mark:]

    def model(self) -> frozenset[int]:
        assignment = self.assignment
        return frozenset(l for l in range(self.n) if assignment[l] == TRUE)


def _tarjan_atoms(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan over literal ids (duplicate edges tolerated)."""
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            recurse = False
            neighbors = succ[v]
            while pi < len(neighbors):
                w = neighbors[pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if recurse:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    return out


def propagate(state: SolverState) -> SolverState:
    """Deterministic closure of the current assignment; raises Conflict."""
    state.propagate()
    return state


def choose_branch(state: SolverState, gp: GroundProgram | None = None) -> int:
    return state.choose_branch()


def enumerate_answer_sets(
    gp: GroundProgram,
    limit: EnumerationLimit | int = 0,
    stats: SolverStats | None = None,
) -> Iterator[frozenset[int]]:
    """Yield exactly the consistent answer sets of the ground program, in a
    deterministic order; every candidate is verified by the checker."""
    max_sets = limit.max_answer_sets if isinstance(limit, EnumerationLimit) \
        else limit
    state = SolverState(gp, stats if stats is not None else SolverStats())
    st = state.stats
    try:
        state.initial_propagate()
    except Conflict:
        return
    while True:
        if state.num_assigned == state.n:
            st.candidates += 1
            x = state.model()
            if is_answer_set(gp, x):
                st.emitted += 1
                yield x
                if max_sets and st.emitted >= max_sets:
                    return
            else:
                st.rejected += 1
            if not state.flip_last_decision():
                return
        else:
            state.decide(state.choose_branch())
        while True:
            try:
                state.propagate_full()
                break
            except Conflict:
                if not state.flip_last_decision():
                    return
