"""Model checking: is an interpretation an answer set?

A candidate X is accepted iff it is consistent, closed under the reduct of
the ground program w.r.t. X, and a minimal model of that reduct.  The
minimality test simplifies the reduct to the atoms of X and then searches
for a closed proper subset with a small propagate-and-branch procedure
(exclude-first); worst case exponential, which is expected for disjunctive
programs, but propagation settles almost everything on typical candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grounding import GroundProgram

Interpretation = frozenset[int]


@dataclass(frozen=True)
class PositiveGroundProgram:
    """Ground rules with the default-negated part already resolved away."""

    rules: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


def reduct(gp: GroundProgram, x: Interpretation) -> PositiveGroundProgram:
    """Drop rules whose negative body intersects x, strip the negative body
    from the rest."""
    rules = []
    for r in gp.rules:
        if any(b in x for b in r.neg_body):
            continue
        rules.append((r.head, r.pos_body))
    return PositiveGroundProgram(tuple(rules))


def is_closed(interp: Interpretation, pp: PositiveGroundProgram) -> bool:
    """True iff every rule with its body inside `interp` has a head literal
    in `interp`."""
    for head, body in pp.rules:
        if all(b in interp for b in body):
            if not any(h in interp for h in head):
                return False
    return True


def is_minimal_model(interp: Interpretation, pp: PositiveGroundProgram) -> bool:
    """Precondition: `interp` is consistent and closed under `pp`.  True iff
    no consistent proper subset of `interp` is closed under `pp`."""
    return not _has_closed_proper_subset(interp, pp)


def _has_closed_proper_subset(interp: Interpretation,
                              pp: PositiveGroundProgram) -> bool:
    # simplify w.r.t. interp: rules with a body atom outside can never fire
    # inside a subset; head atoms outside can never rescue closure
    atoms = sorted(interp)
    local = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    rules: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for head, body in pp.rules:
        if any(b not in interp for b in body):
            continue
        h2 = tuple(local[h] for h in head if h in interp)
        rules.append((h2, tuple(local[b] for b in body)))

    occ_body: list[list[int]] = [[] for _ in range(n)]
    occ_head: list[list[int]] = [[] for _ in range(n)]
    for ri, (head, body) in enumerate(rules):
        for a in body:
            occ_body[a].append(ri)
        for a in head:
            occ_head[a].append(ri)

    UNDEF, IN, OUT = 0, 1, 2
    status = bytearray(n)
    body_undecided = [len(b) for h, b in rules]
    head_out = [0] * len(rules)
    head_sizes = [len(h) for h, b in rules]
    trail: list[int] = []

    def assign(a: int, val: int) -> bool:
        """Returns False on conflict; appends to trail on success."""
        cur = status[a]
        if cur:
            return cur == val
        status[a] = val
        trail.append(a)
        queue = [(a, val)]
        while queue:
            b, v = queue.pop()
            if v == IN:
                for ri in occ_body[b]:
                    body_undecided[ri] -= 1
                    if body_undecided[ri] == 0:
                        ok = _fire(ri, queue)
                        if not ok:
                            return False
            else:
                for ri in occ_head[b]:
                    head_out[ri] += 1
                    if body_undecided[ri] == 0:
                        ok = _fire(ri, queue)
                        if not ok:
                            return False
        return True

    def _fire(ri: int, queue: list) -> bool:
        # body fully IN: closure demands a head atom IN
        head, _body = rules[ri]
        out = head_out[ri]
        size = head_sizes[ri]
        if out == size:
            return False
        if out == size - 1:
            for h in head:
                if status[h] != OUT:
                    if status[h] == IN:
                        return True
                    status[h] = IN
                    trail.append(h)
                    queue.append((h, IN))
                    return True
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            a = trail.pop()
            val = status[a]
            status[a] = UNDEF
            if val == IN:
                for ri in occ_body[a]:
                    body_undecided[ri] += 1
            else:
                for ri in occ_head[a]:
                    head_out[ri] -= 1

    # root propagation: unit positive rules force their head in
    root_mark = len(trail)
    for ri, (head, body) in enumerate(rules):
        if not body and len(head) == 1 and status[head[0]] != IN:
            if not assign(head[0], IN):
                undo(root_mark)
                return False
        elif not body and not head:
            return False  # unsatisfiable constraint: interp was not closed

    # DFS over remaining atoms, excluding first
    order = [a for a in range(n) if status[a] == UNDEF]
    some_out_root = any(status[a] == OUT for a in range(n))

    def dfs(i: int, some_out: bool) -> bool:
        while i < len(order) and status[order[i]] != UNDEF:
            i += 1
        if i == len(order):
            return some_out or any(status[a] == OUT for a in range(n))
        a = order[i]
        for val in (OUT, IN):
            mark = len(trail)
            if assign(a, val) and dfs(i + 1, some_out or val == OUT):
                return True
            undo(mark)
        return False

    found = dfs(0, some_out_root)
    undo(root_mark)
    return found


def is_answer_set(gp: GroundProgram, x: Interpretation) -> bool:
    """Consistent, closed under the reduct w.r.t. x, and minimal there."""
    comp = gp.complements()
    for lid in x:
        c = comp[lid]
        if c >= 0 and c in x:
            return False
    rp = reduct(gp, x)
    if not is_closed(x, rp):
        return False
    return is_minimal_model(x, rp)


def explain_rejection(gp: GroundProgram, x: Interpretation) -> str | None:
    """None when x is an answer set, otherwise the first failing condition."""
    comp = gp.complements()
    for lid in sorted(x):
        c = comp[lid]
        if c >= 0 and c in x:
            return (f"inconsistent: contains both {gp.table.format(lid)} "
                    f"and {gp.table.format(c)}")
    rp = reduct(gp, x)
    if not is_closed(x, rp):
        return "not closed under the reduct"
    if not is_minimal_model(x, rp):
        return "not a minimal model of the reduct"
    return None
