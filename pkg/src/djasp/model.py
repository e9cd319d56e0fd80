"""Core data model: terms, literals, rules, programs, interpretations.

Everything here is an immutable value, safe to share between threads.  The
grounder and solver work on dense integer ids instead of these objects; the
symbol table below is the bridge between the two worlds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Position of a construct in an input file (1-based line/column)."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        # parser-generated anonymous variables print back as `_`
        return "_" if self.name.startswith("_#") else self.name


@dataclass(frozen=True, slots=True)
class Constant:
    """A symbol (lowercase-leading name) or a non-negative integer.

    Symbols and integers are distinct kinds: they never compare equal, and
    `order_key` sorts every integer below every symbol.
    """

    value: str | int

    @property
    def is_integer(self) -> bool:
        return isinstance(self.value, int)

    def order_key(self) -> tuple[int, int | str]:
        if isinstance(self.value, int):
            return (0, self.value)
        return (1, self.value)

    def __str__(self) -> str:
        return str(self.value)


Term = Variable | Constant


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return all(isinstance(t, Constant) for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True, slots=True)
class Literal:
    """Classical literal: an atom, possibly strongly negated (`-a`)."""

    atom: Atom
    strongly_negated: bool = False

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.strongly_negated)

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def __str__(self) -> str:
        return ("-" if self.strongly_negated else "") + str(self.atom)


def complement(literal: Literal) -> Literal:
    """Flip the strong-negation sign; the atom is untouched."""
    return literal.complement()


def is_consistent(literals: Iterable[Literal]) -> bool:
    """True iff the set contains no complementary pair."""
    seen = set(literals)
    return not any(lit.complement() in seen for lit in seen)


class BuiltinKind(Enum):
    INT_CHECK = "#int"
    SUCC = "#succ"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="
    NE = "!="
    PLUS = "+"
    TIMES = "*"


_BUILTIN_ARITY = {
    BuiltinKind.INT_CHECK: 1,
    BuiltinKind.SUCC: 2,
    BuiltinKind.LT: 2,
    BuiltinKind.LE: 2,
    BuiltinKind.GT: 2,
    BuiltinKind.GE: 2,
    BuiltinKind.EQ: 2,
    BuiltinKind.NE: 2,
    BuiltinKind.PLUS: 3,
    BuiltinKind.TIMES: 3,
}

COMPARISON_KINDS = frozenset(
    {BuiltinKind.LT, BuiltinKind.LE, BuiltinKind.GT, BuiltinKind.GE,
     BuiltinKind.EQ, BuiltinKind.NE}
)

# Built-ins whose presence pulls the 0..max_int range into the universe.
INTEGER_BUILTIN_KINDS = frozenset(
    {BuiltinKind.INT_CHECK, BuiltinKind.SUCC, BuiltinKind.PLUS, BuiltinKind.TIMES}
)


@dataclass(frozen=True, slots=True)
class BuiltinAtom:
    """Built-in body element.  Arithmetic `Z = X + Y` is stored as args
    (X, Y, Z), i.e. inputs first, result last; same for `*` and `#succ`."""

    kind: BuiltinKind
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        expected = _BUILTIN_ARITY[self.kind]
        if len(self.args) != expected:
            raise ValueError(
                f"built-in {self.kind.value} expects {expected} arguments, "
                f"got {len(self.args)}"
            )

    def __str__(self) -> str:
        k = self.kind
        if k is BuiltinKind.INT_CHECK:
            return f"#int({self.args[0]})"
        if k is BuiltinKind.SUCC:
            return f"#succ({self.args[0]},{self.args[1]})"
        if k in COMPARISON_KINDS:
            return f"{self.args[0]} {k.value} {self.args[1]}"
        # arithmetic: result = in1 op in2
        return f"{self.args[2]} = {self.args[0]} {k.value} {self.args[1]}"


@dataclass(frozen=True, slots=True)
class Rule:
    """Disjunctive rule.  Empty head = integrity constraint; empty body and
    a singleton head = fact."""

    head: tuple[Literal, ...] = ()
    pos_body: tuple[Literal, ...] = ()
    neg_body: tuple[Literal, ...] = ()
    builtins: tuple[BuiltinAtom, ...] = ()
    span: SourceSpan | None = None

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return (len(self.head) == 1 and not self.pos_body
                and not self.neg_body and not self.builtins)

    def variables(self) -> list[str]:
        """Variable names in first-occurrence order (head, pos, neg, built-ins)."""
        seen: dict[str, None] = {}
        for lit in itertools.chain(self.head, self.pos_body, self.neg_body):
            for t in lit.atom.args:
                if isinstance(t, Variable):
                    seen.setdefault(t.name, None)
        for b in self.builtins:
            for t in b.args:
                if isinstance(t, Variable):
                    seen.setdefault(t.name, None)
        return list(seen)

    def __str__(self) -> str:
        head = " v ".join(str(l) for l in self.head)
        body_parts = [str(l) for l in self.pos_body]
        body_parts += [f"not {l}" for l in self.neg_body]
        body_parts += [str(b) for b in self.builtins]
        if not body_parts:
            return f"{head}."
        if not head:
            return f":- {', '.join(body_parts)}."
        return f"{head} :- {', '.join(body_parts)}."


class SymbolTable:
    """Interns predicate names and constant symbols to dense ids.

    Predicate arity is fixed on first use; a later use with a different
    arity is a load-time error surfaced by the parser.
    """

    def __init__(self) -> None:
        self._pred_ids: dict[str, int] = {}
        self.predicate_names: list[str] = []
        self.predicate_arities: list[int] = []
        self._sym_ids: dict[str, int] = {}
        self.symbol_names: list[str] = []

    def predicate(self, name: str, arity: int) -> int:
        pid = self._pred_ids.get(name)
        if pid is None:
            pid = len(self.predicate_names)
            self._pred_ids[name] = pid
            self.predicate_names.append(name)
            self.predicate_arities.append(arity)
            return pid
        if self.predicate_arities[pid] != arity:
            raise ArityMismatch(name, self.predicate_arities[pid], arity)
        return pid

    def predicate_id(self, name: str) -> int | None:
        return self._pred_ids.get(name)

    def symbol(self, name: str) -> int:
        sid = self._sym_ids.get(name)
        if sid is None:
            sid = len(self.symbol_names)
            self._sym_ids[name] = sid
            self.symbol_names.append(name)
        return sid

    def symbol_id(self, name: str) -> int | None:
        return self._sym_ids.get(name)


class ArityMismatch(Exception):
    """Raised by the symbol table; the parser wraps it with a source span."""

    def __init__(self, name: str, declared: int, used: int) -> None:
        super().__init__(
            f"predicate {name!r} used with arity {used}, "
            f"previously used with arity {declared}"
        )
        self.name = name
        self.declared = declared
        self.used = used


@dataclass(frozen=True)
class Program:
    """A finite set of rules plus the symbol table and the integer range
    bound used by the integer built-ins."""

    rules: tuple[Rule, ...]
    table: SymbolTable = field(default_factory=SymbolTable)
    max_int: int = 0

    def predicates(self) -> dict[str, int]:
        """Predicate name -> arity, in interning order."""
        return dict(zip(self.table.predicate_names, self.table.predicate_arities))

    def constants(self) -> Iterator[Constant]:
        for rule in self.rules:
            for lit in itertools.chain(rule.head, rule.pos_body, rule.neg_body):
                for t in lit.atom.args:
                    if isinstance(t, Constant):
                        yield t
            for b in rule.builtins:
                for t in b.args:
                    if isinstance(t, Constant):
                        yield t

    def uses_integer_range(self) -> bool:
        """True iff an integer built-in or an integer constant occurs."""
        for rule in self.rules:
            for b in rule.builtins:
                if b.kind in INTEGER_BUILTIN_KINDS:
                    return True
        return any(c.is_integer for c in self.constants())


# An interpretation at this level is just a set of ground literals; the
# solver uses frozensets of dense literal ids instead.
Interpretation = frozenset[Literal]


def herbrand_universe(program: Program) -> frozenset[Constant]:
    """All constants occurring in the program, plus 0..max_int when an
    integer built-in or integer constant occurs anywhere."""
    constants = set(program.constants())
    if program.uses_integer_range():
        constants.update(Constant(i) for i in range(program.max_int + 1))
    return frozenset(constants)


def herbrand_base(program: Program) -> frozenset[Literal]:
    """Every predicate applied to every universe tuple, in both signs.

    Exponential in arity; intended for desk-scale oracles and tests.
    """
    universe = sorted(herbrand_universe(program), key=Constant.order_key)
    out: set[Literal] = set()
    for name, arity in program.predicates().items():
        if arity and not universe:
            continue
        for combo in itertools.product(universe, repeat=arity):
            atom = Atom(name, combo)
            out.add(Literal(atom, False))
            out.add(Literal(atom, True))
    return frozenset(out)
