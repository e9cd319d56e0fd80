"""Recursive-descent parser for the rule language.

Grammar sketch (full EBNF in docs/grammar.ebnf):

    program    ::= { rule | query }
    rule       ::= [ head ] [ ":-" body ] "."
    head       ::= literal { ("v" | "|") literal }
    body       ::= element { "," element }
    element    ::= "not" literal | literal | builtin
    literal    ::= [ "-" ] atom
    atom       ::= ident [ "(" term { "," term } ")" ]
    builtin    ::= "#int" "(" term ")" | "#succ" "(" term "," term ")"
                 | term cmp term | term "=" term ("+" | "*") term
    query      ::= [ "not" ] literal { "," [ "not" ] literal } "?"

`%` starts a line comment.  Identifiers are [a-z][A-Za-z0-9_]*, variables
[A-Z_][A-Za-z0-9_]*, integers [0-9]+.  `<>` is a synonym for `!=`; `v` and
`|` are both accepted as the disjunction separator (`v` only in separator
position, so it stays usable as an identifier).  `not` is reserved.

Each bare `_` is a fresh anonymous variable.  Internally it gets a name of
the form `_#<n>` (unlexable, so it can never collide with user variables);
the pretty-printer renders such names back as `_`.  The counter restarts at
every statement, which keeps print/parse round-trips stable.

Input is treated as an 8-bit ASCII superset: bytes are preserved verbatim
(decode with latin-1), and the token rules restrict identifiers to ASCII.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

from .errors import ArityError, ParseError
from .model import (
    Atom,
    BuiltinAtom,
    BuiltinKind,
    Constant,
    Literal,
    Program,
    Rule,
    SourceSpan,
    SymbolTable,
    ArityMismatch,
    Variable,
)

_TOKEN_RE = re.compile(
    r"""[ \t\r\n\f]+
      | %[^\n]*
      | (?P<ID>[a-z][A-Za-z0-9_]*)
      | (?P<VAR>[A-Z_][A-Za-z0-9_]*)
      | (?P<INT>[0-9]+)
      | (?P<BI>\#[a-z][A-Za-z0-9_]*)
      | (?P<OP>:-|<=|>=|!=|<>|[.,()?{}|<>=+*-])
      | (?P<ERR>.)
    """,
    re.VERBOSE | re.DOTALL,
)

# token kinds = regex group indices
_ID, _VAR, _INT, _BI, _OP, _ERR = 1, 2, 3, 4, 5, 6
_EOF = 0

_COMPARISONS = {
    "<": BuiltinKind.LT,
    "<=": BuiltinKind.LE,
    ">": BuiltinKind.GT,
    ">=": BuiltinKind.GE,
    "=": BuiltinKind.EQ,
    "!=": BuiltinKind.NE,
    "<>": BuiltinKind.NE,
}


@dataclass(frozen=True, slots=True)
class QueryConjunct:
    literal: Literal
    default_negated: bool = False

    def __str__(self) -> str:
        return ("not " if self.default_negated else "") + str(self.literal)


@dataclass(frozen=True, slots=True)
class Query:
    """Nonempty conjunction of literals, `?`-terminated in the source."""

    conjuncts: tuple[QueryConjunct, ...]

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.conjuncts:
            for t in c.literal.atom.args:
                if isinstance(t, Variable):
                    seen.setdefault(t.name, None)
        return list(seen)

    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self) -> str:
        return ", ".join(str(c) for c in self.conjuncts) + "?"


class _Source:
    """Concatenated input segments with offset -> (file, line, column)."""

    def __init__(self, segments: list[tuple[str, str]]) -> None:
        self.text = "".join(text for _, text in segments)
        self.seg_starts: list[int] = []
        self.seg_files: list[str] = []
        pos = 0
        for path, text in segments:
            self.seg_starts.append(pos)
            self.seg_files.append(path)
            pos += len(text)
        self.line_starts = [0]
        self.line_starts.extend(m.end() for m in re.finditer("\n", self.text))

    def span_at(self, offset: int) -> SourceSpan:
        seg = bisect_right(self.seg_starts, offset) - 1
        seg = max(seg, 0)
        line = bisect_right(self.line_starts, offset) - 1
        # line/column are relative to the segment's own text
        seg_line = bisect_right(self.line_starts, self.seg_starts[seg]) - 1
        col = offset - self.line_starts[line] + 1
        if line == seg_line:
            col = offset - max(self.line_starts[line], self.seg_starts[seg]) + 1
        return SourceSpan(self.seg_files[seg], line - seg_line + 1, col)

    def span_cursor(self):
        """Amortized O(1) span lookup for monotonically increasing offsets
        (statement starts during a parse)."""
        seg_starts = self.seg_starts
        seg_files = self.seg_files
        line_starts = self.line_starts
        n_segs = len(seg_starts)
        n_lines = len(line_starts)
        state = [0, 0, 0]  # segment index, line index, segment's first line

        def at(offset: int) -> SourceSpan:
            seg, line, seg_line = state
            while seg + 1 < n_segs and seg_starts[seg + 1] <= offset:
                seg += 1
                while seg_line + 1 < n_lines \
                        and line_starts[seg_line + 1] <= seg_starts[seg]:
                    seg_line += 1
                line = max(line, seg_line)
            while line + 1 < n_lines and line_starts[line + 1] <= offset:
                line += 1
            state[0], state[1], state[2] = seg, line, seg_line
            col = offset - line_starts[line] + 1
            if line == seg_line:
                col = offset - max(line_starts[line], seg_starts[seg]) + 1
            return SourceSpan(seg_files[seg], line - seg_line + 1, col)

        return at


class _Parser:
    def __init__(self, source: _Source, max_int: int) -> None:
        self.source = source
        self.table = SymbolTable()
        self.max_int = max_int
        self.rules: list[Rule] = []
        self.query: Query | None = None
        self._names: dict[str, str] = {}
        self._anon = 0
        self._span_at = source.span_cursor()
        self._it = _TOKEN_RE.finditer(source.text)
        self.kind = _EOF
        self.text = ""
        self.pos = 0
        self._advance()

    # --- token stream -------------------------------------------------

    def _advance(self) -> None:
        for m in self._it:
            kind = m.lastindex
            if kind is None:
                continue
            if kind == _ERR:
                raise ParseError(
                    self.source.span_at(m.start()),
                    f"unexpected character {m.group()!r}",
                )
            text = m.group()
            if kind == _ID or kind == _VAR:
                text = self._names.setdefault(text, text)
            self.kind = kind
            self.text = text
            self.pos = m.start()
            return
        self.kind = _EOF
        self.text = ""
        self.pos = len(self.source.text)

    def _err(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(self.source.span_at(self.pos if pos is None else pos),
                          message)

    def _at_op(self, text: str) -> bool:
        return self.kind == _OP and self.text == text

    def _expect_op(self, text: str) -> None:
        if not self._at_op(text):
            got = repr(self.text) if self.kind != _EOF else "end of input"
            raise self._err(f"expected {text!r}, found {got}")
        self._advance()

    # --- grammar ------------------------------------------------------

    def parse(self) -> tuple[Program, Query | None]:
        while self.kind != _EOF:
            self._statement()
        return Program(tuple(self.rules), self.table, self.max_int), self.query

    def _statement(self) -> None:
        start = self.pos
        self._anon = 0
        if self._at_op(":-"):
            self._advance()
            pos, neg, builtins = self._body()
            self._expect_op(".")
            self._push_rule((), pos, neg, builtins, start)
            return
        if self.kind == _ID and self.text == "not":
            self._advance()
            lit = self._literal()
            self._query_rest([QueryConjunct(lit, True)], start)
            return
        lit = self._literal()
        if self._at_op("."):
            self._advance()
            self._push_rule((lit,), (), (), (), start)
            return
        if self._at_op("|") or (self.kind == _ID and self.text == "v"):
            head = [lit]
            while self._at_op("|") or (self.kind == _ID and self.text == "v"):
                self._advance()
                head.append(self._literal())
            if self._at_op("."):
                self._advance()
                self._push_rule(tuple(head), (), (), (), start)
                return
            self._expect_op(":-")
            pos, neg, builtins = self._body()
            self._expect_op(".")
            self._push_rule(tuple(head), pos, neg, builtins, start)
            return
        if self._at_op(":-"):
            self._advance()
            pos, neg, builtins = self._body()
            self._expect_op(".")
            self._push_rule((lit,), pos, neg, builtins, start)
            return
        if self._at_op(",") or self._at_op("?"):
            self._query_rest([QueryConjunct(lit, False)], start)
            return
        raise self._err(
            f"expected '.', ':-', ',', '?' or disjunction, found {self.text!r}"
            if self.kind != _EOF else "unexpected end of input in statement")

    def _query_rest(self, conjuncts: list[QueryConjunct], start: int) -> None:
        while self._at_op(","):
            self._advance()
            naf = False
            if self.kind == _ID and self.text == "not":
                naf = True
                self._advance()
            conjuncts.append(QueryConjunct(self._literal(), naf))
        if not self._at_op("?"):
            raise self._err("expected '?' at end of query")
        self._advance()
        if self.query is not None:
            raise self._err("multiple queries in input (at most one per run)",
                            start)
        self.query = Query(tuple(conjuncts))

    def _push_rule(self, head, pos, neg, builtins, start: int) -> None:
        self.rules.append(Rule(head, pos, neg, builtins, self._span_at(start)))

    def _body(self):
        pos: list[Literal] = []
        neg: list[Literal] = []
        builtins: list[BuiltinAtom] = []
        while True:
            self._body_element(pos, neg, builtins)
            if self._at_op(","):
                self._advance()
                continue
            return tuple(pos), tuple(neg), tuple(builtins)

    def _body_element(self, pos, neg, builtins) -> None:
        if self.kind == _ID and self.text == "not":
            self._advance()
            neg.append(self._literal())
            return
        if self._at_op("-"):
            pos.append(self._literal())
            return
        if self.kind == _BI:
            builtins.append(self._hash_builtin())
            return
        if self.kind == _VAR or self.kind == _INT:
            builtins.append(self._term_builtin(self._term()))
            return
        if self.kind == _ID:
            name = self.text
            namepos = self.pos
            self._advance()
            if self._at_op("("):
                args = self._arg_list()
                if self.kind == _OP and self.text in _COMPARISONS:
                    raise self._err("built-in arguments must be terms, "
                                    "not atoms with arguments")
                pos.append(self._make_literal(name, args, False, namepos))
                return
            if self.kind == _OP and self.text in _COMPARISONS:
                builtins.append(self._term_builtin(Constant(name)))
                return
            pos.append(self._make_literal(name, (), False, namepos))
            return
        raise self._err("expected a body literal or built-in"
                        if self.kind != _EOF else
                        "unexpected end of input in rule body")

    def _term_builtin(self, left) -> BuiltinAtom:
        if not (self.kind == _OP and self.text in _COMPARISONS):
            raise self._err("expected a comparison operator after term")
        op = self.text
        self._advance()
        right = self._term()
        if op == "=" and self.kind == _OP and self.text in ("+", "*"):
            kind = BuiltinKind.PLUS if self.text == "+" else BuiltinKind.TIMES
            self._advance()
            third = self._term()
            # Z = X + Y is stored with the result last: (X, Y, Z)
            return BuiltinAtom(kind, (right, third, left))
        return BuiltinAtom(_COMPARISONS[op], (left, right))

    def _hash_builtin(self) -> BuiltinAtom:
        name = self.text
        namepos = self.pos
        self._advance()
        if name == "#int":
            self._expect_op("(")
            arg = self._term()
            self._expect_op(")")
            return BuiltinAtom(BuiltinKind.INT_CHECK, (arg,))
        if name == "#succ":
            self._expect_op("(")
            a = self._term()
            self._expect_op(",")
            b = self._term()
            self._expect_op(")")
            return BuiltinAtom(BuiltinKind.SUCC, (a, b))
        raise self._err(f"unknown built-in {name!r}", namepos)

    def _literal(self) -> Literal:
        negated = False
        if self._at_op("-"):
            negated = True
            self._advance()
        if self.kind != _ID:
            raise self._err("expected a predicate name"
                            if self.kind != _EOF else
                            "unexpected end of input, expected a literal")
        name = self.text
        namepos = self.pos
        self._advance()
        args: tuple = ()
        if self._at_op("("):
            args = self._arg_list()
        return self._make_literal(name, args, negated, namepos)

    def _make_literal(self, name, args, negated, namepos) -> Literal:
        try:
            self.table.predicate(name, len(args))
        except ArityMismatch as exc:
            raise ArityError(self.source.span_at(namepos), str(exc)) from None
        return Literal(Atom(name, args), negated)

    def _arg_list(self) -> tuple:
        self._expect_op("(")
        args = [self._term()]
        while self._at_op(","):
            self._advance()
            args.append(self._term())
        self._expect_op(")")
        return tuple(args)

    def _term(self):
        kind = self.kind
        if kind == _VAR:
            name = self.text
            self._advance()
            if name == "_":
                self._anon += 1
                return Variable(f"_#{self._anon}")
            return Variable(name)
        if kind == _INT:
            value = int(self.text)
            self._advance()
            return Constant(value)
        if kind == _ID:
            name = self.text
            self.table.symbol(name)
            self._advance()
            return Constant(name)
        raise self._err("expected a term"
                        if kind != _EOF else
                        "unexpected end of input, expected a term")


def parse_source(
    source: str | list[tuple[str, str]],
    *,
    filename: str = "<input>",
    max_int: int = 0,
) -> tuple[Program, Query | None]:
    """Parse rules and at most one query from one text or several named
    segments (concatenated in order)."""
    segments = [(filename, source)] if isinstance(source, str) else source
    return _Parser(_Source(segments), max_int).parse()


def parse_program(source: str, *, filename: str = "<input>",
                  max_int: int = 0) -> Program:
    return parse_source(source, filename=filename, max_int=max_int)[0]


def parse_query(source: str, *, filename: str = "<query>") -> Query:
    """Parse a standalone `?`-terminated query."""
    program, query = parse_source(source, filename=filename)
    src = _Source([(filename, source)])
    if program.rules:
        raise ParseError(src.span_at(0), "expected a query, found rules")
    if query is None:
        raise ParseError(src.span_at(0), "empty query")
    return query


def parse_literal_set(source: str, *, filename: str = "<candidate>"
                      ) -> frozenset[Literal]:
    """Parse a ground literal list in `{a, -p(b, 1)}` syntax."""
    src = _Source([(filename, source)])
    p = _Parser(src, 0)
    p._expect_op("{")
    literals: set[Literal] = set()
    if not p._at_op("}"):
        while True:
            lit = p._literal()
            if not lit.is_ground():
                raise ParseError(src.span_at(p.pos),
                                 "candidate literals must be ground")
            literals.add(lit)
            if p._at_op(","):
                p._advance()
                continue
            break
    p._expect_op("}")
    if p.kind != _EOF:
        raise ParseError(src.span_at(p.pos), "trailing input after candidate")
    return frozenset(literals)


# --- canonical printing ----------------------------------------------

def format_literal(literal: Literal) -> str:
    return str(literal)


def format_rule(rule: Rule) -> str:
    return str(rule)


def format_query(query: Query) -> str:
    return str(query)


def format_program(program: Program) -> str:
    return "".join(str(r) + "\n" for r in program.rules)
