"""Pipeline driver shared by the CLI and the HTTP service.

Output contract: one answer set per line as `{l1, l2, ...}`, literals sorted
by predicate name, then argument tuple (integers numerically and below all
symbols, symbols by byte order), positive before strongly negated; a filter
projects literals onto the listed predicates without changing the number of
printed sets (opt-in deduplication via `unique`).  Identical input and
configuration always produce byte-identical output.
"""

from __future__ import annotations

import resource
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from . import frontends
from .checker import explain_rejection
from .errors import ArityError, ParseError, ResourceLimitError, SafetyError
from .grounding import GroundProgram, ground_program
from .model import Literal, Program
from .parser import Query, parse_literal_set, parse_source
from .solver import EnumerationLimit, SolverStats, enumerate_answer_sets

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SAFETY = 2          # safety and arity errors
EXIT_RESOURCE = 3

MODES = ("solve", "brave", "cautious", "ground-only", "check")


@dataclass
class RunConfig:
    inputs: tuple[str, ...]
    mode: str = "solve"
    max_answer_sets: int = 0      # -n= (0 = all)
    max_int: int = 0              # -N=
    filter_predicates: tuple[str, ...] = ()
    stats: bool = False
    unique: bool = False
    max_memory_mb: int | None = None


def literal_sort_key(lit: Literal):
    return (lit.atom.predicate,
            tuple(t.order_key() for t in lit.atom.args),
            lit.strongly_negated)


def print_answer_set(literals: Iterable[Literal],
                     filter_predicates: Iterable[str] = ()) -> str:
    """Render one answer set as a `{...}` line under the output contract."""
    wanted = set(filter_predicates)
    chosen = [l for l in literals if not wanted or l.atom.predicate in wanted]
    chosen.sort(key=literal_sort_key)
    return "{" + ", ".join(str(l) for l in chosen) + "}"


def load_inputs(paths: Iterable[str], *, max_int: int = 0
                ) -> tuple[Program, Query | None]:
    """Concatenate the files in argument order and parse them as one
    source (spans keep per-file positions)."""
    segments = []
    for path in paths:
        with open(path, "rb") as fh:
            text = fh.read().decode("latin-1")
        if text and not text.endswith("\n"):
            text += "\n"
        segments.append((path, text))
    return parse_source(segments, max_int=max_int)


@dataclass
class SolveResult:
    """Structured pipeline result, used by the service and tests."""

    lines: list[str] = field(default_factory=list)
    answer_sets: list[frozenset[Literal]] = field(default_factory=list)
    stats: SolverStats = field(default_factory=SolverStats)
    warnings: list[str] = field(default_factory=list)


def solve_program(program: Program, *, max_answer_sets: int = 0,
                  filter_predicates: Iterable[str] = (), unique: bool = False,
                  max_memory_mb: int | None = None,
                  collect_sets: bool = False,
                  on_line: Callable[[str], None] | None = None) -> SolveResult:
    """Ground, enumerate, verify, filter and render answer sets."""
    result = SolveResult()
    gp = ground_program(program, max_memory_mb=max_memory_mb)
    result.warnings.extend(gp.warnings)
    seen: set[str] = set()
    for x in enumerate_answer_sets(gp, EnumerationLimit(max_answer_sets),
                                   result.stats):
        literals = [gp.table.decode(l) for l in x]
        line = print_answer_set(literals, filter_predicates)
        if unique:
            if line in seen:
                continue
            seen.add(line)
        result.lines.append(line)
        if collect_sets:
            result.answer_sets.append(frozenset(literals))
        if on_line is not None:
            on_line(line)
    return result


def ground_only(program: Program, *, max_memory_mb: int | None = None
                ) -> tuple[GroundProgram, list[str]]:
    gp = ground_program(program, max_memory_mb=max_memory_mb)
    return gp, [gp.format_rule(r) for r in gp.rules]


def check_candidate(program: Program, candidate: frozenset[Literal],
                    *, max_memory_mb: int | None = None
                    ) -> tuple[bool, str | None]:
    """Is the candidate an answer set of the program?  Returns the verdict
    and the failing condition (None when accepted)."""
    gp = ground_program(program, max_memory_mb=max_memory_mb)
    table = program.table
    ids = []
    for lit in sorted(candidate, key=literal_sort_key):
        pid = table.predicate_id(lit.atom.predicate)
        if pid is None or table.predicate_arities[pid] != lit.atom.arity:
            return False, (f"literal {lit} is outside the program's "
                           f"Herbrand base")
        args = []
        for t in lit.atom.args:
            if isinstance(t.value, int):
                args.append(t.value)
            else:
                sid = table.symbol_id(t.value)
                if sid is None:
                    return False, (f"literal {lit} is outside the program's "
                                   f"Herbrand base")
                args.append(-sid - 1)
        ids.append(gp.table.intern((pid, tuple(args), lit.strongly_negated)))
    reason = explain_rejection(gp, frozenset(ids))
    return reason is None, reason


def render_query_answer(answer: frontends.QueryAnswer) -> list[str]:
    """Stdout lines for a query answer (see README for the format)."""
    if answer.is_ground:
        if answer.result and answer.no_answer_sets:
            return ["true (no answer sets)"]
        return ["true" if answer.result else "false"]
    lines = []
    if answer.no_answer_sets:
        lines.append("% no answer sets")
    for combo in answer.substitutions or ():
        lines.append(", ".join(f"{v}={c}"
                               for v, c in zip(answer.variables, combo)))
    return lines


def run(config: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    """Full pipeline with the documented exit codes: 0 success (including
    zero answer sets), 1 parse error, 2 safety/arity error, 3 resource
    limit."""
    try:
        return _run(config, stdout, stderr)
    except ParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except (ArityError, SafetyError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_SAFETY
    except (ResourceLimitError, MemoryError) as exc:
        print(f"error: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE


def _run(config: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    mode = config.mode
    if mode == "check":
        if len(config.inputs) < 2:
            print("error: --check needs program file(s) plus a candidate "
                  "file (the last path)", file=stderr)
            return EXIT_PARSE
        program, query = load_inputs(config.inputs[:-1],
                                     max_int=config.max_int)
        with open(config.inputs[-1], "rb") as fh:
            candidate_text = fh.read().decode("latin-1")
        candidate = parse_literal_set(candidate_text,
                                      filename=config.inputs[-1])
        ok, reason = check_candidate(program, candidate,
                                     max_memory_mb=config.max_memory_mb)
        if ok:
            print("answer set", file=stdout)
        else:
            print(f"not an answer set ({reason})", file=stdout)
        return EXIT_OK

    program, query = load_inputs(config.inputs, max_int=config.max_int)

    if mode == "ground-only":
        gp, lines = ground_only(program, max_memory_mb=config.max_memory_mb)
        for w in gp.warnings:
            print(f"warning: {w}", file=stderr)
        for line in lines:
            print(line, file=stdout)
        return EXIT_OK

    if mode in ("brave", "cautious"):
        if query is None:
            print(f"error: -{mode} requires a query (terminated by '?') "
                  "in the input", file=stderr)
            return EXIT_PARSE
        fn = frontends.brave if mode == "brave" else frontends.cautious
        answer = fn(program, query)
        for line in render_query_answer(answer):
            print(line, file=stdout)
        return EXIT_OK

    # plain solve
    if query is not None:
        print("warning: query ignored (run with -brave or -cautious)",
              file=stderr)
    result = solve_program(
        program,
        max_answer_sets=config.max_answer_sets,
        filter_predicates=config.filter_predicates,
        unique=config.unique,
        max_memory_mb=config.max_memory_mb,
        on_line=lambda line: print(line, file=stdout),
    )
    for w in result.warnings:
        print(f"warning: {w}", file=stderr)
    if config.stats:
        s = result.stats
        print(f"choices: {s.choices}", file=stderr)
        print(f"backtracks: {s.backtracks}", file=stderr)
        print(f"candidates: {s.candidates}", file=stderr)
        print(f"rejected: {s.rejected}", file=stderr)
        print(f"answer sets: {s.emitted}", file=stderr)
    return EXIT_OK


def peak_rss_mb() -> int:
    """Process peak RSS in MiB (Linux getrusage reports KiB)."""
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss // 1024
