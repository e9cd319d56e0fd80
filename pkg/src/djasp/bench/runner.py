"""Benchmark driver: `djasp bench run <kind> --params... --seed S`.

Each instance line reports the answer sets found and the wall time; with
`--oracle` the answer sets (projected onto the solution predicate) are
compared against the brute-force oracle, which forces full enumeration and
is subject to the oracle size caps.  Output is an aligned table by default
or `key=value` machine lines with `--format lines`.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from ..model import Literal
from ..parser import parse_source
from ..pipeline import solve_program
from .encodings import KINDS, SOLUTION_PREDICATE, encoding
from .generators import InstanceSpec, generate
from .oracles import oracle


def project_solution(kind: str, literals: frozenset[Literal]) -> frozenset:
    """Solution-predicate view of one answer set, in oracle shape."""
    predicate = SOLUTION_PREDICATE[kind]
    out = []
    for lit in literals:
        if lit.atom.predicate == predicate and not lit.strongly_negated:
            out.append(tuple(t.value for t in lit.atom.args))
    if kind == "stratcomp":
        return frozenset(v[0] for v in out)
    return frozenset(out)


@dataclass
class BenchResult:
    instance: str
    answer_sets: int
    wall_time: float
    verified: bool | None = None   # None: oracle not requested


def run_instance(spec: InstanceSpec, *, limit: int = 0,
                 use_oracle: bool = False) -> BenchResult:
    facts = generate(spec)
    program, _ = parse_source([("<encoding>", encoding(spec.kind)),
                               ("<facts>", facts)])
    t0 = time.perf_counter()
    result = solve_program(program,
                           max_answer_sets=0 if use_oracle else limit,
                           collect_sets=use_oracle)
    wall = time.perf_counter() - t0
    verified = None
    if use_oracle:
        got = {project_solution(spec.kind, x) for x in result.answer_sets}
        verified = got == oracle(spec.kind, facts)
    return BenchResult(spec.label(), len(result.lines), wall, verified)


def format_table(rows: list[BenchResult]) -> str:
    headers = ("instance", "answer sets", "wall time", "verified")
    cells = [(r.instance, str(r.answer_sets), f"{r.wall_time:.3f}s",
              "-" if r.verified is None else ("yes" if r.verified else "NO"))
             for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for c in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip())
    return "\n".join(lines) + "\n"


def format_lines(rows: list[BenchResult]) -> str:
    out = []
    for r in rows:
        verified = "-" if r.verified is None else \
            ("yes" if r.verified else "no")
        out.append(f"instance={r.instance} answer_sets={r.answer_sets} "
                   f"wall={r.wall_time:.3f} verified={verified}")
    return "\n".join(out) + "\n"


def bench_main(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(
        prog="djasp bench", description="benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="generate and solve instances")
    run_p.add_argument("kind", choices=KINDS)
    run_p.add_argument("--seed", type=int, required=True,
                       help="base seed; instance i uses seed+i")
    run_p.add_argument("--count", type=int, default=1,
                       help="number of instances")
    run_p.add_argument("--nodes", type=int)
    run_p.add_argument("--edges", type=int)
    run_p.add_argument("--arcs", type=int)
    run_p.add_argument("--companies", type=int)
    run_p.add_argument("--products", type=int)
    run_p.add_argument("--controls", type=int)
    run_p.add_argument("--variables", type=int)
    run_p.add_argument("--clauses", type=int)
    run_p.add_argument("--plant", action="store_true",
                       help="embed a solution (3col / hpath)")
    run_p.add_argument("--limit", type=int, default=0,
                       help="answer sets per instance (0 = all)")
    run_p.add_argument("--oracle", action="store_true",
                       help="verify against the brute-force oracle")
    run_p.add_argument("--format", choices=("table", "lines"),
                       default="table")
    args = parser.parse_args(argv)

    rows = []
    for i in range(args.count):
        spec = InstanceSpec(
            kind=args.kind, seed=args.seed + i, nodes=args.nodes,
            edges=args.edges, arcs=args.arcs, companies=args.companies,
            products=args.products, controls=args.controls,
            variables=args.variables, clauses=args.clauses,
            plant=args.plant)
        try:
            rows.append(run_instance(spec, limit=args.limit,
                                     use_oracle=args.oracle))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    text = format_table(rows) if args.format == "table" else format_lines(rows)
    sys.stdout.write(text)
    if any(r.verified is False for r in rows):
        return 1
    return 0
