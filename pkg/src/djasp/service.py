"""HTTP service wrapping the solving pipeline.

Endpoints:
    GET  /health      liveness probe
    POST /solve       enumerate answer sets of a program
    POST /ground      return the simplified ground program
    POST /check       verify a candidate answer set
    POST /query       brave / cautious query answering
    POST /bench/run   generate and solve benchmark instances

Load-time problems (parse / arity / safety errors) map to HTTP 400 with the
error kind and source position; resource-limit overruns map to 507.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .bench.encodings import KINDS
from .bench.generators import InstanceSpec
from .bench.runner import BenchResult, run_instance
from .errors import ArityError, ParseError, ResourceLimitError, SafetyError
from .frontends import brave, cautious
from .parser import parse_literal_set, parse_source
from .pipeline import (
    check_candidate,
    ground_only,
    print_answer_set,
    render_query_answer,
    solve_program,
)

_ERROR_KIND = {ParseError: "parse", ArityError: "arity", SafetyError: "safety"}


class SolveRequest(BaseModel):
    program: str
    max_answer_sets: int = Field(0, ge=0, description="0 = all")
    max_int: int = Field(0, ge=0)
    filter_predicates: list[str] = []
    unique: bool = False
    max_memory_mb: int | None = Field(None, ge=1)


class SolverStatsModel(BaseModel):
    choices: int
    backtracks: int
    candidates: int
    rejected: int
    emitted: int


class SolveResponse(BaseModel):
    answer_sets: list[str]
    count: int
    stats: SolverStatsModel
    warnings: list[str]


class GroundRequest(BaseModel):
    program: str
    max_int: int = Field(0, ge=0)
    max_memory_mb: int | None = Field(None, ge=1)


class GroundResponse(BaseModel):
    rules: list[str]
    rule_count: int
    literal_count: int
    warnings: list[str]


class CheckRequest(BaseModel):
    program: str
    candidate: str = Field(description="literal list in `{a, -p(b)}` syntax")
    max_int: int = Field(0, ge=0)


class CheckResponse(BaseModel):
    is_answer_set: bool
    failed_condition: str | None


class QueryRequest(BaseModel):
    program: str
    query: str | None = Field(
        None, description="`?`-terminated; may instead appear in `program`")
    mode: str = Field(pattern="^(brave|cautious)$")
    max_int: int = Field(0, ge=0)
    witness: bool = False


class QueryResponse(BaseModel):
    ground: bool
    result: bool | None
    substitutions: list[dict[str, str]]
    witness: str | None
    no_answer_sets: bool
    lines: list[str]


class BenchRequest(BaseModel):
    kind: str = Field(pattern=f"^({'|'.join(KINDS)})$")
    seed: int
    count: int = Field(1, ge=1, le=100)
    nodes: int | None = None
    edges: int | None = None
    arcs: int | None = None
    companies: int | None = None
    products: int | None = None
    controls: int | None = None
    variables: int | None = None
    clauses: int | None = None
    plant: bool = False
    limit: int = Field(0, ge=0)
    oracle: bool = False


class BenchRow(BaseModel):
    instance: str
    answer_sets: int
    wall_time: float
    verified: bool | None


class BenchResponse(BaseModel):
    results: list[BenchRow]


def _load(program_text: str, max_int: int):
    try:
        return parse_source(program_text, max_int=max_int)
    except (ParseError, ArityError) as exc:
        _bad_request(exc)


def _bad_request(exc) -> None:
    detail = {"kind": _ERROR_KIND.get(type(exc), "error"),
              "message": exc.message,
              "file": exc.span.file, "line": exc.span.line,
              "column": exc.span.column}
    raise HTTPException(status_code=400, detail=detail) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="djasp", version=__version__,
                  description="disjunctive datalog solving as a service")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        program, _query = _load(req.program, req.max_int)
        try:
            result = solve_program(
                program,
                max_answer_sets=req.max_answer_sets,
                filter_predicates=tuple(req.filter_predicates),
                unique=req.unique,
                max_memory_mb=req.max_memory_mb)
        except SafetyError as exc:
            _bad_request(exc)
        except (ResourceLimitError, MemoryError) as exc:
            raise HTTPException(status_code=507, detail=str(exc)) from exc
        s = result.stats
        return SolveResponse(
            answer_sets=result.lines, count=len(result.lines),
            stats=SolverStatsModel(choices=s.choices, backtracks=s.backtracks,
                                   candidates=s.candidates,
                                   rejected=s.rejected, emitted=s.emitted),
            warnings=result.warnings)

    @app.post("/ground", response_model=GroundResponse)
    def ground(req: GroundRequest) -> GroundResponse:
        program, _query = _load(req.program, req.max_int)
        try:
            gp, lines = ground_only(program, max_memory_mb=req.max_memory_mb)
        except SafetyError as exc:
            _bad_request(exc)
        except (ResourceLimitError, MemoryError) as exc:
            raise HTTPException(status_code=507, detail=str(exc)) from exc
        return GroundResponse(rules=lines, rule_count=len(lines),
                              literal_count=len(gp.table),
                              warnings=list(gp.warnings))

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        program, _query = _load(req.program, req.max_int)
        try:
            candidate = parse_literal_set(req.candidate)
        except ParseError as exc:
            _bad_request(exc)
        try:
            ok, reason = check_candidate(program, candidate)
        except SafetyError as exc:
            _bad_request(exc)
        return CheckResponse(is_answer_set=ok, failed_condition=reason)

    @app.post("/query", response_model=QueryResponse)
    def query(req: QueryRequest) -> QueryResponse:
        program, inline_query = _load(req.program, req.max_int)
        q = inline_query
        if req.query is not None:
            from .parser import parse_query
            try:
                q = parse_query(req.query)
            except ParseError as exc:
                _bad_request(exc)
        if q is None:
            raise HTTPException(
                status_code=400,
                detail={"kind": "query", "message": "no query supplied"})
        fn = brave if req.mode == "brave" else cautious
        try:
            answer = fn(program, q, want_witness=req.witness)
        except SafetyError as exc:
            _bad_request(exc)
        subs = [dict(zip(answer.variables, map(str, combo)))
                for combo in (answer.substitutions or ())]
        witness = (print_answer_set(answer.witness)
                   if answer.witness is not None else None)
        return QueryResponse(
            ground=answer.is_ground, result=answer.result,
            substitutions=subs, witness=witness,
            no_answer_sets=answer.no_answer_sets,
            lines=render_query_answer(answer))

    @app.post("/bench/run", response_model=BenchResponse)
    def bench(req: BenchRequest) -> BenchResponse:
        rows: list[BenchResult] = []
        for i in range(req.count):
            spec = InstanceSpec(
                kind=req.kind, seed=req.seed + i, nodes=req.nodes,
                edges=req.edges, arcs=req.arcs, companies=req.companies,
                products=req.products, controls=req.controls,
                variables=req.variables, clauses=req.clauses,
                plant=req.plant)
            try:
                rows.append(run_instance(spec, limit=req.limit,
                                         use_oracle=req.oracle))
            except ValueError as exc:
                raise HTTPException(status_code=400,
                                    detail=str(exc)) from exc
        return BenchResponse(results=[
            BenchRow(instance=r.instance, answer_sets=r.answer_sets,
                     wall_time=r.wall_time, verified=r.verified)
            for r in rows])

    return app


app = create_app()
