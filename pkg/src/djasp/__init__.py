"""djasp: disjunctive datalog under the consistent answer set semantics.

Pipeline: parse -> safety check -> intelligent grounding -> candidate
generation -> answer-set verification, plus brave/cautious query modes, a
benchmark harness, a CLI and an HTTP service.
"""

__version__ = "0.1.0"

from .checker import is_answer_set, is_closed, is_minimal_model, reduct
from .errors import (
    ArityError,
    ParseError,
    ResourceLimitError,
    SafetyError,
    SourceError,
)
from .frontends import QueryAnswer, brave, cautious
from .grounding import (
    DependencyGraph,
    GroundProgram,
    GroundRule,
    build_dependency_graph,
    check_safety,
    ground_program,
    ground_rule,
)
from .model import (
    Atom,
    BuiltinAtom,
    BuiltinKind,
    Constant,
    Literal,
    Program,
    Rule,
    SourceSpan,
    Variable,
    complement,
    herbrand_base,
    herbrand_universe,
    is_consistent,
)
from .parser import (
    Query,
    QueryConjunct,
    format_program,
    format_rule,
    parse_literal_set,
    parse_program,
    parse_query,
    parse_source,
)
from .pipeline import RunConfig, print_answer_set, run, solve_program
from .solver import (
    Conflict,
    EnumerationLimit,
    SolverState,
    SolverStats,
    choose_branch,
    enumerate_answer_sets,
    propagate,
)

__all__ = [
    "__version__",
    "Atom", "BuiltinAtom", "BuiltinKind", "Constant", "Literal", "Program",
    "Rule", "SourceSpan", "Variable",
    "complement", "is_consistent", "herbrand_universe", "herbrand_base",
    "SourceError", "ParseError", "ArityError", "SafetyError",
    "ResourceLimitError",
    "Query", "QueryConjunct", "parse_program", "parse_query", "parse_source",
    "parse_literal_set", "format_program", "format_rule",
    "DependencyGraph", "GroundProgram", "GroundRule", "check_safety",
    "build_dependency_graph", "ground_rule", "ground_program",
    "Conflict", "EnumerationLimit", "SolverState", "SolverStats",
    "propagate", "choose_branch", "enumerate_answer_sets",
    "reduct", "is_closed", "is_minimal_model", "is_answer_set",
    "QueryAnswer", "brave", "cautious",
    "RunConfig", "run", "solve_program", "print_answer_set",
]
