"""Guess-and-check programs for the benchmark problems.

Each encoding pairs a disjunctive guessing rule spanning the search space
with constraints (plus auxiliary stratified rules) pruning non-solutions;
instance facts come from the generators.
"""

from __future__ import annotations

# Hamiltonian path: guess a subset of the arcs; forbid branching in and out;
# require every node reachable from the start over the chosen arcs.  The
# final constraint strips the arc closing a Hamiltonian cycle back into the
# start, so the chosen arcs form a path and answer sets are exactly the
# Hamiltonian paths from the start node.
_HPATH = """\
inPath(X,Y) v outPath(X,Y) :- arc(X,Y).
:- inPath(X,Y), inPath(X,Y1), Y <> Y1.
:- inPath(X,Y), inPath(X1,Y), X <> X1.
:- node(X), not reached(X).
reached(X) :- start(X).
reached(X) :- reached(Y), inPath(Y,X).
"""

_HPATH_STRIP = ":- start(Y), inPath(_,Y).\n"

# Strategic companies: guess one producer per product; a company controlled
# entirely by strategic companies is itself strategic.  Answer-set
# minimality makes the answer sets exactly the strategic (minimal
# production-preserving, control-closed) company sets.
_STRATCOMP = """\
strat(Y) v strat(Z) :- produced_by(X,Y,Z).
strat(W) :- controlled_by(W,X,Y,Z), strat(X), strat(Y), strat(Z).
"""

# Graph 3-colorability: guess a color per node, forbid monochrome edges.
_3COL = """\
col(X,red) v col(X,green) v col(X,blue) :- node(X).
:- edge(X,Y), col(X,C), col(Y,C).
"""

# Prime implicants of a tautology-free 3CNF: per clause, guess one of its
# literals into the implicant term; forbid complementary term literals.  A
# consistent term implies the formula iff it shares a literal with every
# clause, so answer-set minimality yields exactly the prime implicants.
_PRIME = """\
inTerm(V1,S1) v inTerm(V2,S2) v inTerm(V3,S3) :- clause(C,V1,S1,V2,S2,V3,S3).
:- inTerm(V,pos), inTerm(V,neg).
"""

KINDS = ("3col", "hpath", "stratcomp", "prime")

# predicate whose atoms constitute the solution, per kind
SOLUTION_PREDICATE = {
    "3col": "col",
    "hpath": "inPath",
    "stratcomp": "strat",
    "prime": "inTerm",
}


def encoding(kind: str, *, include_path_strip: bool = True) -> str:
    """Program text for a benchmark kind.  For `hpath`,
    `include_path_strip=False` drops the cycle-stripping constraint (answer
    sets then also admit Hamiltonian cycles split at the start node)."""
    if kind == "hpath":
        return _HPATH + (_HPATH_STRIP if include_path_strip else "")
    if kind == "stratcomp":
        return _STRATCOMP
    if kind == "3col":
        return _3COL
    if kind == "prime":
        return _PRIME
    raise ValueError(f"unknown benchmark kind {kind!r} (choose from {KINDS})")
