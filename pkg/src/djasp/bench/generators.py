"""Reproducible random instances.

The generator PRNG is splitmix64: a 64-bit state advances by the constant
0x9E3779B97F4A7C15 per draw and the output is the finalizer

    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27; z *= 0x94D049BB133111EB
    z ^= z >> 31

(all arithmetic mod 2^64).  Bounded draws use rejection sampling below the
largest multiple of the bound, so identical specs produce byte-identical
instances on any platform or implementation of the same algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound

    def shuffle(self, items: list) -> list:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample_distinct(self, population: Sequence, k: int) -> list:
        """k distinct elements, order-sensitive (selection by index swap)."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        out = []
        for _ in range(k):
            i = self.below(len(pool))
            out.append(pool.pop(i))
        return out


@dataclass(frozen=True)
class InstanceSpec:
    """Identical specs generate byte-identical fact files."""

    kind: str                      # 3col | hpath | stratcomp | prime
    seed: int
    nodes: int | None = None
    edges: int | None = None       # 3col
    arcs: int | None = None        # hpath
    companies: int | None = None   # stratcomp
    products: int | None = None
    controls: int | None = None    # controlled_by fact count
    producers: int | None = None   # production concentrates on c1..cK
    variables: int | None = None   # prime
    clauses: int | None = None
    plant: bool = False            # embed a solution (3col / hpath)

    def label(self) -> str:
        parts = []
        for name in ("nodes", "edges", "arcs", "companies", "products",
                     "controls", "variables", "clauses"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value}")
        if self.plant:
            parts.append("plant")
        parts.append(f"seed={self.seed}")
        return f"{self.kind}({','.join(parts)})"


def generate(spec: InstanceSpec) -> str:
    """Deterministic pseudo-random facts for the spec; rejects infeasible
    parameter combinations."""
    if spec.kind == "hpath":
        return _hpath(spec)
    if spec.kind == "3col":
        return _3col(spec)
    if spec.kind == "stratcomp":
        return _stratcomp(spec)
    if spec.kind == "prime":
        return _prime(spec)
    raise ValueError(f"unknown benchmark kind {spec.kind!r}")


def _require(value: int | None, name: str, minimum: int = 1) -> int:
    if value is None:
        raise ValueError(f"missing parameter {name!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _hpath(spec: InstanceSpec) -> str:
    n = _require(spec.nodes, "nodes", 2)
    arcs = _require(spec.arcs, "arcs")
    if arcs > n * (n - 1):
        raise ValueError(f"{arcs} arcs exceed the {n * (n - 1)} ordered "
                         f"pairs over {n} nodes")
    rng = SplitMix64(spec.seed)
    names = [f"n{i + 1}" for i in range(n)]
    chosen: dict[tuple[int, int], None] = {}
    if spec.plant:
        if arcs < n - 1:
            raise ValueError("a planted Hamiltonian path needs at least "
                             f"{n - 1} arcs")
        perm = rng.shuffle(list(range(n)))
        for a, b in zip(perm, perm[1:]):
            chosen[(a, b)] = None
        start = perm[0]
    else:
        start = rng.below(n)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    rng.shuffle(pairs)
    for pair in pairs:
        if len(chosen) >= arcs:
            break
        if pair not in chosen:
            chosen[pair] = None
    lines = [f"node({name})." for name in names]
    lines += [f"arc({names[a]},{names[b]})." for a, b in chosen]
    lines.append(f"start({names[start]}).")
    return "\n".join(lines) + "\n"


def _3col(spec: InstanceSpec) -> str:
    n = _require(spec.nodes, "nodes", 1)
    edges = _require(spec.edges, "edges", 0)
    if edges > n * (n - 1) // 2:
        raise ValueError(f"{edges} edges exceed the {n * (n - 1) // 2} "
                         f"unordered pairs over {n} nodes")
    rng = SplitMix64(spec.seed)
    names = [f"n{i + 1}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if spec.plant:
        classes = [rng.below(3) for _ in range(n)]
        pairs = [(i, j) for i, j in pairs if classes[i] != classes[j]]
        if edges > len(pairs):
            raise ValueError(f"only {len(pairs)} cross-class pairs available "
                             f"for a planted coloring, need {edges}")
    rng.shuffle(pairs)
    lines = [f"node({name})." for name in names]
    lines += [f"edge({names[i]},{names[j]})." for i, j in pairs[:edges]]
    return "\n".join(lines) + "\n"


def _stratcomp(spec: InstanceSpec) -> str:
    n = _require(spec.companies, "companies", 1)
    products = _require(spec.products, "products", 1)
    controls = spec.controls if spec.controls is not None else n // 4
    producers = spec.producers if spec.producers is not None else n
    if not 1 <= producers <= n:
        raise ValueError("producers must be between 1 and companies")
    if controls < 0:
        raise ValueError("controls must be >= 0")
    if controls > 0 and n < 4:
        raise ValueError("control facts need at least 4 companies (a "
                         "controlled company plus 3 distinct controllers)")
    if controls > n:
        raise ValueError("at most one control group per company")
    rng = SplitMix64(spec.seed)
    comp = [f"c{i + 1}" for i in range(n)]
    lines = [f"company({c})." for c in comp]
    for p in range(products):
        y = rng.below(producers)
        z = rng.below(producers)   # y == z models a single-producer product
        lines.append(f"produced_by(p{p + 1},{comp[y]},{comp[z]}).")
    controlled = rng.sample_distinct(range(n), controls)
    for w in controlled:
        others = [i for i in range(n) if i != w]
        x, y, z = rng.sample_distinct(others, 3)
        lines.append(f"controlled_by({comp[w]},{comp[x]},{comp[y]},"
                     f"{comp[z]}).")
    return "\n".join(lines) + "\n"


def _prime(spec: InstanceSpec) -> str:
    nvars = _require(spec.variables, "variables", 3)
    nclauses = _require(spec.clauses, "clauses", 1)
    distinct_triples = nvars * (nvars - 1) * (nvars - 2) // 6
    if nclauses > distinct_triples * 8:
        raise ValueError(f"{nclauses} distinct 3-literal clauses are not "
                         f"available over {nvars} variables")
    rng = SplitMix64(spec.seed)
    names = [f"v{i + 1}" for i in range(nvars)]
    seen: dict[tuple, None] = {}
    lines = []
    while len(lines) < nclauses:
        vs = sorted(rng.sample_distinct(range(nvars), 3))
        signs = tuple(rng.below(2) for _ in range(3))
        key = (tuple(vs), signs)
        if key in seen:
            continue
        seen[key] = None
        c = len(lines) + 1
        parts = ", ".join(f"{names[v]},{'pos' if s else 'neg'}"
                          for v, s in zip(vs, signs))
        lines.append(f"clause(k{c},{parts}).".replace(", ", ","))
    return "\n".join(lines) + "\n"
