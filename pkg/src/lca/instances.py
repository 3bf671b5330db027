"""Problem instances: bounded-degree graphs, k-uniform hypergraphs and k-CNF formulas.

All three are immutable once built. Ids are dense integers starting at 0, and every
"arbitrary order" elsewhere in the package means ascending id order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class ParseError(ValueError):
    """Malformed instance file. ``line`` is 1-based, or 0 when not tied to a line."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class GenerationError(RuntimeError):
    """The rejection sampler ran out of proposals before building the instance."""


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    max_degree: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if v in nbrs[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(n, adjacency, max((len(a) for a in adjacency), default=0))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph stored as both incidence lists.

    ``edge_vertices[e]`` holds the sorted vertices of hyperedge ``e`` and
    ``vertex_edges[x]`` the sorted hyperedges containing ``x``.
    """

    m: int
    k: int
    d: int
    edge_vertices: tuple[tuple[int, ...], ...]
    vertex_edges: tuple[tuple[int, ...], ...]
    _dependency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, m: int, edges: Sequence[Sequence[int]]) -> "Hypergraph":
        edge_vertices = tuple(tuple(sorted(e)) for e in edges)
        k = len(edge_vertices[0]) if edge_vertices else 0
        incident: list[list[int]] = [[] for _ in range(m)]
        for j, members in enumerate(edge_vertices):
            if len(members) != k:
                raise ValueError(f"hyperedge {j} has {len(members)} vertices, expected {k}")
            if len(set(members)) != k:
                raise ValueError(f"hyperedge {j} repeats a vertex")
            for x in members:
                if not 0 <= x < m:
                    raise ValueError(f"hyperedge {j}: vertex {x} out of range for m={m}")
                incident[x].append(j)
        vertex_edges = tuple(tuple(lst) for lst in incident)
        dependency = _dependency_lists(edge_vertices, vertex_edges)
        d = max((len(a) for a in dependency), default=0)
        return cls(m, k, d, edge_vertices, vertex_edges, dependency)

    @property
    def N(self) -> int:
        return len(self.edge_vertices)

    def edge_neighbors(self, e: int) -> tuple[int, ...]:
        """Hyperedges sharing at least one vertex with ``e`` (dependency-graph neighbors)."""
        return self._dependency[e]


@dataclass(frozen=True)
class CnfFormula:
    """k-CNF formula. Variables are 0-based internally; literals are DIMACS-signed ints."""

    m: int
    k: int
    d: int
    clauses: tuple[tuple[int, ...], ...]
    var_clauses: tuple[tuple[int, ...], ...]
    _dependency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_clauses(cls, m: int, clauses: Sequence[Sequence[int]]) -> "CnfFormula":
        clauses = tuple(tuple(c) for c in clauses)
        k = len(clauses[0]) if clauses else 0
        incident: list[list[int]] = [[] for _ in range(m)]
        for j, clause in enumerate(clauses):
            if len(clause) != k:
                raise ValueError(f"clause {j} has {len(clause)} literals, expected {k}")
            variables = [abs(lit) - 1 for lit in clause]
            if 0 in (abs(lit) for lit in clause):
                raise ValueError(f"clause {j} contains literal 0")
            if len(set(variables)) != k:
                raise ValueError(f"clause {j} repeats a variable")
            for x in variables:
                if x >= m:
                    raise ValueError(f"clause {j}: variable {x + 1} exceeds m={m}")
                incident[x].append(j)
        var_clauses = tuple(tuple(lst) for lst in incident)
        members = tuple(tuple(abs(lit) - 1 for lit in c) for c in clauses)
        dependency = _dependency_lists(members, var_clauses)
        d = max((len(a) for a in dependency), default=0)
        return cls(m, k, d, clauses, var_clauses, dependency)

    @property
    def N(self) -> int:
        return len(self.clauses)

    def clause_vars(self, j: int) -> tuple[int, ...]:
        return tuple(abs(lit) - 1 for lit in self.clauses[j])

    def clause_neighbors(self, j: int) -> tuple[int, ...]:
        return self._dependency[j]


def _dependency_lists(members, incident) -> tuple[tuple[int, ...], ...]:
    out = []
    for j, mem in enumerate(members):
        nb = {f for x in mem for f in incident[x]}
        nb.discard(j)
        out.append(tuple(sorted(nb)))
    return tuple(out)


# --- parsing / writing -------------------------------------------------------


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line.strip()!r}", lineno) from None


def parse_graph(stream: TextIO) -> Graph:
    """Read the ``n m d`` header + ``u v`` edge-list format."""
    lines = iter(enumerate(stream, start=1))
    header = None
    for lineno, line in lines:
        if line.strip():
            header = _ints(line, lineno)
            break
    if header is None or len(header) != 3:
        raise ParseError("header must be 'n m d'", 1)
    n, m, declared = header
    if n < 1 or m < 0 or declared < 0:
        raise ParseError("header values out of range", 1)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    count = 0
    for lineno, line in lines:
        if not line.strip():
            continue
        vals = _ints(line, lineno)
        if len(vals) != 2:
            raise ParseError("edge line must be 'u v'", lineno)
        u, v = vals
        if not 0 <= u < v < n:
            raise ParseError(f"edge ({u}, {v}) must satisfy 0 <= u < v < {n}", lineno)
        if v in nbrs[u]:
            raise ParseError(f"duplicate edge ({u}, {v})", lineno)
        nbrs[u].add(v)
        nbrs[v].add(u)
        for w in (u, v):
            if len(nbrs[w]) > declared:
                raise ParseError(f"vertex {w} exceeds declared max degree {declared}", lineno)
        count += 1
    if count != m:
        raise ParseError(f"header declares {m} edges, found {count}")
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in nbrs[u] if u < v))


def write_graph(g: Graph, stream: TextIO) -> None:
    edges = g.edges()
    stream.write(f"{g.n} {len(edges)} {g.max_degree}\n")
    for u, v in edges:
        stream.write(f"{u} {v}\n")


def parse_hypergraph(stream: TextIO) -> Hypergraph:
    """Read the ``m N k d`` header + one hyperedge per line format."""
    rows = [(i, line) for i, line in enumerate(stream, start=1) if line.strip()]
    if not rows:
        raise ParseError("empty hypergraph file", 1)
    lineno, first = rows[0]
    header = _ints(first, lineno)
    if len(header) != 4:
        raise ParseError("header must be 'm N k d'", lineno)
    m, n_edges, k, declared = header
    if len(rows) - 1 != n_edges:
        raise ParseError(f"header declares {n_edges} hyperedges, found {len(rows) - 1}")
    edges = []
    for lineno, line in rows[1:]:
        members = _ints(line, lineno)
        if len(members) != k:
            raise ParseError(f"hyperedge has {len(members)} vertices, expected {k}", lineno)
        if len(set(members)) != k:
            raise ParseError("hyperedge repeats a vertex", lineno)
        if any(not 0 <= x < m for x in members):
            raise ParseError(f"vertex id out of range 0..{m - 1}", lineno)
        edges.append(members)
    h = Hypergraph.from_edges(m, edges)
    if h.d > declared:
        raise ParseError(f"some hyperedge intersects {h.d} others, declared d={declared}")
    return h


def write_hypergraph(h: Hypergraph, stream: TextIO) -> None:
    stream.write(f"{h.m} {h.N} {h.k} {h.d}\n")
    for members in h.edge_vertices:
        stream.write(" ".join(map(str, members)) + "\n")


def parse_cnf(stream: TextIO) -> CnfFormula:
    """Parse DIMACS CNF. Clause width and intersection degree come from the content."""
    m = n_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("c") or text.startswith("%"):
            continue
        if text.startswith("p"):
            parts = text.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("problem line must be 'p cnf <vars> <clauses>'", lineno)
            m, n_clauses = _ints(" ".join(parts[2:]), lineno)
            continue
        if m is None:
            raise ParseError("clause before problem line", lineno)
        for lit in _ints(text, lineno):
            if lit == 0:
                if len({abs(x) for x in current}) != len(current):
                    raise ParseError("duplicate variable in clause", lineno)
                clauses.append(current)
                current = []
                continue
            if abs(lit) > m:
                raise ParseError(f"literal {lit} exceeds declared variable count {m}", lineno)
            current.append(lit)
    if m is None:
        raise ParseError("missing problem line")
    if current:
        raise ParseError("last clause is not 0-terminated")
    if len(clauses) != n_clauses:
        raise ParseError(f"problem line declares {n_clauses} clauses, found {len(clauses)}")
    widths = {len(c) for c in clauses}
    if len(widths) > 1:
        raise ParseError(f"non-uniform clause widths {sorted(widths)}")
    return CnfFormula.from_clauses(m, clauses)


def write_cnf(f: CnfFormula, stream: TextIO) -> None:
    stream.write(f"p cnf {f.m} {f.N}\n")
    for clause in f.clauses:
        stream.write(" ".join(map(str, clause)) + " 0\n")


# --- generators --------------------------------------------------------------


def gen_graph(n: int, d: int, seed: int, num_edges: int | None = None) -> Graph:
    """Random graph with max degree <= d.

    Endpoints are proposed uniformly among vertices that still have spare degree;
    a proposal is rejected if it is a self-loop or repeats an edge. Stops at
    ``min(num_edges, n*d // 2)`` edges or when proposals keep failing.
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    target = n * d // 2 if num_edges is None else min(num_edges, n * d // 2)
    rng = random.Random(seed)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    open_ = list(range(n)) if d > 0 else []
    slot = list(range(n))
    edges = 0
    misses = 0
    while edges < target and len(open_) >= 2 and misses < 100 + 20 * len(open_):
        u = open_[rng.randrange(len(open_))]
        v = open_[rng.randrange(len(open_))]
        if u == v or v in nbrs[u]:
            misses += 1
            continue
        misses = 0
        nbrs[u].add(v)
        nbrs[v].add(u)
        edges += 1
        for w in (u, v):
            if len(nbrs[w]) == d:
                # swap-remove w from the open pool
                i, last = slot[w], open_[-1]
                open_[i], slot[last] = last, i
                open_.pop()
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    return Graph(n, adjacency, max((len(a) for a in adjacency), default=0))


def _gen_sets(m: int, N: int, k: int, d: int, rng: random.Random, budget: int) -> list[list[int]]:
    if k > m:
        raise GenerationError(f"cannot draw {k} distinct elements from {m}")
    sets: list[list[int]] = []
    incident: list[list[int]] = [[] for _ in range(m)]
    degree: list[int] = []
    # unused vertices, swap-remove pool; most candidate members come from here
    free = list(range(m))
    slot = list(range(m))
    proposals = 0
    while len(sets) < N:
        if proposals >= budget:
            raise GenerationError(
                f"gave up after {proposals} proposals with {len(sets)}/{N} sets placed"
            )
        proposals += 1
        shared = sum(rng.random() < 1 / k for _ in range(k)) if d > 0 else 0
        fresh = k - shared
        if fresh > len(free):
            fresh, shared = len(free), k - len(free)
        members = set(rng.sample(free, fresh)) if fresh else set()
        while len(members) < k:
            members.add(rng.randrange(m))
        cand = sorted(members)
        hits = {j for x in cand for j in incident[x]}
        if len(hits) > d or any(degree[j] >= d for j in hits):
            continue
        j_new = len(sets)
        for j in hits:
            degree[j] += 1
        degree.append(len(hits))
        for x in cand:
            if not incident[x]:
                i, last = slot[x], free[-1]
                free[i], slot[last] = last, i
                free.pop()
            incident[x].append(j_new)
        sets.append(cand)
    return sets


def gen_hypergraph(m: int, N: int, k: int, d: int, seed: int, budget: int | None = None) -> Hypergraph:
    """Random k-uniform hypergraph whose hyperedges each meet at most d others.

    Candidates that would push any intersection count above d are rejected;
    ``budget`` (default 100*N) bounds the number of proposals.
    """
    rng = random.Random(seed)
    sets = _gen_sets(m, N, k, d, rng, 100 * N if budget is None else budget)
    return Hypergraph.from_edges(m, sets)


def gen_cnf(m: int, N: int, k: int, d: int, seed: int, budget: int | None = None) -> CnfFormula:
    """Random k-CNF over m variables where each clause shares variables with at most d others."""
    rng = random.Random(seed)
    sets = _gen_sets(m, N, k, d, rng, 100 * N if budget is None else budget)
    clauses = [[(x + 1) if rng.random() < 0.5 else -(x + 1) for x in s] for s in sets]
    return CnfFormula.from_clauses(m, clauses)
