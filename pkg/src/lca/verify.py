"""Global checkers and drivers used to validate the local oracles.

Verifiers only chase definitions; they never look at coins, caps or sessions. They
return ``None`` when the solution is valid and a :class:`Violation` naming a witness
otherwise.
"""

from __future__ import annotations

import json
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .coins import CoinTape
from .components import QueryFailed, SquareView
from .instances import CnfFormula, Graph, Hypergraph
from .isc import BroadcastSession, IscSession
from .lll import ColoringSession, CnfSession
from .mis import BOT, DELETED, SELECTED, MisSession, MisState


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple[int, ...]

    def to_record(self) -> str:
        return json.dumps({"kind": self.kind, "witness": list(self.witness)})

    def __str__(self) -> str:
        return self.to_record()


def verify_mis(g: Graph, in_set) -> Violation | None:
    chosen = set(in_set)
    for v in sorted(chosen):
        if not 0 <= v < g.n:
            return Violation("unknown_vertex", (v,))
    for u, v in g.edges():
        if u in chosen and v in chosen:
            return Violation("edge_inside_set", (u, v))
    for v in range(g.n):
        if v not in chosen and not any(u in chosen for u in g.adjacency[v]):
            return Violation("not_maximal", (v,))
    return None


def verify_broadcast(g: Graph, rounds: Mapping[int, int]) -> Violation | None:
    # (1) every vertex broadcasts exactly once: the map is total over V
    for v in range(g.n):
        if rounds.get(v) is None:
            return Violation("no_broadcast_round", (v,))
    # (2) no vertex hears two neighbors in the same round
    for v in range(g.n):
        heard: dict[int, int] = {}
        for u in g.adjacency[v]:
            t = rounds[u]
            if t in heard:
                return Violation("double_reception", (v, heard[t], u))
            heard[t] = u
    # (3) endpoints of an edge broadcast in different rounds
    for u, v in g.edges():
        if rounds[u] == rounds[v]:
            return Violation("edge_same_round", (u, v))
    return None


def verify_isc(view, classes) -> Violation | None:
    """``classes`` is either vertex -> class label or a sequence of vertex sets."""
    if isinstance(classes, Mapping):
        label = dict(classes)
    else:
        label = {}
        for i, group in enumerate(classes, start=1):
            for v in group:
                if v in label:
                    return Violation("classes_overlap", (v,))
                label[v] = i
    for v in range(view.n):
        if v not in label:
            return Violation("uncovered_vertex", (v,))
    for v in range(view.n):
        for u in view.neighbors(v):
            if u > v and label[u] == label[v]:
                return Violation("edge_inside_class", (v, u))
    return None


def verify_coloring(h: Hypergraph, colors: Mapping[int, int] | Sequence[int]) -> Violation | None:
    for e, members in enumerate(h.edge_vertices):
        seen = {int(colors[x]) for x in members}
        if len(seen) < 2:
            return Violation("monochromatic_edge", (e,))
    return None


def verify_sat(f: CnfFormula, assignment: Mapping[int, bool] | Sequence[bool]) -> Violation | None:
    """``assignment`` maps 0-based variable ids to truth values."""
    for j, clause in enumerate(f.clauses):
        if not any(bool(assignment[abs(lit) - 1]) == (lit > 0) for lit in clause):
            return Violation("falsified_clause", (j,))
    return None


# --- reference simulators --------------------------------------------------------


def global_luby(g: Graph, tape: CoinTape, r: int, d: int | None = None) -> list[list[MisState]]:
    """Round-synchronous whole-graph Luby; ``out[i][v]`` is v's state after round i.

    Uses the same coin keys as :class:`~lca.mis.MisSession` (entity=v, round=i, epoch=0,
    probability 1/(2 max(d, 2))).
    """
    if g.n > 100_000:
        raise ValueError("global_luby materializes n*r states; refusing n > 100000")
    den = 2 * max(g.max_degree if d is None else d, 2)
    cur = [BOT] * g.n
    out = [cur]
    for i in range(1, r + 1):
        chose = [cur[v] == BOT and tape.bernoulli(v, i, 0, 1, den) == 1 for v in range(g.n)]
        nxt = list(cur)
        for v in range(g.n):
            if cur[v] != BOT:
                continue
            nbrs = g.adjacency[v]
            if any(cur[u] == SELECTED for u in nbrs):
                nxt[v] = DELETED
            elif chose[v] and not any(chose[u] for u in nbrs):
                nxt[v] = SELECTED
        out.append(nxt)
        cur = nxt
    return out


def survivor_components(session: MisSession) -> list[int]:
    """Sizes of all connected components of Phase-1 survivors (no cap applied)."""
    g = session.graph
    alive = [session.is_survivor(v) for v in range(g.n)]
    sizes = []
    seen = [False] * g.n
    for s in range(g.n):
        if not alive[s] or seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        size = 0
        while queue:
            u = queue.popleft()
            size += 1
            for w in g.adjacency[u]:
                if alive[w] and not seen[w]:
                    seen[w] = True
                    queue.append(w)
        sizes.append(size)
    return sizes


# --- sweeps ----------------------------------------------------------------------

ALGORITHMS = ("mis", "isc", "broadcast", "color", "cnf")


def make_session(algorithm: str, instance, seed: int, **overrides: Any):
    """Build the oracle session for ``algorithm`` with optional constant overrides."""
    opts = {k: v for k, v in overrides.items() if v is not None}
    if algorithm == "mis":
        return MisSession(instance, seed, **opts)
    if algorithm == "isc":
        return IscSession(instance, seed, **opts)
    if algorithm == "broadcast":
        return BroadcastSession(instance, seed, **opts)
    if algorithm == "color":
        return ColoringSession(instance, seed, **opts)
    if algorithm == "cnf":
        return CnfSession(instance, seed, **opts)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def entity_count(algorithm: str, instance) -> int:
    if algorithm in ("mis", "isc", "broadcast"):
        return instance.n
    return instance.m


def resolve_order(order, count: int) -> list[int]:
    """'ascending', 'random:<seed>' or an explicit sequence of entity ids."""
    if isinstance(order, str):
        if order == "ascending":
            return list(range(count))
        if order.startswith("random:"):
            perm = list(range(count))
            random.Random(int(order.split(":", 1)[1], 0)).shuffle(perm)
            return perm
        raise ValueError(f"bad order {order!r}")
    return list(order)


@dataclass
class SweepReport:
    algorithm: str
    order: list[int]
    answers: dict[int, Any] = field(default_factory=dict)
    failed: list[int] = field(default_factory=list)
    touched: list[int] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)
    max_component_size: int = 0
    session: Any = field(default=None, repr=False)

    @property
    def fail_count(self) -> int:
        return len(self.failed)

    @property
    def ok(self) -> bool:
        return not self.failed

    def answer_vector(self) -> list[Any]:
        n = len(self.answers) + len(self.failed)
        return [self.answers.get(v) for v in range(n)]

    def summary(self) -> dict[str, Any]:
        q = len(self.order)
        return {
            "algorithm": self.algorithm,
            "queries": q,
            "answered": len(self.answers),
            "fail_count": self.fail_count,
            "max_component_size": self.max_component_size,
            "mean_touched": sum(self.touched) / q if q else 0.0,
            "total_seconds": sum(self.wall_times),
        }


def sweep(algorithm: str, instance, seed: int, order="ascending", session=None, **overrides: Any) -> SweepReport:
    """Query every entity once in ``order`` and collect answers and costs."""
    if session is None:
        session = make_session(algorithm, instance, seed, **overrides)
    ids = resolve_order(order, entity_count(algorithm, instance))
    report = SweepReport(algorithm, ids, session=session)
    for v in ids:
        before = session.touched
        t0 = time.perf_counter()
        try:
            report.answers[v] = session.query(v)
        except QueryFailed:
            report.failed.append(v)
        report.wall_times.append(time.perf_counter() - t0)
        report.touched.append(session.touched - before)
    sizes = getattr(session, "component_sizes", None)
    if sizes is None:
        sizes = session.phase2_sizes
    report.max_component_size = max(sizes, default=0)
    return report


def verify_report(report: SweepReport, instance) -> Violation | None:
    """Run the matching verifier on a complete, failure-free sweep."""
    if report.failed:
        return Violation("query_failed", tuple(report.failed[:1]))
    a = report.answers
    if report.algorithm == "mis":
        return verify_mis(instance, [v for v, inside in a.items() if inside])
    if report.algorithm == "isc":
        return verify_isc(instance, a)
    if report.algorithm == "broadcast":
        return verify_broadcast(instance, a) or verify_isc(SquareView(instance), a)
    if report.algorithm == "color":
        return verify_coloring(instance, a)
    if report.algorithm == "cnf":
        return verify_sat(instance, a)
    raise ValueError(report.algorithm)
