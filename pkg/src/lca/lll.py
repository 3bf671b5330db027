"""Three-phase local oracle for hypergraph 2-coloring and k-CNF satisfaction.

Both problems share one state machine. A constraint (hyperedge or clause) is *safe* once
its assigned members can no longer violate it, and its *bad count* is the number of
assigned members pushing it toward violation: colored vertices of the single color seen
so far, or assigned literals that are false.

Phase 1 assigns values lazily in query order. A constraint whose bad count reaches k1
becomes DANGEROUS1 and freezes its unassigned members (TROUBLE1). A TROUBLE1 query grows
the component of surviving-1 constraints around it, then recolors its trouble vertices
with fresh epochs until the surviving-2 components are all small (DANGEROUS2 fires at
k1 + k2). TROUBLE2 vertices are finished by exhaustive search over their component.
"""

from __future__ import annotations

import enum
import math
from typing import Callable, Sequence

from .coins import Color, CoinTape, Tag
from .components import Component, QueryFailed, TooLarge, explore_component
from .instances import CnfFormula, Hypergraph


class InfeasibleParams(ValueError):
    pass


class VertexState(enum.IntEnum):
    UNCOLORED = 0
    RED = 1
    BLUE = 2
    TROUBLE1 = 3
    TROUBLE2 = 4


class EdgeState(enum.IntEnum):
    INITIAL = 0
    SAFE = 1
    UNSAFE1 = 2
    UNSAFE2 = 3
    DANGEROUS1 = 4
    DANGEROUS2 = 5


INITIAL, SAFE, UNSAFE1, UNSAFE2, DANGEROUS1, DANGEROUS2 = EdgeState
SURVIVING1 = (DANGEROUS1, UNSAFE1)
SURVIVING2 = (DANGEROUS2, UNSAFE2)


def _smallest_exponent(bound: float) -> int:
    """Smallest positive integer j with bound < 2**j."""
    j = 1
    while not bound < 2 ** j:
        j += 1
    return j


def _split(k: int, head_bound: int, tail_bound: float) -> tuple[int, int, int] | None:
    k1 = _smallest_exponent(head_bound)
    k3 = k - 2 * k1
    if k3 < 1 or not tail_bound < 2 ** k3:
        return None
    return k1, k1, k3


def check_params(k: int, d: int) -> tuple[int, int, int] | None:
    """Lexicographically smallest (k1, k2, k3) for 2-coloring, or None if none exists.

    Needs k1 + k2 + k3 = k, 16 d (d-1)^3 (d+1) < 2^k1 and 2^k2, and 2e(d+1) < 2^k3.
    """
    return _split(k, 16 * d * (d - 1) ** 3 * (d + 1), 2 * math.e * (d + 1))


def check_params_cnf(k: int, d: int) -> tuple[int, int, int] | None:
    """As :func:`check_params` with the k-CNF thresholds 8 d (d-1)^3 (d+1) and e(d+1)."""
    return _split(k, 8 * d * (d - 1) ** 3 * (d + 1), math.e * (d + 1))


def phase2_cap(N: int, c1: float = 8) -> int:
    return max(1, math.ceil(c1 * math.log2(N + 1)))


def phase3_cap(N: int, c2: float = 8) -> int:
    return max(1, math.ceil(c2 * math.log2(math.log2(N + 2) + 1)))


def retries(N: int, c3: float = 2) -> int:
    return max(1, math.ceil(c3 * math.log2(N + 1) / math.log2(math.log2(N + 2) + 2)))


class _LocalLLL:
    """Shared state machine; subclasses supply the constraint semantics."""

    members: Sequence[Sequence[int]]
    incident: Sequence[Sequence[int]]
    neighbors: Callable[[int], Sequence[int]]

    def __init__(
        self,
        num_vars: int,
        num_constraints: int,
        tape: CoinTape,
        params: tuple[int, int, int],
        *,
        c1: float = 8,
        c2: float = 8,
        c3: float = 2,
    ):
        self.tape = tape
        self.k1, self.k2, self.k3 = params
        self.phase2_cap = phase2_cap(num_constraints, c1)
        self.phase3_cap = phase3_cap(num_constraints, c2)
        self.retries = retries(num_constraints, c3)
        self.value = [-1] * num_vars
        self.trouble = [0] * num_vars
        self.edge_state = [INITIAL] * num_constraints
        self.epochs: dict[int, int] = {}
        self.resolved3: dict[int, dict[int, int]] = {}
        self._epoch_counter = 0
        self.touched = 0
        self.failures: list[QueryFailed] = []
        self.dangerous1_events = 0
        self.phase2_first_good: list[bool] = []
        self.phase2_sizes: list[int] = []
        self.phase3_sizes: list[int] = []

    # semantics hook: (is_safe, bad_count)
    def status(self, e: int) -> tuple[bool, int]:
        raise NotImplementedError

    def _fresh(self, y: int) -> bool:
        return self.value[y] < 0 and self.trouble[y] == 0

    def vertex_state(self, x: int) -> VertexState:
        v = self.value[x]
        if v >= 0:
            return VertexState.RED if v == Color.RED else VertexState.BLUE
        return (VertexState.UNCOLORED, VertexState.TROUBLE1, VertexState.TROUBLE2)[self.trouble[x]]

    # -- queries -----------------------------------------------------------------

    def query_value(self, x: int) -> int:
        """Assigned bit of ``x`` (0 or 1); raises :class:`QueryFailed` from Phase 2."""
        v = self.value[x]
        if v >= 0:
            return v
        t = self.trouble[x]
        if t == 1:
            return self.phase2(x)
        if t == 2:
            return self.phase3(x)
        return self._assign1(x)

    # -- phase 1 -----------------------------------------------------------------

    def _assign1(self, x: int) -> int:
        c = int(self.tape.color_coin(x, 0))
        self.value[x] = c
        self.touched += 1
        for e in self.incident[x]:
            self._update1(e)
        return c

    def _update1(self, e: int) -> None:
        if self.edge_state[e] != INITIAL:
            return
        self.touched += 1
        safe, bad = self.status(e)
        if safe:
            self.edge_state[e] = SAFE
        elif bad >= self.k1:
            self.edge_state[e] = DANGEROUS1
            self.dangerous1_events += 1
            frozen = [y for y in self.members[e] if self._fresh(y)]
            for y in frozen:
                self.trouble[y] = 1
            for y in frozen:
                for f in self.incident[y]:
                    if f != e:
                        self._update1(f)
        elif not any(self._fresh(y) for y in self.members[e]):
            self.edge_state[e] = UNSAFE1

    def _complete1(self, e: int) -> bool:
        """Finish Phase 1 on constraint ``e``; report whether it is surviving-1."""
        if self.edge_state[e] == SAFE:
            return False
        for y in self.members[e]:
            if self._fresh(y):
                self._assign1(y)
        return self.edge_state[e] in SURVIVING1

    # -- phase 2 -----------------------------------------------------------------

    def grow_phase2_component(self, x: int) -> Component:
        start = [e for e in self.incident[x] if self._complete1(e)]
        return explore_component(start, self._complete1, self.neighbors, self.phase2_cap)

    def phase2(self, x: int) -> int:
        if self.trouble[x] != 1:
            raise ValueError(f"{x} is not in TROUBLE1")
        try:
            comp = self.grow_phase2_component(x)
        except TooLarge:
            err = QueryFailed("phase-2 component over cap", x)
            self.failures.append(err)
            raise err from None
        self.phase2_sizes.append(len(comp))
        edges = sorted(comp.entities)
        verts = sorted({y for e in edges for y in self.members[e] if self.trouble[y] == 1})
        saved = [self.edge_state[e] for e in edges]
        for attempt in range(self.retries):
            self._epoch_counter += 1
            epoch = self._epoch_counter
            for y in verts:
                if self.trouble[y] != 1:
                    continue
                self.value[y] = int(self.tape.color_coin(y, epoch))
                self.trouble[y] = 0
                self.touched += 1
                for e in self.incident[y]:
                    self._update2(e)
            good = self._phase2_good(edges)
            if attempt == 0:
                self.phase2_first_good.append(good)
            if good:
                self.epochs[comp.key] = epoch
                return self.query_value(x)
            for y in verts:
                self.value[y] = -1
                self.trouble[y] = 1
            for e, s in zip(edges, saved):
                self.edge_state[e] = s
        err = QueryFailed("no good phase-2 recoloring", x)
        self.failures.append(err)
        raise err

    def _update2(self, e: int) -> None:
        if self.edge_state[e] not in SURVIVING1:
            return
        self.touched += 1
        safe, bad = self.status(e)
        if safe:
            self.edge_state[e] = SAFE
        elif bad >= self.k1 + self.k2:
            self.edge_state[e] = DANGEROUS2
            frozen = [y for y in self.members[e] if self.value[y] < 0 and self.trouble[y] == 1]
            for y in frozen:
                self.trouble[y] = 2
            for y in frozen:
                for f in self.incident[y]:
                    if f != e:
                        self._update2(f)
        elif not any(self.value[y] < 0 and self.trouble[y] == 1 for y in self.members[e]):
            self.edge_state[e] = UNSAFE2

    def _phase2_good(self, edges: list[int]) -> bool:
        """All components of surviving-2 constraints among ``edges`` fit under phase3_cap."""
        survivors = {e for e in edges if self.edge_state[e] in SURVIVING2}
        seen: set[int] = set()
        for e in sorted(survivors):
            if e in seen:
                continue
            try:
                comp = explore_component([e], survivors.__contains__, self.neighbors, self.phase3_cap)
            except TooLarge:
                return False
            seen |= comp.entities
        return True

    # -- phase 3 -----------------------------------------------------------------

    def phase3(self, x: int) -> int:
        if self.trouble[x] != 2:
            raise ValueError(f"{x} is not in TROUBLE2")
        alive = lambda e: self.edge_state[e] in SURVIVING2  # noqa: E731
        start = [e for e in self.incident[x] if alive(e)]
        try:
            comp = explore_component(start, alive, self.neighbors, self.phase3_cap)
        except TooLarge:
            raise RuntimeError(f"phase-3 component around {x} exceeds the accepted bound") from None
        self.phase3_sizes.append(len(comp))
        edges = sorted(comp.entities)
        verts = sorted({y for e in edges for y in self.members[e] if self.trouble[y] == 2})
        assignment = self._search(edges, verts)
        if assignment is None:
            raise RuntimeError(f"no valid completion for phase-3 component around {x}")
        for y, c in zip(verts, assignment):
            self.value[y] = c
            self.trouble[y] = 0
        for e in edges:
            if not self.status(e)[0]:
                raise RuntimeError(f"constraint {e} violated after phase 3")
            self.edge_state[e] = SAFE
        self.resolved3[comp.key] = dict(zip(verts, assignment))
        return self.value[x]

    def _search(self, edges: list[int], verts: list[int]) -> list[int] | None:
        """Lexicographically first assignment (0 before 1) leaving no constraint violated."""
        pos = {y: i for i, y in enumerate(verts)}
        check_at: list[list[int]] = [[] for _ in verts]
        for e in edges:
            idx = [pos[y] for y in self.members[e] if y in pos]
            if idx:
                check_at[max(idx)].append(e)
            elif not self.status(e)[0]:
                return None
        assignment: list[int] = []

        def extend(i: int) -> bool:
            if i == len(verts):
                return True
            y = verts[i]
            for c in (0, 1):
                self.value[y] = c
                self.touched += 1
                if all(self.status(e)[0] for e in check_at[i]) and extend(i + 1):
                    assignment.append(c)
                    return True
            self.value[y] = -1
            return False

        found = extend(0)
        for y in verts:
            self.value[y] = -1
        return assignment[::-1] if found else None

    # -- diagnostics -------------------------------------------------------------

    def check_invariants(self) -> list[str]:
        """Structural state-machine invariants; returns human-readable problems."""
        problems = []
        dangerous_members: dict[int, set[int]] = {1: set(), 2: set()}
        for e, st in enumerate(self.edge_state):
            safe, bad = self.status(e)
            mem = self.members[e]
            if (st == SAFE) != safe:
                problems.append(f"constraint {e}: state {st.name} but safe={safe}")
            if st == DANGEROUS1:
                if bad != self.k1:
                    problems.append(f"constraint {e}: DANGEROUS1 with bad count {bad}")
                if any(self.value[y] < 0 and self.trouble[y] != 1 for y in mem):
                    problems.append(f"constraint {e}: DANGEROUS1 with a non-trouble-1 unassigned member")
                dangerous_members[1].update(mem)
            elif st == DANGEROUS2:
                if bad != self.k1 + self.k2:
                    problems.append(f"constraint {e}: DANGEROUS2 with bad count {bad}")
                if any(self.value[y] < 0 and self.trouble[y] != 2 for y in mem):
                    problems.append(f"constraint {e}: DANGEROUS2 with a non-trouble-2 unassigned member")
                dangerous_members[2].update(mem)
            elif st == UNSAFE1:
                if any(self._fresh(y) for y in mem):
                    problems.append(f"constraint {e}: UNSAFE1 with an unassigned member")
                if bad >= self.k1:
                    problems.append(f"constraint {e}: UNSAFE1 past the dangerous threshold")
            elif st == UNSAFE2:
                if any(self.value[y] < 0 and self.trouble[y] == 1 for y in mem):
                    problems.append(f"constraint {e}: UNSAFE2 with a trouble-1 member")
            elif st == INITIAL:
                if bad >= self.k1:
                    problems.append(f"constraint {e}: INITIAL past the dangerous threshold")
        for x, t in enumerate(self.trouble):
            if t and self.value[x] >= 0:
                problems.append(f"vertex {x}: both assigned and in trouble")
            if t and x not in dangerous_members[t]:
                problems.append(f"vertex {x}: TROUBLE{t} outside every DANGEROUS{t} constraint")
        return problems


class ColoringSession(_LocalLLL):
    """Consistent 2-coloring oracle for a k-uniform hypergraph.

    Sessions are order-sensitive: answers depend on which vertices were queried first,
    but any completed sweep is a proper coloring (barring a reported failure).
    """

    def __init__(
        self,
        hypergraph: Hypergraph,
        seed: int,
        *,
        params: tuple[int, int, int] | None = None,
        tape: CoinTape | None = None,
        **caps: float,
    ):
        if params is None:
            params = check_params(hypergraph.k, hypergraph.d)
            if params is None:
                raise InfeasibleParams(f"no (k1, k2, k3) for k={hypergraph.k}, d={hypergraph.d}")
        self.hypergraph = hypergraph
        self.members = hypergraph.edge_vertices
        self.incident = hypergraph.vertex_edges
        self.neighbors = hypergraph.edge_neighbors
        super().__init__(
            hypergraph.m,
            hypergraph.N,
            tape if tape is not None else CoinTape(seed, Tag.COLOR),
            params,
            **caps,
        )

    def status(self, e: int) -> tuple[bool, int]:
        seen = [0, 0]
        for y in self.members[e]:
            v = self.value[y]
            if v >= 0:
                seen[v] += 1
        return (seen[0] > 0 and seen[1] > 0), seen[0] + seen[1]

    def query(self, x: int) -> Color:
        return Color(self.query_value(x))


class CnfSession(_LocalLLL):
    """Truth-assignment oracle for a k-CNF formula (variables are 0-based)."""

    def __init__(
        self,
        formula: CnfFormula,
        seed: int,
        *,
        params: tuple[int, int, int] | None = None,
        tape: CoinTape | None = None,
        **caps: float,
    ):
        if params is None:
            params = check_params_cnf(formula.k, formula.d)
            if params is None:
                raise InfeasibleParams(f"no (k1, k2, k3) for k={formula.k}, d={formula.d}")
        self.formula = formula
        self.members = tuple(formula.clause_vars(j) for j in range(formula.N))
        # per clause: (variable, value that satisfies the literal)
        self._literals = tuple(
            tuple((abs(lit) - 1, 1 if lit > 0 else 0) for lit in clause) for clause in formula.clauses
        )
        self.incident = formula.var_clauses
        self.neighbors = formula.clause_neighbors
        super().__init__(
            formula.m,
            formula.N,
            tape if tape is not None else CoinTape(seed, Tag.CNF),
            params,
            **caps,
        )

    @property
    def clause_state(self) -> list[EdgeState]:
        return self.edge_state

    def status(self, j: int) -> tuple[bool, int]:
        bad = 0
        for x, want in self._literals[j]:
            v = self.value[x]
            if v >= 0:
                if v == want:
                    return True, bad
                bad += 1
        return False, bad

    def query(self, x: int) -> bool:
        return bool(self.query_value(x))
