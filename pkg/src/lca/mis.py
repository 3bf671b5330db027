"""Local MIS oracle: r rounds of locally simulated Luby, then greedy on the survivor component."""

from __future__ import annotations

import enum
import math
import sys

from .coins import CoinTape, Tag
from .components import Component, QueryFailed, TooLarge, explore_component
from .instances import Graph


class MisState(enum.IntEnum):
    BOT = 0
    SELECTED = 1
    DELETED = 2


class BState(enum.IntEnum):
    BOT = 0
    PICKED = 1


BOT, SELECTED, DELETED = MisState.BOT, MisState.SELECTED, MisState.DELETED


def effective_degree(d: int) -> int:
    return max(d, 2)


def rounds_for(d: int, factor: float = 20) -> int:
    """Number of simulated Luby rounds, ceil(20 d log2 d) with d clamped to >= 2."""
    de = effective_degree(d)
    return math.ceil(factor * de * math.log2(de))


def default_cap(n: int, d: int, c: float = 8) -> int:
    return math.ceil(c * effective_degree(d) ** 3 * math.log2(n + 1))


class MisSession:
    """Holds the memoized Phase-1 states and resolved Phase-2 components for one seed.

    Per vertex we keep the last round evaluated and, once decided, the deciding round
    and outcome. States after the deciding round are implied, so the memo stays write-once
    and monotone without storing one entry per (vertex, round).
    """

    def __init__(
        self,
        graph: Graph,
        seed: int,
        *,
        rounds: int | None = None,
        cap: int | None = None,
        c: float = 8,
        rounds_factor: float = 20,
        tape: CoinTape | None = None,
        extra_tape: CoinTape | None = None,
    ):
        self.graph = graph
        self.d = effective_degree(graph.max_degree)
        self.r = rounds_for(graph.max_degree, rounds_factor) if rounds is None else rounds
        self.cap = default_cap(graph.n, graph.max_degree, c) if cap is None else cap
        self.tape = tape if tape is not None else CoinTape(seed, Tag.MIS)
        self.extra_tape = extra_tape if extra_tape is not None else CoinTape(seed, Tag.MIS_B_EXTRA)
        self._den = 2 * self.d
        n = graph.n
        self._upto = [0] * n
        self._decided_at = [0] * n
        self._outcome = [BOT] * n
        self._b_pick: dict[int, int] = {}
        self.answers: dict[int, bool] = {}
        self.touched = 0
        self.failures: list[QueryFailed] = []
        self.component_sizes: list[int] = []
        needed = 4 * self.r + 200
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    # -- Phase 1 ---------------------------------------------------------------

    def coin(self, v: int, i: int) -> int:
        return self.tape.bernoulli(v, i, 0, 1, self._den)

    def state(self, v: int, i: int) -> MisState:
        """State of ``v`` after round ``i`` (round 0 is the all-BOT start)."""
        t = self._decided_at[v]
        if t and t <= i:
            return self._outcome[v]
        if i <= self._upto[v]:
            return BOT
        self._advance(v, i)
        t = self._decided_at[v]
        return self._outcome[v] if t and t <= i else BOT

    def _advance(self, v: int, target: int) -> None:
        nbrs = self.graph.adjacency[v]
        state = self.state
        for i in range(self._upto[v] + 1, target + 1):
            self.touched += 1
            self._upto[v] = i
            live = []
            deleted = False
            for u in nbrs:
                s = state(u, i - 1)
                if s == SELECTED:
                    deleted = True
                    break
                if s == BOT:
                    live.append(u)
            if deleted:
                self._decide(v, i, DELETED)
                return
            if self.coin(v, i) and not any(self.coin(u, i) for u in live):
                self._decide(v, i, SELECTED)
                return

    def _decide(self, v: int, i: int, outcome: MisState) -> None:
        self._decided_at[v] = i
        self._outcome[v] = outcome

    def phase1(self, v: int) -> MisState:
        return self.state(v, self.r)

    def is_survivor(self, v: int) -> bool:
        """BOT after r rounds and not adjacent to a vertex selected by then."""
        if self.state(v, self.r) != BOT:
            return False
        return all(self.state(u, self.r) != SELECTED for u in self.graph.adjacency[v])

    # -- Phase 2 ---------------------------------------------------------------

    def survivor_component(self, v: int, cap: int | None = None) -> Component:
        return explore_component(
            [v], self.is_survivor, self.graph.neighbors, self.cap if cap is None else cap
        )

    def query(self, v: int) -> bool:
        """True iff ``v`` is in the MIS. Raises :class:`QueryFailed` on a cap breach."""
        cached = self.answers.get(v)
        if cached is not None:
            return cached
        s = self.phase1(v)
        if s != BOT:
            return s == SELECTED
        if not self.is_survivor(v):
            return False
        try:
            comp = self.survivor_component(v)
        except TooLarge:
            err = QueryFailed("survivor component over cap", v)
            self.failures.append(err)
            raise err from None
        self.component_sizes.append(len(comp))
        chosen: set[int] = set()
        adj = self.graph.adjacency
        for u in sorted(comp.entities):
            if not any(w in chosen for w in adj[u]):
                chosen.add(u)
        for u in comp.entities:
            self.answers[u] = u in chosen
        return self.answers[v]

    # -- MIS_B coupling process -------------------------------------------------

    def b_coin(self, u: int, i: int) -> int:
        """Round-i coin of ``u`` in MIS_B: the MIS coin while u is still undecided in MIS."""
        if self.state(u, i - 1) == BOT:
            return self.coin(u, i)
        return self.extra_tape.bernoulli(u, i, 0, 1, self._den)

    def b_state(self, v: int, i: int) -> BState:
        if not 0 <= i <= self.r:
            raise ValueError(f"round {i} outside 0..{self.r}")
        pick = self._b_pick.get(v)
        if pick is None:
            pick = 0
            nbrs = self.graph.adjacency[v]
            for j in range(1, self.r + 1):
                if self.b_coin(v, j) and not any(self.b_coin(u, j) for u in nbrs):
                    pick = j
                    break
            self._b_pick[v] = pick
        return BState.PICKED if pick and pick <= i else BState.BOT
