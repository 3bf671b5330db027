"""Local independent-set-cover oracle and the radio-broadcast adapter over G^{1,2}."""

from __future__ import annotations

from typing import Mapping, Protocol, Sequence

from .coins import CoinTape, Tag
from .components import QueryFailed, SquareView, TooLarge, explore_component
from .instances import Graph
from .mis import default_cap, effective_degree, rounds_for


class GraphView(Protocol):
    n: int

    def neighbors(self, v: int) -> Sequence[int]: ...

    @property
    def max_degree(self) -> int: ...


def greedy_isc(vertices, neighbors) -> dict[int, int]:
    """Partition ``vertices`` into independent sets by repeated greedy MIS (ascending ids).

    ``neighbors(v)`` may mention vertices outside ``vertices``; they are ignored.
    Returns vertex -> set index, starting at 1.
    """
    remaining = sorted(set(vertices))
    if not remaining:
        raise ValueError("greedy_isc needs a nonempty vertex set")
    index: dict[int, int] = {}
    level = 0
    while remaining:
        level += 1
        picked: set[int] = set()
        rest = []
        for v in remaining:
            if any(u in picked for u in neighbors(v)):
                rest.append(v)
            else:
                picked.add(v)
                index[v] = level
        remaining = rest
    return index


class IscSession:
    """Round numbers of an independent set cover of ``view``.

    Phase 1 assigns round i in 1..r to a vertex that is the only chooser in its closed
    neighborhood in round i. Survivors get r + (greedy ISC index in their component).
    """

    def __init__(
        self,
        view: GraphView,
        seed: int,
        *,
        d_view: int | None = None,
        rounds: int | None = None,
        cap: int | None = None,
        c: float = 8,
        rounds_factor: float = 20,
        tape: CoinTape | None = None,
    ):
        self.view = view
        bound = view.max_degree if d_view is None else d_view
        self.d = effective_degree(bound)
        self.r = rounds_for(bound, rounds_factor) if rounds is None else rounds
        self.cap = default_cap(view.n, bound, c) if cap is None else cap
        self.tape = tape if tape is not None else CoinTape(seed, Tag.ISC)
        self._den = 2 * self.d
        self._phase1: dict[int, int] = {}
        self._resolved: dict[int, int] = {}
        self.touched = 0
        self.failures: list[QueryFailed] = []
        self.component_sizes: list[int] = []

    def coin(self, v: int, i: int) -> int:
        return self.tape.bernoulli(v, i, 0, 1, self._den)

    def phase1(self, v: int) -> int:
        """First round in which v is the unique chooser in N+(v); 0 if it survives all r."""
        got = self._phase1.get(v)
        if got is not None:
            return got
        nbrs = self.view.neighbors(v)
        result = 0
        for i in range(1, self.r + 1):
            self.touched += 1
            # neighbors flip even if already selected earlier, so no state lookups here
            if self.coin(v, i) and not any(self.coin(u, i) for u in nbrs):
                result = i
                break
        self._phase1[v] = result
        return result

    def is_survivor(self, v: int) -> bool:
        return self.phase1(v) == 0

    def query(self, v: int) -> int:
        """Round number of ``v``; raises :class:`QueryFailed` on a cap breach."""
        i = self.phase1(v)
        if i:
            return i
        got = self._resolved.get(v)
        if got is not None:
            return self.r + got
        try:
            comp = explore_component([v], self.is_survivor, self.view.neighbors, self.cap)
        except TooLarge:
            err = QueryFailed("survivor component over cap", v)
            self.failures.append(err)
            raise err from None
        self.component_sizes.append(len(comp))
        self._resolved.update(greedy_isc(comp.entities, self.view.neighbors))
        return self.r + self._resolved[v]

    @property
    def max_round(self) -> int:
        """Largest round any answer can take."""
        return self.r + self.d + 1


class BroadcastSession(IscSession):
    """Broadcast schedule for a radio network: the ISC oracle run on the square graph."""

    def __init__(self, graph: Graph, seed: int, **kwargs):
        super().__init__(SquareView(graph), seed, **kwargs)
        self.graph = graph


def classes_from_rounds(rounds: Mapping[int, int]) -> dict[int, set[int]]:
    classes: dict[int, set[int]] = {}
    for v, i in rounds.items():
        classes.setdefault(i, set()).add(v)
    return classes
