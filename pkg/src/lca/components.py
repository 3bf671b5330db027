"""Bounded connected-component exploration and the on-the-fly square graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .instances import Graph


class TooLarge(Exception):
    """Raised when an exploration collects more entities than its cap."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"component exceeds cap {cap}")


class QueryFailed(Exception):
    """An oracle hit its failure event (a component over the cap, or no good recoloring)."""

    def __init__(self, reason: str, entity: int):
        self.reason = reason
        self.entity = entity
        super().__init__(f"{reason} while answering {entity}")


@dataclass(frozen=True)
class Component:
    entities: frozenset[int]
    frontier_closed: bool = True

    def __len__(self) -> int:
        return len(self.entities)

    def __contains__(self, item: int) -> bool:
        return item in self.entities

    @property
    def key(self) -> int:
        """Canonical id of the component: its smallest entity."""
        return min(self.entities)


def explore_component(
    start: Iterable[int],
    alive: Callable[[int], bool],
    adjacency: Callable[[int], Iterable[int]],
    cap: int,
) -> Component:
    """BFS closure of ``start`` through entities for which ``alive`` holds.

    Start entities are always included. ``alive`` is called at most once per
    discovered entity, in BFS order; it may do arbitrary oracle work. Raises
    :class:`TooLarge` as soon as more than ``cap`` entities are collected.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    seen: set[int] = set()
    rejected: set[int] = set()
    queue: deque[int] = deque()
    for s in start:
        if s not in seen:
            seen.add(s)
            queue.append(s)
            if len(seen) > cap:
                raise TooLarge(cap)
    while queue:
        u = queue.popleft()
        for w in adjacency(u):
            if w in seen or w in rejected:
                continue
            if not alive(w):
                rejected.add(w)
                continue
            seen.add(w)
            if len(seen) > cap:
                raise TooLarge(cap)
            queue.append(w)
    return Component(frozenset(seen))


def square_neighbors(g: Graph, v: int) -> list[int]:
    """Vertices at distance 1 or 2 from ``v``, sorted, without building the square graph."""
    out = set(g.adjacency[v])
    for u in g.adjacency[v]:
        out.update(g.adjacency[u])
    out.discard(v)
    return sorted(out)


class SquareView:
    """Read-only neighbor view of G^{1,2}; neighbor lists are computed lazily and cached."""

    def __init__(self, g: Graph):
        self.graph = g
        self.n = g.n
        self._cache: dict[int, tuple[int, ...]] = {}

    def neighbors(self, v: int) -> tuple[int, ...]:
        nb = self._cache.get(v)
        if nb is None:
            nb = self._cache[v] = tuple(square_neighbors(self.graph, v))
        return nb

    @property
    def max_degree(self) -> int:
        """Upper bound Δ² on the square graph's degree."""
        return self.graph.max_degree ** 2
