import itertools
import math
from collections import deque

import pytest

from lca.coins import Color
from lca.instances import Graph


class StubTape:
    """Tape with scripted coins: ``bits(entity, round, epoch) -> 0/1``."""

    def __init__(self, bits=lambda e, r, p: 0, colors=lambda e, p: Color.RED):
        self.bits = bits
        self.colors = colors

    def bernoulli(self, entity, round, epoch, numerator, denominator):
        return self.bits(entity, round, epoch)

    def color_coin(self, entity, epoch=0):
        return Color(self.colors(entity, epoch))


def complete_graph(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def bfs_distances(g, s):
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


@pytest.fixture
def stub_tape():
    return StubTape


def enumerate_params(k, d, head_factor, tail_factor):
    """Exhaustive reference for the (k1, k2, k3) split: first feasible triple in lex order."""
    head = head_factor * d * (d - 1) ** 3 * (d + 1)
    tail = tail_factor * math.e * (d + 1)
    for k1 in range(1, k + 1):
        for k2 in range(1, k - k1 + 1):
            k3 = k - k1 - k2
            if k3 < 1:
                continue
            if head < 2**k1 and head < 2**k2 and tail < 2**k3:
                return (k1, k2, k3)
    return None
