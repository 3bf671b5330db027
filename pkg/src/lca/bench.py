"""Scaling benchmark: per-query cost across a ladder of instance sizes."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from .components import QueryFailed
from .instances import gen_cnf, gen_graph, gen_hypergraph
from .verify import entity_count, make_session

COLUMNS = ("n", "mean_touched_states", "mean_us_per_query", "fail_rate")


def parse_sizes(text: str) -> list[int]:
    """'4096:1048576' (doubling), '4096:1048576:4' (custom factor) or '100,200,400'."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        lo, hi = parts[0], parts[1]
        factor = parts[2] if len(parts) > 2 else 2
        if lo < 1 or hi < lo or factor < 2:
            raise ValueError(f"bad size ladder {text!r}")
        sizes = []
        n = lo
        while n <= hi:
            sizes.append(n)
            n *= factor
        return sizes
    return [int(p) for p in text.split(",") if p.strip()]


def build_instance(algorithm: str, size: int, d: int, seed: int, k: int | None = None):
    if algorithm in ("mis", "isc", "broadcast"):
        return gen_graph(size, d, seed)
    if k is None:
        raise ValueError(f"{algorithm} needs k")
    if algorithm == "color":
        return gen_hypergraph(k * size, size, k, d, seed)
    return gen_cnf(k * size, size, k, d, seed)


def measure(
    algorithm: str,
    size: int,
    d: int,
    seed: int,
    queries: int = 200,
    k: int | None = None,
    fresh: bool = True,
    **overrides: Any,
) -> dict[str, float]:
    """Query ``queries`` random entities; with ``fresh`` each gets its own session."""
    instance = build_instance(algorithm, size, d, seed, k)
    total = entity_count(algorithm, instance)
    rng = random.Random(seed ^ 0x5EED)
    targets = [rng.randrange(total) for _ in range(queries)]
    session = None
    touched = 0
    elapsed = 0.0
    fails = 0
    for v in targets:
        if fresh or session is None:
            session = make_session(algorithm, instance, seed, **overrides)
        before = session.touched
        t0 = time.perf_counter()
        try:
            session.query(v)
        except QueryFailed:
            fails += 1
        elapsed += time.perf_counter() - t0
        touched += session.touched - before
    return {
        "n": size,
        "mean_touched_states": touched / queries,
        "mean_us_per_query": 1e6 * elapsed / queries,
        "fail_rate": fails / queries,
    }


def _measure_kw(kw: dict) -> dict[str, float]:
    return measure(**kw)


def bench(
    algorithm: str,
    sizes: list[int],
    d: int,
    seed: int,
    queries: int = 200,
    k: int | None = None,
    jobs: int = 1,
    fresh: bool = True,
    **overrides: Any,
) -> list[dict[str, float]]:
    tasks = [
        dict(algorithm=algorithm, size=n, d=d, seed=seed, queries=queries, k=k, fresh=fresh, **overrides)
        for n in sizes
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_measure_kw, tasks))
    return [measure(**t) for t in tasks]
