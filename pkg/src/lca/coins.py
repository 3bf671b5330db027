"""Lazily evaluated random tape.

Every coin is a pure function of ``(seed, tag, entity, round, epoch)``: the key tuple is
hashed with keyed BLAKE2b (the seed is the key) to a 64-bit little-endian word. Nothing
is stored, so re-evaluating a coin always gives the same answer, in any process.
"""

from __future__ import annotations

import enum
import hashlib
import json
import struct
from typing import Iterable, TextIO

_KEY = struct.Struct("<BQQQ")
_MASK64 = (1 << 64) - 1


class Tag(enum.IntEnum):
    """Separates the coin streams of the different algorithms."""

    MIS = 1
    MIS_B_EXTRA = 2
    ISC = 3
    COLOR = 4
    CNF = 5


class Color(enum.IntEnum):
    RED = 0
    BLUE = 1


def parse_seed(text: str | int) -> int:
    """Accept decimal or 0x-prefixed hex; reduce to 64 bits."""
    value = text if isinstance(text, int) else int(str(text).strip(), 0)
    if value < 0:
        raise ValueError("seed must be non-negative")
    return value & _MASK64


class CoinTape:
    def __init__(self, seed: int, tag: Tag | int):
        self.seed = seed & _MASK64
        self.tag = int(tag)
        self._base = hashlib.blake2b(key=self.seed.to_bytes(8, "little"), digest_size=8)

    def with_tag(self, tag: Tag | int) -> "CoinTape":
        return CoinTape(self.seed, tag)

    def word(self, entity: int, round: int = 0, epoch: int = 0) -> int:
        h = self._base.copy()
        h.update(_KEY.pack(self.tag, entity, round, epoch))
        return int.from_bytes(h.digest(), "little")

    def bernoulli(self, entity: int, round: int, epoch: int, numerator: int, denominator: int) -> int:
        """1 with probability numerator/denominator (bias below 2**-60), else 0."""
        if not 0 < numerator <= denominator:
            raise ValueError("need 0 < numerator <= denominator")
        threshold = (numerator << 64) // denominator
        return 1 if self.word(entity, round, epoch) < threshold else 0

    def color_coin(self, entity: int, epoch: int = 0) -> Color:
        return Color(self.word(entity, 0, epoch) >> 63)

    def __repr__(self) -> str:
        return f"CoinTape(seed={self.seed:#x}, tag={self.tag})"


def coin_vectors(seeds: Iterable[int] = (0, 1, 0xDEADBEEF), count: int = 8) -> list[dict]:
    """A small table of (key tuple -> word) pairs for cross-implementation checks."""
    rows = []
    for seed in seeds:
        for tag in Tag:
            tape = CoinTape(seed, tag)
            for i in range(count):
                entity, rnd, epoch = i * 7919, i, i % 3
                rows.append(
                    {
                        "seed": seed,
                        "tag": int(tag),
                        "entity": entity,
                        "round": rnd,
                        "epoch": epoch,
                        "word": tape.word(entity, rnd, epoch),
                    }
                )
    return rows


def write_test_vectors(stream: TextIO, **kwargs) -> None:
    json.dump(coin_vectors(**kwargs), stream, indent=1)
    stream.write("\n")
