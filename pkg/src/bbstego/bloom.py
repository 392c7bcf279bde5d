"""A Bloom filter for the sender's private log of sampled documents."""

from __future__ import annotations

import hashlib
import math


class BloomFilter:
    """Set-like membership with false positives, no false negatives.

    Index ``g`` of ``x`` is ``(h1 + g * h2) mod m`` where ``h1, h2`` come
    from keyed BLAKE2b of ``x`` under a private salt.
    """

    def __init__(self, m: int, j: int, salt: bytes = b""):
        if m < 1 or j < 1:
            raise ValueError("Bloom filter needs m >= 1 bits and j >= 1 hash functions")
        self.m = m
        self.j = j
        self.salt = salt[:64]
        self.bits = bytearray((m + 7) // 8)
        self.inserted = 0

    @classmethod
    def for_capacity(cls, entries: int, bits_per_entry: float, salt: bytes = b"") -> "BloomFilter":
        m = max(1, math.ceil(entries * bits_per_entry))
        j = max(1, round(bits_per_entry * math.log(2)))
        return cls(m, j, salt)

    def _indices(self, x: int):
        d = hashlib.blake2b(x.to_bytes(8, "big"), key=self.salt, digest_size=16).digest()
        h1 = int.from_bytes(d[:8], "big")
        h2 = int.from_bytes(d[8:], "big") | 1
        m = self.m
        return [(h1 + g * h2) % m for g in range(self.j)]

    def add(self, x: int) -> None:
        for k in self._indices(x):
            self.bits[k >> 3] |= 1 << (k & 7)
        self.inserted += 1

    def __contains__(self, x: int) -> bool:
        bits = self.bits
        return all(bits[k >> 3] >> (k & 7) & 1 for k in self._indices(x))

    def false_positive_estimate(self, inserted: int | None = None) -> float:
        n = self.inserted if inserted is None else inserted
        return (1.0 - math.exp(-self.j * n / self.m)) ** self.j


def stateless_bloom_bits_per_entry(h: float, w: int, l: int) -> float:
    """Bits per entry ``(h - w - log2 l) / ln 2`` for the stateless STF variant."""
    return (h - w - math.log2(l)) / math.log(2)
