"""Draw-sequence weights and low-weight counting."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from math import comb

from ..channel import DrawSequence

ENUM_MAX_N = 30


def weight(t: Sequence[int], ds: DrawSequence, max_depth: int = 1 << 20) -> int:
    """Queries needed to produce ``t`` from ``ds``: sum over i of the first j with s_{i,j} = t_i."""
    total = 0
    for i, ti in enumerate(t, start=1):
        for j in range(1, max_depth + 1):
            try:
                s = ds.entry(i, j)
            except IndexError:
                raise ValueError(f"symbol {ti} does not occur in stream {i}") from None
            if s == ti:
                total += j
                break
        else:
            raise ValueError(f"symbol {ti} not found in the first {max_depth} entries of stream {i}")
    return total


def count_low_weight(l: int, N: int) -> int:
    """Number of positive integer tuples ``(j_1..j_l)`` with sum at most ``N``: ``C(N, l)``."""
    if l < 1 or N < 0:
        raise ValueError("need l >= 1, N >= 0")
    return comb(N, l)


def enumerate_low_weight(l: int, N: int) -> int:
    """Brute-force count of the same tuples."""
    if not (1 <= l <= N <= ENUM_MAX_N):
        raise ValueError(f"enumeration needs 1 <= l <= N <= {ENUM_MAX_N}")
    if comb(N, l) > 5_000_000:
        raise ValueError("enumeration too large")
    return sum(1 for js in itertools.product(range(1, N - l + 2), repeat=l) if sum(js) <= N)


def messages_with_cheap_encoding(decoder: Callable[[tuple], tuple], ds: DrawSequence, l: int, N: int) -> set:
    """Messages having some encoding ``t`` of weight at most ``N`` under ``ds``.

    Enumerates every position tuple ``(j_1..j_l)`` with sum at most ``N``; the
    stegotext it selects is ``(s_{1,j_1}, .., s_{l,j_l})``.
    """
    found = set()
    for js in itertools.product(range(1, N - l + 2), repeat=l):
        if sum(js) <= N:
            t = tuple(ds.entry(i, j) for i, j in enumerate(js, start=1))
            found.add(decoder(t))
    return found
