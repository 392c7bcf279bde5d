"""Symbol-level repetition code and the capacity of the induced error channel."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class SymbolBlock:
    symbols: tuple
    w: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if any(not 0 <= v < 1 << self.w for v in self.symbols):
            raise ValueError(f"symbols must be {self.w}-bit values")

    def __len__(self):
        return len(self.symbols)


def _check_r(r: int) -> None:
    if r < 1 or r % 2 == 0:
        raise ValueError(f"repetition factor must be odd and >= 1, got {r}")


def rep_encode(block: SymbolBlock, r: int) -> SymbolBlock:
    _check_r(r)
    return SymbolBlock(tuple(v for v in block.symbols for _ in range(r)), block.w)


def rep_decode(block: SymbolBlock, r: int) -> SymbolBlock:
    """Plurality vote per group of ``r``; ties go to the smallest symbol."""
    _check_r(r)
    if len(block) % r:
        raise ValueError(f"block length {len(block)} is not a multiple of r={r}")
    out = []
    syms = block.symbols
    for pos in range(0, len(syms), r):
        votes = Counter(syms[pos:pos + r])
        best = max(votes.values())
        out.append(min(v for v, c in votes.items() if c == best))
    return SymbolBlock(tuple(out), block.w)


def majority_block_error(p: float, r: int = 3) -> float:
    """Block error of majority decoding when more than ``r // 2`` copies are wrong.

    Exact for ``w = 1``; for ``r = 3`` it equals ``p**2 * (3 - 2p)``.
    """
    _check_r(r)
    need = r // 2 + 1
    return sum(math.comb(r, e) * p ** e * (1 - p) ** (r - e) for e in range(need, r + 1))


def repetition3_block_error(p: float, w: int) -> float:
    """Exact ``r = 3`` block error over the ``2**w``-ary symmetric channel.

    Wrong copies are uniform over the other ``q - 1`` symbols and the sent
    symbol is uniform.  Two agreeing wrong copies always win; three distinct
    values fall to the tie-break, which fails unless the sent symbol is the
    smallest of the three.
    """
    q = 1 << w
    if q == 2:
        return majority_block_error(p, 3)
    two_wrong = 3 * p * p * (1 - p)
    agree = 1 / (q - 1)
    sent_smallest = sum((q - 1 - c) * (q - 2 - c) for c in range(q)) / (q * (q - 1) * (q - 2))
    return p ** 3 + two_wrong * (agree + (1 - agree) * (1 - sent_smallest))


def stf_symbol_error(h: float, w: int) -> float:
    """Per-symbol error ``2**-h * (2**w - 1)`` of the stateful system with a random function."""
    return 2.0 ** -h * (2 ** w - 1)


@dataclass(frozen=True)
class CapacityBound:
    lower_bound: float
    exact: float
    error_probability: float
    assumption_holds: bool


def stf_capacity_bound(w: int, h: float) -> CapacityBound:
    """Capacity of the ``2**w``-ary symmetric channel the stateful encoder induces.

    ``lower_bound`` is ``w - (h + 2) * 2**(w - h)``; ``exact`` the symmetric
    channel capacity.  The lower bound needs error probability at most 1/2.
    """
    pe = stf_symbol_error(h, w)
    ok = pe <= 0.5
    lower = w - (h + 2) * 2.0 ** (w - h)
    if math.isinf(h):
        return CapacityBound(float(w), float(w), 0.0, True)
    q = 2.0 ** -h
    exact = w + (2 ** w - 1) * q * math.log2(q)
    if pe < 1:
        exact += (1 - pe) * math.log2(1 - pe)
    return CapacityBound(lower, exact, pe, ok)
