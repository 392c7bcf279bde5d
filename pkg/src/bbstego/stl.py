"""Stateless stegosystem: bounded rejection sampling on ``F_K(s)``.

Up to ``k`` documents are drawn per symbol; the first with ``F_K(s)`` equal
to the symbol is sent, otherwise the ``k``-th draw is sent anyway.  Decoding
needs only the key.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .bits import bits_to_symbols, symbols_to_bits
from .channel import ChannelModel, History
from .prf import MAX_W, as_symbol_function


@dataclass(frozen=True)
class StlConfig:
    w: int
    k: int
    kappa: int = 128

    def __post_init__(self):
        if not 1 <= self.w <= MAX_W:
            raise ValueError(f"w must be in [1, {MAX_W}]")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @staticmethod
    def recommended_k(w: int, l: int, delta: float) -> int:
        """Smallest ``k`` with ``2**w * ln(l / delta) <= k``."""
        return max(1, math.ceil(2 ** w * math.log(l / delta)))


def stl_encode_symbols(f, k: int, symbols: Sequence[int], channel: ChannelModel, rng, *,
                       history: History = ()) -> list:
    hist = list(history)
    sample = channel.sample
    out = []
    for target in symbols:
        for _ in range(k):
            s = sample(hist, rng)
            if f(0, s) == target:
                break
        hist.append(s)
        out.append(s)
    return out


def stl_encode(key, cfg: StlConfig, m: Sequence[int], channel: ChannelModel, rng, *,
               history: History = ()) -> list:
    f = as_symbol_function(key, "stl", cfg.w)
    channel.check_history(history)
    return stl_encode_symbols(f, cfg.k, bits_to_symbols(m, cfg.w), channel, rng, history=history)


def stl_decode(key, cfg: StlConfig, stegotext: Sequence[int]) -> list:
    f = as_symbol_function(key, "stl", cfg.w)
    return symbols_to_bits([f(0, s) for s in stegotext], cfg.w)
