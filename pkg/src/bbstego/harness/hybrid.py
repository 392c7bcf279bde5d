"""Runnable versions of the three proof hybrids for the stateless system.

``SE2`` uses a fixed (random) function and aborts on any repeated oracle
answer or when a symbol needs more than ``k`` draws.  ``SE3`` replaces the
function with a fresh coin per draw but aborts the same way.  ``SE4`` keeps
the coins and never aborts.  Aborts return :data:`FAIL`.
"""

from __future__ import annotations

from collections.abc import Sequence

from ..bits import bits_to_symbols
from ..channel import ChannelModel, History
from ..prf import as_symbol_function
from .exact import FAIL

MODES = ("SE2", "SE3", "SE4")


def _se2(f, k, symbols, channel, rng, hist):
    Q = set()
    out = []
    for target in symbols:
        j = 0
        while True:
            j += 1
            s = channel.sample(hist, rng)
            if s in Q or j == k + 1:
                return FAIL
            Q.add(s)
            if f(0, s) == target:
                break
        hist.append(s)
        out.append(s)
    return out


def _se3(w, k, symbols, channel, rng, hist):
    Q = set()
    out = []
    for target in symbols:
        j = 0
        while True:
            j += 1
            s = channel.sample(hist, rng)
            if s in Q or j == k + 1:
                return FAIL
            Q.add(s)
            if rng.getrandbits(w) == target:
                break
        hist.append(s)
        out.append(s)
    return out


def _se4(w, symbols, channel, rng, hist):
    out = []
    for target in symbols:
        while True:
            s = channel.sample(hist, rng)
            if rng.getrandbits(w) == target:
                break
        hist.append(s)
        out.append(s)
    return out


def hybrid_encoder(mode: str, key, cfg, m: Sequence[int], channel: ChannelModel, rng, *,
                   history: History = ()):
    """Run hybrid ``mode`` on bit string ``m``; returns documents or :data:`FAIL`.

    ``cfg`` needs ``w`` and ``k``; ``key`` is only used by ``SE2`` (a key or
    a random-function oracle).
    """
    symbols = bits_to_symbols(m, cfg.w)
    hist = list(history)
    if mode == "SE2":
        return _se2(as_symbol_function(key, "stl", cfg.w), cfg.k, symbols, channel, rng, hist)
    if mode == "SE3":
        return _se3(cfg.w, cfg.k, symbols, channel, rng, hist)
    if mode == "SE4":
        return _se4(cfg.w, symbols, channel, rng, hist)
    raise ValueError(f"unknown hybrid mode {mode!r}; expected one of {MODES}")
