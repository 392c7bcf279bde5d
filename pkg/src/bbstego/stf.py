"""Stateful stegosystem: counter-keyed rejection sampling.

For each ``w``-bit hiddentext symbol the encoder draws documents until one is
accepted.  A document seen for the first time within the current symbol is
accepted iff ``F_K(ctr, s)`` equals the symbol; a repeated draw is accepted
iff a fresh uniform ``w``-bit coin equals the symbol.  Every draw is thus
accepted with probability ``2**-w`` independently, and the output follows the
channel exactly when ``F`` is random.  The decoder reads ``F_K(ctr, s_i)``.
"""

from __future__ import annotations

import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field

from .bits import bits_to_symbols, symbols_to_bits
from .bloom import BloomFilter
from .channel import ChannelModel, History
from .prf import MAX_W, U64, as_symbol_function


@dataclass(frozen=True)
class StfConfig:
    w: int
    kappa: int = 128

    def __post_init__(self):
        if not 1 <= self.w <= MAX_W:
            raise ValueError(f"w must be in [1, {MAX_W}]")


@dataclass
class StfState:
    """Counter shared by sender and receiver."""

    ctr: int = 0

    def __post_init__(self):
        if not 0 <= self.ctr < U64:
            raise OverflowError("ctr must be a 64-bit unsigned integer")


@dataclass
class PrivateSampleLog:
    """The sender's record ``Q`` of every document received from the oracle."""

    seen: set | BloomFilter = field(default_factory=set)

    def __contains__(self, s):
        return s in self.seen

    def add(self, s):
        self.seen.add(s)


def _check_regime(channel: ChannelModel, w: int) -> None:
    h = getattr(channel, "min_entropy_bits", None)
    if h is not None and h == h and w >= h:
        warnings.warn(f"rate w={w} is not below channel min-entropy h={h:.3f}; decoding will be unreliable",
                      RuntimeWarning, stacklevel=3)


def _advance(ctr: int, n: int) -> None:
    if not 0 <= ctr or ctr + n >= U64:
        raise OverflowError("64-bit counter overflow")


def stf_encode_symbols(f, symbols: Sequence[int], channel: ChannelModel, rng, *,
                       history: History = (), ctr: int = 0) -> list:
    """Encode already-split ``w``-bit symbols; ``f`` is any ``(ctr, doc) -> symbol`` function."""
    w = f.w
    _advance(ctr, len(symbols))
    hist = list(history)
    sample = channel.sample
    coin = rng.getrandbits
    out = []
    for target in symbols:
        ctr += 1
        seen = set()
        while True:
            s = sample(hist, rng)
            if s in seen:
                if coin(w) == target:
                    break
            else:
                seen.add(s)
                if f(ctr, s) == target:
                    break
        hist.append(s)
        out.append(s)
    return out


def stf_encode(key, cfg: StfConfig, m: Sequence[int], channel: ChannelModel, rng, *,
               history: History = (), ctr: int = 0) -> list:
    """Encode the bit string ``m`` into ``ceil(len(m) / w)`` documents.

    ``key`` is a :class:`~bbstego.prf.StegoKey` or a drop-in symbol function
    (e.g. :class:`~bbstego.prf.RandomFunctionOracle`).  The counter used for
    symbol ``i`` (1-based) is ``ctr + i``; the caller continues from
    ``ctr + len(result)``.
    """
    f = as_symbol_function(key, "stf", cfg.w)
    channel.check_history(history)
    _check_regime(channel, cfg.w)
    return stf_encode_symbols(f, bits_to_symbols(m, cfg.w), channel, rng, history=history, ctr=ctr)


def stf_decode_symbols(f, stegotext: Sequence[int], ctr: int = 0) -> list:
    _advance(ctr, len(stegotext))
    return [f(ctr + i, s) for i, s in enumerate(stegotext, start=1)]


def stf_decode(key, cfg: StfConfig, stegotext: Sequence[int], ctr: int = 0) -> list:
    f = as_symbol_function(key, "stf", cfg.w)
    return symbols_to_bits(stf_decode_symbols(f, stegotext, ctr), cfg.w)


def stf_encode_stateless_symbols(f, symbols: Sequence[int], channel: ChannelModel, rng,
                                 log: PrivateSampleLog, *, history: History = ()) -> list:
    w = f.w
    hist = list(history)
    sample = channel.sample
    coin = rng.getrandbits
    out = []
    for target in symbols:
        while True:
            s = sample(hist, rng)
            if s in log:
                accepted = coin(w) == target
            else:
                accepted = f(0, s) == target
            log.add(s)
            if accepted:
                break
        hist.append(s)
        out.append(s)
    return out


def stf_encode_stateless(key, cfg: StfConfig, m: Sequence[int], channel: ChannelModel, rng,
                         log: PrivateSampleLog | None = None, *, history: History = ()) -> list:
    """Counter-free variant: repeat detection against the sender's global log ``Q``.

    The PRF is evaluated with ``ctr = 0``.  Pass the same ``log`` across
    messages to keep security across them; its default is a fresh exact set.
    """
    f = as_symbol_function(key, "stf", cfg.w)
    channel.check_history(history)
    _check_regime(channel, cfg.w)
    if log is None:
        log = PrivateSampleLog()
    return stf_encode_stateless_symbols(f, bits_to_symbols(m, cfg.w), channel, rng, log, history=history)


def stf_decode_stateless(key, cfg: StfConfig, stegotext: Sequence[int]) -> list:
    f = as_symbol_function(key, "stf", cfg.w)
    return symbols_to_bits([f(0, s) for s in stegotext], cfg.w)
