"""Uniform encode/decode adapters over the stegosystems for the experiment code.

``key`` may be a fixed key or oracle, or a callable ``rng -> key`` that is
invoked once per message (fresh key per trial, as in the reliability
definition).  :func:`fresh_random_function` and :func:`fresh_prf_key` are the
two usual factories.
"""

from __future__ import annotations

from ..bits import bits_to_symbols, symbols_to_bits
from ..bloom import BloomFilter, stateless_bloom_bits_per_entry
from ..prf import RandomFunctionOracle, StegoKey, as_symbol_function
from ..stf import PrivateSampleLog, stf_decode_symbols, stf_encode_stateless_symbols, stf_encode_symbols
from ..stl import stl_encode_symbols


def fresh_random_function(w):
    return lambda rng: RandomFunctionOracle(w, rng)


def fresh_prf_key(kappa: int = 128):
    return lambda rng: StegoKey.generate(kappa, rng)


class _System:
    name = ""
    tag = ""

    def __init__(self, key, w: int):
        self.w = w
        self._key = key
        fixed = isinstance(key, (StegoKey, bytes)) or hasattr(key, "w")
        self._f = as_symbol_function(key, self.tag, w) if fixed else None

    def function(self, rng):
        if self._f is not None:
            return self._f
        return as_symbol_function(self._key(rng), self.tag, self.w)

    def encode_symbols(self, f, symbols, channel, rng, history=()):
        raise NotImplementedError

    def decode_symbols(self, f, stegotext):
        raise NotImplementedError

    def run(self, symbols, channel, rng, history=()):
        """Encode then decode one message; returns ``(stegotext, decoded symbols)``."""
        f = self.function(rng)
        stego = self.encode_symbols(f, symbols, channel, rng, history)
        return stego, self.decode_symbols(f, stego)

    def round_trip(self, bits, channel, rng, history=()):
        _, dec = self.run(bits_to_symbols(bits, self.w), channel, rng, history)
        return symbols_to_bits(dec, self.w)[:len(bits)]


class StfSystem(_System):
    """Stateful system; the shared counter advances by one per symbol across messages."""

    name = "stf"
    tag = "stf"

    def __init__(self, key, w: int, ctr: int = 0):
        super().__init__(key, w)
        self.ctr = ctr
        self._ctr_at_encode = ctr

    def encode_symbols(self, f, symbols, channel, rng, history=()):
        self._ctr_at_encode = self.ctr
        out = stf_encode_symbols(f, symbols, channel, rng, history=history, ctr=self.ctr)
        self.ctr += len(out)
        return out

    def decode_symbols(self, f, stegotext):
        return stf_decode_symbols(f, stegotext, self._ctr_at_encode)


class StfStatelessSystem(_System):
    """Counter-free stateful variant with a per-message private log (exact set or Bloom filter)."""

    name = "stf-stateless"
    tag = "stf"

    def __init__(self, key, w: int, bloom_bits_per_entry: float | None = None, h: float | None = None):
        super().__init__(key, w)
        self.bloom_bits_per_entry = bloom_bits_per_entry
        self.h = h

    def new_log(self, l: int, rng) -> PrivateSampleLog:
        if self.bloom_bits_per_entry is None:
            return PrivateSampleLog()
        # sized for the expected l * 2**w oracle answers of one message
        bf = BloomFilter.for_capacity(l * 2 ** self.w, self.bloom_bits_per_entry,
                                      rng.getrandbits(128).to_bytes(16, "big"))
        return PrivateSampleLog(bf)

    @classmethod
    def with_bloom(cls, key, w: int, h: float, l: int) -> "StfStatelessSystem":
        return cls(key, w, stateless_bloom_bits_per_entry(h, w, l), h)

    def encode_symbols(self, f, symbols, channel, rng, history=()):
        return stf_encode_stateless_symbols(f, symbols, channel, rng, self.new_log(len(symbols), rng), history=history)

    def decode_symbols(self, f, stegotext):
        return [f(0, s) for s in stegotext]


class StlSystem(_System):
    name = "stl"
    tag = "stl"

    def __init__(self, key, w: int, k: int):
        super().__init__(key, w)
        self.k = k

    def encode_symbols(self, f, symbols, channel, rng, history=()):
        return stl_encode_symbols(f, self.k, symbols, channel, rng, history=history)

    def decode_symbols(self, f, stegotext):
        return [f(0, s) for s in stegotext]


class PerfectSystem:
    """Identity stub: sends the symbols themselves."""

    name = "perfect"

    def __init__(self, w: int = 1):
        self.w = w

    def run(self, symbols, channel, rng, history=()):
        return list(symbols), list(symbols)

    def round_trip(self, bits, channel, rng, history=()):
        return list(bits)
