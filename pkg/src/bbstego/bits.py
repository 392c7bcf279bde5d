"""Conversions between bit strings, ``w``-bit symbols and bytes.

Bits are sequences of 0/1 integers, most significant bit first within each
symbol.  Messages whose length is not a multiple of ``w`` are zero-padded.
"""

from __future__ import annotations

from collections.abc import Sequence


def bits_to_symbols(bits: Sequence[int], w: int) -> list:
    if w < 1:
        raise ValueError("w must be positive")
    bits = list(bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    bits += [0] * (-len(bits) % w)
    out = []
    for pos in range(0, len(bits), w):
        v = 0
        for b in bits[pos:pos + w]:
            v = (v << 1) | b
        out.append(v)
    return out


def symbols_to_bits(symbols: Sequence[int], w: int) -> list:
    out = []
    for v in symbols:
        if not 0 <= v < 1 << w:
            raise ValueError(f"symbol {v} does not fit in {w} bits")
        out.extend((v >> (w - 1 - k)) & 1 for k in range(w))
    return out


def bytes_to_bits(data: bytes) -> list:
    return [(byte >> (7 - k)) & 1 for byte in data for k in range(8)]


def bits_to_bytes(bits: Sequence[int]) -> bytes:
    bits = list(bits) + [0] * (-len(bits) % 8)
    return bytes(int("".join(map(str, bits[p:p + 8])), 2) for p in range(0, len(bits), 8))


def num_symbols(n_bits: int, w: int) -> int:
    return -(-n_bits // w)
