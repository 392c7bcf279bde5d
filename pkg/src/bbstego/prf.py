"""Keyed pseudorandom functions and a lazily tabulated random-function oracle.

The PRF is HMAC-SHA256 over a fixed-width 17-byte input::

    tag (1 byte) || ctr (8 bytes, big-endian) || doc (8 bytes, big-endian)

with tag codes ``stf=1``, ``stl=2``, ``tree=3``.  The first eight digest bytes,
read big-endian, form the 64-bit output; a ``w``-bit symbol is its ``w``
low-order bits.
"""

from __future__ import annotations

import hashlib
import hmac
import os
import secrets
import struct
from dataclasses import dataclass, field
from typing import Protocol

TAG_CODES = {"stf": 1, "stl": 2, "tree": 3}
_TAG_NAMES = {v: k for k, v in TAG_CODES.items()}
_INPUT = struct.Struct(">BQQ")
MAX_W = 32
U64 = 1 << 64

KEY_ENV_VAR = "STEGO_KEY_HEX"


@dataclass(frozen=True)
class StegoKey:
    """Secret key shared by sender and receiver.

    ``repr`` never shows the key material.
    """

    key: bytes = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.key, (bytes, bytearray)) or len(self.key) == 0:
            raise ValueError("key must be a non-empty byte string")

    @property
    def kappa(self) -> int:
        return 8 * len(self.key)

    @classmethod
    def generate(cls, kappa: int = 128, rng=None) -> "StegoKey":
        if kappa % 8 or kappa < 8:
            raise ValueError("kappa must be a positive multiple of 8")
        if rng is None:
            return cls(secrets.token_bytes(kappa // 8))
        return cls(rng.getrandbits(kappa).to_bytes(kappa // 8, "big"))

    @classmethod
    def from_hex(cls, text: str) -> "StegoKey":
        return cls(bytes.fromhex(text.strip()))

    @classmethod
    def from_env(cls, var: str = KEY_ENV_VAR) -> "StegoKey":
        value = os.environ.get(var)
        if not value:
            raise KeyError(f"environment variable {var} is not set")
        return cls.from_hex(value)

    def hex(self) -> str:
        return self.key.hex()


@dataclass(frozen=True)
class PrfInput:
    domain_tag: str
    ctr: int = 0
    doc: int = 0

    def __post_init__(self):
        if self.domain_tag not in TAG_CODES:
            raise ValueError(f"unknown domain tag {self.domain_tag!r}")
        if not 0 <= self.ctr < U64 or not 0 <= self.doc < U64:
            raise ValueError("ctr and doc must be 64-bit unsigned integers")

    def encode(self) -> bytes:
        return _INPUT.pack(TAG_CODES[self.domain_tag], self.ctr, self.doc)

    @classmethod
    def decode(cls, raw: bytes) -> "PrfInput":
        tag, ctr, doc = _INPUT.unpack(raw)
        if tag not in _TAG_NAMES:
            raise ValueError(f"unknown tag code {tag}")
        return cls(_TAG_NAMES[tag], ctr, doc)


def _check_w(w: int) -> None:
    if not 1 <= w <= MAX_W:
        raise ValueError(f"w must be in [1, {MAX_W}], got {w}")


def _key_bytes(key) -> bytes:
    return key.key if isinstance(key, StegoKey) else bytes(key)


def prf_uniform64(key: StegoKey, inp: PrfInput) -> int:
    digest = hmac.digest(_key_bytes(key), inp.encode(), hashlib.sha256)
    return int.from_bytes(digest[:8], "big")


def prf_eval_w(key: StegoKey, inp: PrfInput, w: int) -> int:
    _check_w(w)
    return prf_uniform64(key, inp) & ((1 << w) - 1)


class SymbolFunction(Protocol):
    """Anything mapping ``(ctr, doc)`` to a ``w``-bit symbol."""

    w: int

    def __call__(self, ctr: int, doc: int) -> int: ...


class KeyedFunction:
    """``F_K(ctr, doc)`` for a fixed key, domain tag and output width.

    Same outputs as :func:`prf_eval_w`, without re-validating per call.
    """

    def __init__(self, key: StegoKey, domain_tag: str, w: int):
        _check_w(w)
        if domain_tag not in TAG_CODES:
            raise ValueError(f"unknown domain tag {domain_tag!r}")
        self.w = w
        self.domain_tag = domain_tag
        self._key = _key_bytes(key)
        self._tag = TAG_CODES[domain_tag]
        self._mask = (1 << w) - 1

    def __call__(self, ctr: int, doc: int) -> int:
        digest = hmac.digest(self._key, _INPUT.pack(self._tag, ctr, doc), hashlib.sha256)
        return int.from_bytes(digest[:8], "big") & self._mask

    def __repr__(self):
        return f"KeyedFunction(tag={self.domain_tag!r}, w={self.w})"


class RandomFunctionOracle:
    """A truly random function, sampled lazily.

    The first query on an input draws a fresh ``w``-bit value from ``rng``;
    later queries return the stored value.  Drop-in replacement for
    :class:`KeyedFunction`.
    """

    def __init__(self, w: int, rng):
        _check_w(w)
        self.w = w
        self.rng = rng
        self.table: dict = {}

    def __call__(self, ctr: int, doc: int) -> int:
        x = (ctr, doc)
        try:
            return self.table[x]
        except KeyError:
            v = self.table[x] = self.rng.getrandbits(self.w)
            return v

    def __len__(self):
        return len(self.table)


def random_function_oracle(w: int, rng) -> RandomFunctionOracle:
    return RandomFunctionOracle(w, rng)


def as_symbol_function(key, domain_tag: str, w: int) -> SymbolFunction:
    """Wrap a key as a :class:`KeyedFunction`; pass oracles through unchanged."""
    if isinstance(key, (StegoKey, bytes, bytearray)):
        return KeyedFunction(key if isinstance(key, StegoKey) else StegoKey(bytes(key)), domain_tag, w)
    if getattr(key, "w", w) != w:
        raise ValueError(f"symbol function has width {key.w}, expected {w}")
    return key
