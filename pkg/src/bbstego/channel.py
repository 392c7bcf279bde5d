"""Channels over the dense alphabet ``[0, S)`` and their sampling oracles.

Every channel kind here indexes its next-document distribution by history
length only (memoryless channels trivially so).  ``sample_at(i, rng)`` draws
from ``D_i``, the distribution after a history of length ``i - 1``.
"""

from __future__ import annotations

import bisect
import json
import math
import random
from collections.abc import Mapping, Sequence
from itertools import accumulate
from pathlib import Path

from .flat import ExplicitFlatChannel, FlatChannelSeed, FlatTree, check_params, make_true_random_flat

DocumentId = int
History = Sequence[int]

KINDS = ("memoryless-empirical", "flat-true-random", "flat-pseudorandom")


class IllegalHistory(ValueError):
    pass


class ChannelModel:
    """Sampling oracle ``M`` with a declared min-entropy.

    Subclasses implement ``sample_at``, ``in_support`` and ``distribution_at``.
    """

    kind: str
    alphabet_size: int
    min_entropy_bits: float

    def sample_at(self, i: int, rng) -> int:
        raise NotImplementedError

    def sample(self, history: History, rng) -> int:
        return self.sample_at(len(history) + 1, rng)

    def in_support(self, i: int, s: int) -> bool:
        raise NotImplementedError

    def distribution_at(self, i: int) -> dict:
        """Exact ``{doc: probability}`` for ``D_i`` (small alphabets only)."""
        raise NotImplementedError

    def check_history(self, history: History) -> None:
        S = self.alphabet_size
        for pos, s in enumerate(history, start=1):
            if not isinstance(s, int) or not 0 <= s < S:
                raise IllegalHistory(f"history symbol {s!r} at position {pos} outside [0, {S})")
            if not self.in_support(pos, s):
                raise IllegalHistory(f"history symbol {s} at position {pos} has probability zero")

    def to_spec(self) -> dict:
        raise NotImplementedError


class MemorylessChannel(ChannelModel):
    """History-independent channel sampling proportionally to integer counts."""

    kind = "memoryless-empirical"

    def __init__(self, counts: Mapping[int, int], alphabet_size: int | None = None):
        items = sorted((int(s), int(c)) for s, c in counts.items())
        if any(c < 0 for _, c in items):
            raise ValueError("counts must be nonnegative")
        if any(s < 0 for s, _ in items):
            raise ValueError("documents must be nonnegative")
        items = [(s, c) for s, c in items if c > 0]
        if not items:
            raise ValueError("at least one positive count is required")
        self.counts = dict(items)
        self.alphabet_size = alphabet_size if alphabet_size is not None else max(self.counts) + 1
        if max(self.counts) >= self.alphabet_size:
            raise ValueError("count table mentions documents outside the alphabet")
        self._docs = [s for s, _ in items]
        self._cum = list(accumulate(c for _, c in items))
        self.total = self._cum[-1]
        self.min_entropy_bits = -math.log2(max(self.counts.values()) / self.total)
        self._uniform = len(set(self.counts.values())) == 1

    def sample_at(self, i: int, rng) -> int:
        if self._uniform:
            return self._docs[rng.randrange(len(self._docs))]
        return self._docs[bisect.bisect_right(self._cum, rng.randrange(self.total))]

    def in_support(self, i: int, s: int) -> bool:
        return s in self.counts

    def distribution_at(self, i: int) -> dict:
        return {s: c / self.total for s, c in self.counts.items()}

    def to_spec(self) -> dict:
        return {"kind": self.kind, "S": self.alphabet_size,
                "counts": {str(s): c for s, c in self.counts.items()}}


def make_memoryless_empirical(frequencies: Mapping[int, int], alphabet_size: int | None = None) -> MemorylessChannel:
    return MemorylessChannel(frequencies, alphabet_size)


def uniform_channel(support: Sequence[int], alphabet_size: int | None = None) -> MemorylessChannel:
    """Memoryless channel uniform on ``support``."""
    return MemorylessChannel({s: 1 for s in support}, alphabet_size)


class _FlatBase(ChannelModel):
    def __init__(self, S: int, H: int):
        check_params(S, H)
        self.alphabet_size = S
        self.H = H
        self.min_entropy_bits = math.log2(H)

    @property
    def S(self) -> int:
        return self.alphabet_size

    def distribution_at(self, i: int) -> dict:
        p = 1.0 / self.H
        return {s: p for s in self.support(i)}


class TrueRandomFlatChannel(_FlatBase):
    """Flat channel with uniformly chosen, explicitly stored supports."""

    kind = "flat-true-random"

    def __init__(self, explicit: ExplicitFlatChannel):
        super().__init__(explicit.S, explicit.H)
        self.explicit = explicit
        self._supports = explicit.supports

    @classmethod
    def generate(cls, S: int, H: int, max_i: int, rng) -> "TrueRandomFlatChannel":
        return cls(make_true_random_flat(S, H, max_i, rng))

    @property
    def max_i(self) -> int:
        return self.explicit.max_i

    def sample_at(self, i: int, rng) -> int:
        try:
            d = self._supports[i - 1]
        except IndexError:
            raise IndexError(f"history length {i - 1} exceeds stored range (max_i={self.max_i})") from None
        return d[rng.randrange(self.H)]

    def in_support(self, i: int, s: int) -> bool:
        return self.explicit.insupp(i, s)

    def support(self, i: int) -> list:
        return self.explicit.support(i)

    def to_spec(self) -> dict:
        return {"kind": self.kind, "S": self.S, "H": self.H,
                "supports": [list(d) for d in self._supports]}


class PseudorandomFlatChannel(_FlatBase):
    """Flat channel whose supports are the leaves of a PRF-filled interval-sum tree."""

    kind = "flat-pseudorandom"

    def __init__(self, seed: FlatChannelSeed, S: int, H: int):
        super().__init__(S, H)
        self.seed = seed
        self.tree = FlatTree(seed, S, H)

    @classmethod
    def generate(cls, S: int, H: int, rng, seed_bits: int = 128) -> "PseudorandomFlatChannel":
        return cls(FlatChannelSeed.generate(seed_bits, rng), S, H)

    def sample_at(self, i: int, rng) -> int:
        return self.tree.sample(i, rng)

    def in_support(self, i: int, s: int) -> bool:
        return self.tree.insupp(i, s)

    def support(self, i: int) -> list:
        return self.tree.support(i)

    def to_spec(self) -> dict:
        return {"kind": self.kind, "S": self.S, "H": self.H, "seed_hex": self.seed.hex()}


def sample_next(channel: ChannelModel, history: History, rng) -> int:
    """Draw the next document after validating ``history``."""
    channel.check_history(history)
    return channel.sample(history, rng)


def min_entropy(channel: ChannelModel) -> float:
    if isinstance(channel, _FlatBase):
        return math.log2(channel.H)
    if isinstance(channel, MemorylessChannel):
        return channel.min_entropy_bits
    raise NotImplementedError(f"min-entropy of {type(channel).__name__} is not exactly computable")


class DrawSequence(ChannelModel):
    """Pre-committed oracle answers ``s_{i,j}``, extended lazily and recorded.

    Usable wherever a channel is expected: ``sample(history)`` reads the next
    unread entry of stream ``len(history) + 1``.
    """

    kind = "draw-sequence"

    def __init__(self, channel: ChannelModel | None = None, rng=None, streams: Mapping[int, Sequence[int]] | None = None):
        self.channel = channel
        self.rng = rng if rng is not None else random.Random()
        self.streams: dict = {int(i): list(v) for i, v in (streams or {}).items()}
        self.cursors: dict = {}
        if channel is not None:
            self.alphabet_size = channel.alphabet_size
            self.min_entropy_bits = channel.min_entropy_bits
        else:
            docs = [s for v in self.streams.values() for s in v]
            self.alphabet_size = max(docs, default=0) + 1
            self.min_entropy_bits = float("nan")

    def entry(self, i: int, j: int) -> int:
        """``s_{i,j}`` (1-based ``j``), generating as needed."""
        if i < 1 or j < 1:
            raise ValueError("stream and position indices are 1-based")
        stream = self.streams.setdefault(i, [])
        while len(stream) < j:
            if self.channel is None:
                raise IndexError(f"stream {i} exhausted and no generating channel")
            stream.append(self.channel.sample_at(i, self.rng))
        return stream[j - 1]

    def next(self, i: int) -> int:
        j = self.cursors.get(i, 0) + 1
        s = self.entry(i, j)
        self.cursors[i] = j
        return s

    def sample_at(self, i: int, rng=None) -> int:
        return self.next(i)

    def in_support(self, i: int, s: int) -> bool:
        if self.channel is None:
            return True
        return self.channel.in_support(i, s)

    def rewind(self) -> None:
        self.cursors.clear()


def draw_oracle_next(ds: DrawSequence, i: int) -> int:
    return ds.next(i)


class CountingChannel(ChannelModel):
    """Wraps a channel and records every oracle response."""

    def __init__(self, inner: ChannelModel):
        self.inner = inner
        self.kind = inner.kind
        self.alphabet_size = inner.alphabet_size
        self.min_entropy_bits = inner.min_entropy_bits
        self.responses: list = []

    @property
    def calls(self) -> int:
        return len(self.responses)

    def sample_at(self, i: int, rng) -> int:
        s = self.inner.sample_at(i, rng)
        self.responses.append((i, s))
        return s

    def in_support(self, i: int, s: int) -> bool:
        return self.inner.in_support(i, s)

    def distribution_at(self, i: int) -> dict:
        return self.inner.distribution_at(i)

    def reset(self) -> None:
        self.responses.clear()


def channel_from_spec(spec: Mapping) -> ChannelModel:
    kind = spec.get("kind")
    if kind == "memoryless-empirical":
        counts = {int(s): int(c) for s, c in spec["counts"].items()}
        return MemorylessChannel(counts, spec.get("S"))
    if kind == "flat-pseudorandom":
        return PseudorandomFlatChannel(FlatChannelSeed.from_hex(spec["seed_hex"]), int(spec["S"]), int(spec["H"]))
    if kind == "flat-true-random":
        if "supports" in spec:
            return TrueRandomFlatChannel(ExplicitFlatChannel(int(spec["S"]), int(spec["H"]), spec["supports"]))
        rng = random.Random(int(spec.get("rng_seed", 0)))
        return TrueRandomFlatChannel.generate(int(spec["S"]), int(spec["H"]), int(spec.get("max_i", 64)), rng)
    raise ValueError(f"unknown channel kind {kind!r}; expected one of {KINDS}")


def load_channel(path) -> ChannelModel:
    with open(path, encoding="utf-8") as f:
        return channel_from_spec(json.load(f))


def save_channel(channel: ChannelModel, path) -> None:
    Path(path).write_text(json.dumps(channel.to_spec(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
