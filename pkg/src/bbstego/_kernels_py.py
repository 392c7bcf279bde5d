"""Pure-Python Monte-Carlo kernels (reference and fallback for ``_kernels.pyx``).

Each kernel simulates a stegosystem with a lazily sampled random function on
a memoryless channel uniform over ``support``.  Documents are tracked by
their index into ``support``.  Randomness comes from xoshiro256** seeded by
splitmix64, drawn in the same order as the compiled kernels, so both
backends return identical arrays for the same seed.
"""

from __future__ import annotations

import numpy as np

M64 = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return x, z ^ (z >> 31)


class Xoshiro256:
    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        x = seed & M64
        x, self.s0 = _splitmix64(x)
        x, self.s1 = _splitmix64(x)
        x, self.s2 = _splitmix64(x)
        x, self.s3 = _splitmix64(x)

    def next(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        r = (s1 * 5) & M64
        r = (((r << 7) | (r >> 57)) & M64) * 9 & M64
        t = (s1 << 17) & M64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & M64
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return r

    def bits(self, w: int) -> int:
        return self.next() >> (64 - w)

    def below(self, n: int) -> int:
        """Uniform in ``[0, n)`` by masked rejection."""
        if n == 1:
            return 0
        shift = 64 - (n - 1).bit_length()
        while True:
            x = self.next() >> shift
            if x < n:
                return x


def stf_trials(support, w: int, n_symbols: int, seed: int):
    """Stateful encoder, one symbol per trial.

    Returns ``(samples, targets, decoded)`` arrays of length ``n_symbols``.
    """
    H = len(support)
    rng = Xoshiro256(seed)
    stamp = [0] * H
    gval = [0] * H
    samples = np.zeros(n_symbols, dtype=np.int64)
    targets = np.zeros(n_symbols, dtype=np.int64)
    decoded = np.zeros(n_symbols, dtype=np.int64)
    for t in range(n_symbols):
        mark = t + 1
        target = rng.bits(w)
        j = 0
        while True:
            j += 1
            idx = rng.below(H)
            if stamp[idx] == mark:
                if rng.bits(w) == target:
                    dec = gval[idx]
                    break
            else:
                stamp[idx] = mark
                g = rng.bits(w)
                gval[idx] = g
                if g == target:
                    dec = g
                    break
        samples[t] = j
        targets[t] = target
        decoded[t] = dec
    return samples, targets, decoded


def stl_trials(support, w: int, k: int, l: int, n_messages: int, seed: int):
    """Stateless encoder with a fresh random function per message.

    Returns ``(failed, samples)``: per-message failure flags and per-symbol
    draw counts (length ``n_messages * l``).
    """
    H = len(support)
    rng = Xoshiro256(seed)
    gstamp = [0] * H
    gval = [0] * H
    failed = np.zeros(n_messages, dtype=np.uint8)
    samples = np.zeros(n_messages * l, dtype=np.int64)
    for msg in range(n_messages):
        mark = msg + 1
        bad = 0
        for i in range(l):
            target = rng.bits(w)
            j = 0
            while True:
                j += 1
                idx = rng.below(H)
                if gstamp[idx] != mark:
                    gstamp[idx] = mark
                    gval[idx] = rng.bits(w)
                if gval[idx] == target or j == k:
                    break
            if gval[idx] != target:
                bad = 1
            samples[msg * l + i] = j
        failed[msg] = bad
    return failed, samples


def stf_stateless_trials(support, w: int, l: int, n_messages: int, seed: int):
    """Counter-free stateful variant with an exact per-message log.

    Returns ``(failed, samples)`` like :func:`stl_trials`.
    """
    H = len(support)
    rng = Xoshiro256(seed)
    qstamp = [0] * H
    gval = [0] * H
    failed = np.zeros(n_messages, dtype=np.uint8)
    samples = np.zeros(n_messages * l, dtype=np.int64)
    for msg in range(n_messages):
        mark = msg + 1
        bad = 0
        for i in range(l):
            target = rng.bits(w)
            j = 0
            while True:
                j += 1
                idx = rng.below(H)
                if qstamp[idx] == mark:
                    if rng.bits(w) == target:
                        break
                else:
                    qstamp[idx] = mark
                    gval[idx] = rng.bits(w)
                    if gval[idx] == target:
                        break
            if gval[idx] != target:
                bad = 1
            samples[msg * l + i] = j
        failed[msg] = bad
    return failed, samples


def uniform_draws(n: int, H: int, seed: int):
    """``n`` draws of :meth:`Xoshiro256.below` (used to cross-check the generators)."""
    rng = Xoshiro256(seed)
    return np.array([rng.below(H) for _ in range(n)], dtype=np.int64)
