# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernels; same semantics and random stream as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, uint8_t

cnp.import_array()


cdef struct Xoshiro:
    uint64_t s0, s1, s2, s3


cdef inline uint64_t _splitmix(uint64_t *x) noexcept nogil:
    x[0] += 0x9E3779B97F4A7C15ULL
    cdef uint64_t z = x[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline void _seed(Xoshiro *r, uint64_t seed) noexcept nogil:
    cdef uint64_t x = seed
    r.s0 = _splitmix(&x)
    r.s1 = _splitmix(&x)
    r.s2 = _splitmix(&x)
    r.s3 = _splitmix(&x)


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _next(Xoshiro *r) noexcept nogil:
    cdef uint64_t result = _rotl(r.s1 * 5, 7) * 9
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline uint64_t _bits(Xoshiro *r, int w) noexcept nogil:
    return _next(r) >> (64 - w)


cdef inline int _bit_length(uint64_t x) noexcept nogil:
    cdef int n = 0
    while x:
        x >>= 1
        n += 1
    return n


cdef inline int64_t _below(Xoshiro *r, int64_t n, int shift) noexcept nogil:
    cdef uint64_t x
    if n == 1:
        return 0
    while True:
        x = _next(r) >> shift
        if x < <uint64_t>n:
            return <int64_t>x


def stf_trials(support, int w, int64_t n_symbols, uint64_t seed):
    cdef int64_t H = len(support)
    cdef int shift = 64 - _bit_length(<uint64_t>(H - 1))
    cdef Xoshiro rng
    _seed(&rng, seed)
    cdef int64_t[::1] stamp = np.zeros(H, dtype=np.int64)
    cdef int64_t[::1] gval = np.zeros(H, dtype=np.int64)
    samples_a = np.zeros(n_symbols, dtype=np.int64)
    targets_a = np.zeros(n_symbols, dtype=np.int64)
    decoded_a = np.zeros(n_symbols, dtype=np.int64)
    cdef int64_t[::1] samples = samples_a
    cdef int64_t[::1] targets = targets_a
    cdef int64_t[::1] decoded = decoded_a
    cdef int64_t t, j, idx, target, g, dec, mark
    with nogil:
        for t in range(n_symbols):
            mark = t + 1
            target = <int64_t>_bits(&rng, w)
            j = 0
            while True:
                j += 1
                idx = _below(&rng, H, shift)
                if stamp[idx] == mark:
                    if <int64_t>_bits(&rng, w) == target:
                        dec = gval[idx]
                        break
                else:
                    stamp[idx] = mark
                    g = <int64_t>_bits(&rng, w)
                    gval[idx] = g
                    if g == target:
                        dec = g
                        break
            samples[t] = j
            targets[t] = target
            decoded[t] = dec
    return samples_a, targets_a, decoded_a


def stl_trials(support, int w, int64_t k, int64_t l, int64_t n_messages, uint64_t seed):
    cdef int64_t H = len(support)
    cdef int shift = 64 - _bit_length(<uint64_t>(H - 1))
    cdef Xoshiro rng
    _seed(&rng, seed)
    cdef int64_t[::1] gstamp = np.zeros(H, dtype=np.int64)
    cdef int64_t[::1] gval = np.zeros(H, dtype=np.int64)
    failed_a = np.zeros(n_messages, dtype=np.uint8)
    samples_a = np.zeros(n_messages * l, dtype=np.int64)
    cdef uint8_t[::1] failed = failed_a
    cdef int64_t[::1] samples = samples_a
    cdef int64_t msg, i, j, idx, target, mark
    cdef uint8_t bad
    with nogil:
        for msg in range(n_messages):
            mark = msg + 1
            bad = 0
            for i in range(l):
                target = <int64_t>_bits(&rng, w)
                j = 0
                while True:
                    j += 1
                    idx = _below(&rng, H, shift)
                    if gstamp[idx] != mark:
                        gstamp[idx] = mark
                        gval[idx] = <int64_t>_bits(&rng, w)
                    if gval[idx] == target or j == k:
                        break
                if gval[idx] != target:
                    bad = 1
                samples[msg * l + i] = j
            failed[msg] = bad
    return failed_a, samples_a


def stf_stateless_trials(support, int w, int64_t l, int64_t n_messages, uint64_t seed):
    cdef int64_t H = len(support)
    cdef int shift = 64 - _bit_length(<uint64_t>(H - 1))
    cdef Xoshiro rng
    _seed(&rng, seed)
    cdef int64_t[::1] qstamp = np.zeros(H, dtype=np.int64)
    cdef int64_t[::1] gval = np.zeros(H, dtype=np.int64)
    failed_a = np.zeros(n_messages, dtype=np.uint8)
    samples_a = np.zeros(n_messages * l, dtype=np.int64)
    cdef uint8_t[::1] failed = failed_a
    cdef int64_t[::1] samples = samples_a
    cdef int64_t msg, i, j, idx, target, mark
    cdef uint8_t bad
    with nogil:
        for msg in range(n_messages):
            mark = msg + 1
            bad = 0
            for i in range(l):
                target = <int64_t>_bits(&rng, w)
                j = 0
                while True:
                    j += 1
                    idx = _below(&rng, H, shift)
                    if qstamp[idx] == mark:
                        if <int64_t>_bits(&rng, w) == target:
                            break
                    else:
                        qstamp[idx] = mark
                        gval[idx] = <int64_t>_bits(&rng, w)
                        if gval[idx] == target:
                            break
                if gval[idx] != target:
                    bad = 1
                samples[msg * l + i] = j
            failed[msg] = bad
    return failed_a, samples_a


def uniform_draws(int64_t n, int64_t H, uint64_t seed):
    cdef int shift = 64 - _bit_length(<uint64_t>(H - 1))
    cdef Xoshiro rng
    _seed(&rng, seed)
    out_a = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] out = out_a
    cdef int64_t t
    with nogil:
        for t in range(n):
            out[t] = _below(&rng, H, shift)
    return out_a
