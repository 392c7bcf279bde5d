"""Bias of a public multiply-shift hash used for rejection sampling.

With a public ``f: S -> {0,1}^w``, the process "pick a uniform ``c``, draw
from ``D`` until ``f(s) = c``" yields a distribution ``E``.  Its distance
from ``D`` is the hash bias

    eps = TV(D, E) = 1/2 * sum_c |D(f^-1(c)) - 2**-w|

and ``l`` independent documents drift apart further, roughly as
``sqrt(l) * eps``.
"""

from __future__ import annotations

import itertools
import math
import statistics
from collections.abc import Mapping

from .exact import MAX_CELLS

MASK64 = (1 << 64) - 1


def multiply_shift_hash(a: int, w: int):
    """``s -> ((a * s) mod 2**64) >> (64 - w)`` with ``a`` forced odd."""
    a |= 1
    shift = 64 - w
    return lambda s: ((a * s) & MASK64) >> shift


def bucket_masses(dist: Mapping, f, w: int) -> list:
    masses = [0.0] * (1 << w)
    for s, p in dist.items():
        masses[f(s)] += p
    return masses


def hash_bias(dist: Mapping, f, w: int) -> dict:
    """Exact bias of ``f`` on ``dist``: ``tv`` (the distance D to E) and ``max_dev``."""
    target = 2.0 ** -w
    dev = [abs(m - target) for m in bucket_masses(dist, f, w)]
    return {"tv": sum(dev) / 2, "max_dev": max(dev)}


def conditioned_distribution(dist: Mapping, f, w: int) -> dict:
    """``E``: uniform bucket, then ``D`` conditioned on that bucket.  Needs every bucket nonempty."""
    masses = bucket_masses(dist, f, w)
    if min(masses) <= 0:
        raise ValueError("some hash bucket has zero mass; the conditioned process never stops")
    q = 2.0 ** -w
    return {s: q * p / masses[f(s)] for s, p in dist.items()}


def product_tv(p: Mapping, q: Mapping, l: int) -> float:
    """Exact ``TV(p^l, q^l)`` by enumerating all ``l``-tuples."""
    keys = sorted(set(p) | set(q))
    if len(keys) ** l > MAX_CELLS:
        raise ValueError("cell space too large for exact mode")
    total = 0.0
    for t in itertools.product(keys, repeat=l):
        a = b = 1.0
        for s in t:
            a *= p.get(s, 0.0)
            b *= q.get(s, 0.0)
        total += abs(a - b)
    return total / 2


def _pair_collisions(t):
    n = 0
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            n += t[i] == t[j]
    return n


def collision_gap(dist: Mapping, cond: Mapping, l: int, trials: int, rng) -> dict:
    """Mean number of equal pairs among ``l`` draws under ``D`` and under ``E``.

    Returns Monte-Carlo means with standard errors and the exact expectations
    ``C(l, 2) * sum p(s)**2``.
    """
    def draw(d):
        docs = list(d)
        weights = [d[s] for s in docs]
        return lambda: tuple(rng.choices(docs, weights, k=l))

    out = {}
    for name, d in (("channel", dist), ("conditioned", cond)):
        sampler = draw(d)
        xs = [_pair_collisions(sampler()) for _ in range(trials)]
        mean = statistics.fmean(xs)
        se = statistics.pstdev(xs) / math.sqrt(trials) if trials > 1 else float("nan")
        out[name] = {"mean": mean, "stderr": se,
                     "exact": math.comb(l, 2) * sum(p * p for p in d.values())}
    out["gap"] = out["conditioned"]["mean"] - out["channel"]["mean"]
    out["gap_exact"] = out["conditioned"]["exact"] - out["channel"]["exact"]
    return out


def public_hash_bias_experiment(h: int, w: int, l: int, trials: int, rng, *, n_seeds: int = 100,
                                S: int = 1 << 16, exact_l_max: int = 3) -> dict:
    """Measure the bias of random multiply-shift hashes on a min-entropy-``h`` memoryless channel.

    The channel is uniform on ``2**h`` random documents of ``[0, S)``.  For
    each of ``n_seeds`` published hash seeds the exact bias is computed; for
    the first seed the ``l``-fold distance is computed exactly (when small
    enough) and the collision statistic is compared by Monte Carlo.
    """
    H = 1 << h
    support = rng.sample(range(S), H)
    dist = {s: 1.0 / H for s in support}
    tvs, maxdevs = [], []
    first = None
    for _ in range(n_seeds):
        f = multiply_shift_hash(rng.getrandbits(64), w)
        b = hash_bias(dist, f, w)
        tvs.append(b["tv"])
        maxdevs.append(b["max_dev"])
        if first is None and min(bucket_masses(dist, f, w)) > 0:
            first = f
    claimed = 2.0 ** ((w - h) / 2)
    median_tv = statistics.median(tvs)
    report = {
        "h": h, "w": w, "l": l, "S": S, "n_seeds": n_seeds,
        "claimed_bias": claimed,
        "median_bias": median_tv,
        "median_max_dev": statistics.median(maxdevs),
        "bias_ratio": claimed / median_tv if median_tv else math.inf,
        "biases": tvs,
    }
    if first is not None:
        cond = conditioned_distribution(dist, first, w)
        fold = {"single_symbol_bias": hash_bias(dist, first, w)["tv"],
                "sqrt_l_times_bias": math.sqrt(l) * hash_bias(dist, first, w)["tv"]}
        if l <= exact_l_max and H ** l <= MAX_CELLS:
            fold["tv_exact"] = product_tv(dist, cond, l)
        if l >= 2 and trials > 0:
            fold["collision"] = collision_gap(dist, cond, l, trials, rng)
        report["l_fold"] = fold
    return report

