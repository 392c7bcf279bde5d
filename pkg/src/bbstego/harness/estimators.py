"""Monte-Carlo estimators with confidence intervals."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass

from scipy import stats

from .exact import MAX_CELLS, total_variation


@dataclass
class Estimate:
    value: float
    lo: float
    hi: float
    trials: int
    successes: int | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple:
    if trials <= 0:
        raise ValueError("need at least one trial")
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return ci.low, ci.high


def proportion(successes: int, trials: int, confidence: float = 0.95) -> Estimate:
    lo, hi = wilson_interval(successes, trials, confidence)
    return Estimate(successes / trials, lo, hi, trials, successes)


def three_sigma_ceiling(p: float, n: int) -> float:
    """``p + 3 sqrt(p (1 - p) / n)``: acceptance ceiling for a rate bounded by ``p``."""
    return p + 3.0 * math.sqrt(max(p * (1 - p), 0.0) / n)


def estimate_reliability(system, channel, trials: int, rng, l: int = 1, history=()) -> Estimate:
    """Fraction of uniformly random ``l``-symbol messages that round-trip exactly.

    ``system`` provides ``w`` and ``round_trip(bits, channel, rng, history)``
    returning the decoded bits.
    """
    if trials < 100:
        raise ValueError("reliability estimates need at least 100 trials")
    n_bits = l * system.w
    ok = 0
    for _ in range(trials):
        bits = [rng.getrandbits(1) for _ in range(n_bits)]
        if system.round_trip(bits, channel, rng, history) == bits:
            ok += 1
    return proportion(ok, trials)


@dataclass
class TVEstimate:
    value: float
    lo: float
    hi: float
    bias_bound: float
    trials: int
    cells: int
    exact: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def estimate_tv_distance(sampler_a: Callable | Mapping, sampler_b: Callable | Mapping,
                         trials: int | None = None, rng=None, confidence: float = 0.95) -> TVEstimate:
    """Total variation distance between two samplers.

    Exact mode: pass two ``{outcome: probability}`` mappings.  Monte-Carlo
    mode: pass callables ``rng -> outcome`` and ``trials``; the plug-in value
    overshoots the truth by at most ``bias_bound = sqrt(cells / (2 trials))``
    in expectation, and the interval adds a McDiarmid deviation term.
    """
    if isinstance(sampler_a, Mapping) and isinstance(sampler_b, Mapping):
        cells = len(set(sampler_a) | set(sampler_b))
        if cells > MAX_CELLS:
            raise ValueError("cell space too large for exact mode")
        v = float(total_variation(sampler_a, sampler_b))
        return TVEstimate(v, v, v, 0.0, 0, cells, exact=True)
    if trials is None or rng is None:
        raise ValueError("Monte-Carlo mode needs trials and rng")
    ca = Counter(sampler_a(rng) for _ in range(trials))
    cb = Counter(sampler_b(rng) for _ in range(trials))
    keys = set(ca) | set(cb)
    v = sum(abs(ca[x] - cb[x]) for x in keys) / (2 * trials)
    bias = math.sqrt(len(keys) / (2 * trials))
    dev = math.sqrt(math.log(2 / (1 - confidence)) / trials)
    return TVEstimate(v, max(0.0, v - bias - dev), min(1.0, v + dev), bias, trials, len(keys))


def chi_square_uniform(counts) -> float:
    """p-value of Pearson's test against equal cell probabilities."""
    return float(stats.chisquare(list(counts)).pvalue)


def chi_square_expected(observed, expected_probs) -> float:
    """p-value against given cell probabilities (rescaled to the observed total)."""
    n = sum(observed)
    tot = sum(expected_probs)
    exp = [n * p / tot for p in expected_probs]
    return float(stats.chisquare(list(observed), exp).pvalue)
