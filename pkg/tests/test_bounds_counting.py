import math
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bbstego.channel import CountingChannel, DrawSequence, uniform_channel
from bbstego.harness.bounds import (
    BoundParams,
    lemma_tail_bound,
    lower_bound_queries,
    lower_bound_queries_bounded,
    se2_fail_bound,
    stf_stateless_unreliability_bound,
    stl_insecurity_bound,
    stl_unreliability_bound,
    support_ratio,
)
from bbstego.harness.counting import count_low_weight, enumerate_low_weight, messages_with_cheap_encoding, weight
from bbstego.prf import RandomFunctionOracle
from bbstego.stf import stf_encode_symbols


def _insecurity_exact(h, w, l, k):
    # hand evaluation in rationals, independent of the float implementation
    R = 2**w
    return (Fraction(l * (l + 1) * R * R - l * (l + 3) * R + 2 * l, 2**h)
            + 2 * l * Fraction(R - 1, R) ** k)


def test_lower_bound_queries_values():
    assert lower_bound_queries(3, 0, 0, 2) == pytest.approx(8 / (2 * math.e))
    assert lower_bound_queries(3, 0, 0, 2) == pytest.approx(1.47152, abs=5e-6)
    assert lower_bound_queries(1, 0.25, 0, 2) == pytest.approx(0.18394, abs=5e-6)
    assert lower_bound_queries(4, 0.5, 0, 2) == 0
    assert lower_bound_queries(4, 0.9, 0, 2) == 0


def test_bounded_lower_bound():
    assert lower_bound_queries_bounded(3, 0, 0, 4, 0) == pytest.approx(1.47152, abs=5e-6)
    assert lower_bound_queries_bounded(3, 0.1, 0.01, 4, 0) == pytest.approx(lower_bound_queries(3, 0.1, 0.01, 4))
    assert lower_bound_queries_bounded(3, 0, 0, 4, 1.0) == 0
    with pytest.raises(ValueError):
        lower_bound_queries_bounded(3, 0, 0, 4, -1)


def test_stl_insecurity_hand_values():
    assert stl_insecurity_bound(8, 1, 2, 16) == pytest.approx(float(_insecurity_exact(8, 1, 2, 16)), rel=1e-12)
    assert stl_insecurity_bound(8, 1, 2, 16) == pytest.approx(0.0313110, abs=5e-8)
    assert stl_insecurity_bound(3, 1, 2, 4) == pytest.approx(1.25)
    assert stl_insecurity_bound(8, 1, 0, 16) == 0


@given(st.integers(1, 20), st.integers(1, 6), st.integers(1, 10), st.integers(1, 200))
def test_stl_insecurity_matches_rational(h, w, l, k):
    assert stl_insecurity_bound(h, w, l, k) == pytest.approx(float(_insecurity_exact(h, w, l, k)), rel=1e-9)


def test_stl_insecurity_large_k_limit():
    h, w, l = 10, 2, 3
    R = 4
    assert stl_insecurity_bound(h, w, l, 10_000) == pytest.approx(
        2.0**-h * (l * (l + 1) * R * R - l * (l + 3) * R + 2 * l))


def test_se2_fail_bound_value():
    assert se2_fail_bound(3, 1, 2, 3) == pytest.approx(0.75)


def test_stl_unreliability():
    v = stl_unreliability_bound(8, 1, 4, 64)
    assert v == pytest.approx(4 * (2 * math.exp(-32) + math.exp(-16)), rel=1e-12)
    assert 4.4e-7 < v < 4.6e-7
    assert stl_unreliability_bound(8, 1, 0, 64) == 0
    for h in range(4, 16):
        ks = [stl_unreliability_bound(h, 2, 3, k) for k in range(1, 100)]
        assert all(a >= b for a, b in zip(ks, ks[1:])) and ks[0] > ks[-1]
    hs = [stl_unreliability_bound(h, 2, 3, 40) for h in range(4, 20)]
    assert all(a >= b for a, b in zip(hs, hs[1:])) and hs[0] > hs[-1]


def test_stateless_bound_value():
    assert stf_stateless_unreliability_bound(10, 1, 8) == pytest.approx(0.125)


def test_bound_params():
    p = BoundParams(S=1024, H=256, w=2)
    assert p.h == 8 and p.R == pytest.approx(4 / 3)
    assert support_ratio(1024, 256) == pytest.approx(4 / 3)
    with pytest.raises(ValueError):
        BoundParams(S=4, H=8)
    with pytest.raises(ValueError):
        support_ratio(8, 8)


def test_lemma_tail_examples():
    t = lemma_tail_bound(4, 2, 2)
    assert t.exact == Fraction(6, 16)
    assert t.upper == pytest.approx((4 * math.e / 8) ** 2)
    assert t.upper == pytest.approx(1.847, abs=5e-4)
    for l in range(1, 5):
        for w in range(1, 4):
            assert lemma_tail_bound(l, l, w).exact == Fraction(1, 2 ** (l * w))
    with pytest.raises(ValueError):
        lemma_tail_bound(2, 3, 1)


def test_lemma_tail_grid():
    for N in range(1, 40):
        for l in range(1, N + 1):
            for w in range(1, 6):
                t = lemma_tail_bound(N, l, w)
                assert t.exact < t.upper


def test_counting_examples():
    assert count_low_weight(2, 4) == 6 == enumerate_low_weight(2, 4)
    assert count_low_weight(1, 5) == 5 == enumerate_low_weight(1, 5)
    assert enumerate_low_weight(3, 10) == 120
    for l in range(1, 4):
        for N in range(l, 13):
            assert enumerate_low_weight(l, N) == comb(N, l)
    with pytest.raises(ValueError):
        enumerate_low_weight(2, 31)


def test_weight_examples():
    ds = DrawSequence(streams={1: [4, 9, 5, 5], 2: [1, 6, 6]})
    assert weight([4, 1], ds) == 2
    assert weight([5, 6], ds) == 5
    with pytest.raises(ValueError):
        weight([8, 1], ds)


def test_weight_at_most_queries_made(rng):
    for _ in range(50):
        ds = DrawSequence(uniform_channel(range(16)), rng)
        counting = CountingChannel(ds)
        g = RandomFunctionOracle(2, rng)
        out = stf_encode_symbols(g, [rng.getrandbits(2) for _ in range(5)], counting, rng)
        assert 5 <= weight(out, ds) <= counting.calls


def test_cheap_encodings_exhaustive():
    rng = random.Random(0)
    w, l, S = 2, 2, 8
    for _ in range(20):
        table = [rng.getrandbits(w) for _ in range(S)]
        ds = DrawSequence(uniform_channel(range(S)), rng)
        for N in range(l, 12):
            found = messages_with_cheap_encoding(lambda t: tuple(table[s] for s in t), ds, l, N)
            assert len(found) <= comb(N, l)
            assert len(found) / 2 ** (l * w) <= lemma_tail_bound(N, l, w).exact
