from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from bbstego.channel import uniform_channel, make_memoryless_empirical
from bbstego.harness.exact import (
    FAIL,
    MAX_CELLS,
    collision_probability,
    product_distribution,
    stf_output_distribution,
    stf_symbol_chain,
    stl_output_distribution,
    stl_output_distribution_by_function,
    total_variation,
)
from bbstego.prf import RandomFunctionOracle
from bbstego.stf import stf_encode_symbols
from bbstego.stl import stl_encode_symbols


def test_stl_lazy_dp_equals_enumeration_over_functions():
    dist = {s: Fraction(1, 4) for s in range(4)}
    for m in ([0, 1], [1, 1]):
        lazy = stl_output_distribution(dist, 1, 3, m)
        full = stl_output_distribution_by_function(dist, 1, 3, m)
        assert lazy.dist == full.dist
        assert lazy.failure == full.failure


def test_stl_lazy_dp_nonuniform_channel():
    dist = {0: Fraction(1, 2), 3: Fraction(1, 4), 5: Fraction(1, 4)}
    lazy = stl_output_distribution(dist, 1, 2, [1, 0])
    full = stl_output_distribution_by_function(dist, 1, 2, [1, 0])
    assert lazy.dist == full.dist and sum(lazy.dist.values()) == 1


def test_stf_distribution_equals_channel_nonuniform():
    dist = {0: 0.5, 1: 0.25, 2: 0.125, 3: 0.125}
    res = stf_output_distribution(dist, 1, [0, 1], tol=1e-14)
    chan = product_distribution(dist, 2)
    assert sum(abs(res.dist[t] - chan[t]) for t in chan) <= 1e-9


def test_stf_symbol_error_below_bound():
    for H, w in [(4, 2), (8, 1), (8, 2)]:
        dist = {s: 1.0 / H for s in range(H)}
        _, err, left = stf_symbol_chain(dist, w)
        assert left < 1e-12
        assert err <= 2.0 ** w / H


def test_stf_monte_carlo_matches_exact(rng):
    H, w = 4, 1
    dist = {s: 1.0 / H for s in range(H)}
    _, err, _ = stf_symbol_chain(dist, w)
    ch = uniform_channel(range(H))
    n = 40_000
    wrong = 0
    for _ in range(n):
        g = RandomFunctionOracle(w, rng)
        (s,) = stf_encode_symbols(g, [1], ch, rng, ctr=0)
        wrong += g(1, s) != 1
    assert abs(wrong / n - err) <= 4 * (err * (1 - err) / n) ** 0.5


def test_stl_monte_carlo_matches_exact(rng):
    H, w, k = 4, 1, 2
    dist = {s: Fraction(1, H) for s in range(H)}
    exact = stl_output_distribution(dist, w, k, [1, 0]).dist
    ch = uniform_channel(range(H))
    n = 30_000
    c = Counter()
    for _ in range(n):
        g = RandomFunctionOracle(w, rng)
        c[tuple(stl_encode_symbols(g, k, [1, 0], ch, rng))] += 1
    cells = sorted(exact)
    assert stats.chisquare([c[t] for t in cells], [n * float(exact[t]) for t in cells]).pvalue > 0.001


def _dists():
    return st.lists(st.integers(1, 20), min_size=1, max_size=6).map(
        lambda ws: {i: Fraction(v, sum(ws)) for i, v in enumerate(ws)})


@given(_dists(), _dists(), _dists())
def test_tv_metric_properties(p, q, r):
    assert total_variation(p, p) == 0
    assert total_variation(p, q) == total_variation(q, p)
    assert total_variation(p, r) <= total_variation(p, q) + total_variation(q, r)
    assert 0 <= total_variation(p, q) <= 1


def test_tv_point_masses():
    assert total_variation({0: 1.0}, {1: 1.0}) == 1.0


def test_collision_probability_of_channel():
    dist = {s: Fraction(1, 8) for s in range(8)}
    assert collision_probability(product_distribution(dist, 2)) == Fraction(1, 8)
    assert collision_probability({FAIL: Fraction(1, 2), (1, 1): Fraction(1, 2)}) == Fraction(1, 2)


def test_cell_cap():
    dist = {s: 1 / 1001 for s in range(1001)}
    with pytest.raises(ValueError):
        product_distribution(dist, 2)
    assert MAX_CELLS == 10**6


def test_memoryless_channel_distribution_feeds_oracle():
    ch = make_memoryless_empirical({0: 1, 1: 3})
    res = stf_output_distribution(ch.distribution_at(1), 1, [1], tol=1e-14)
    assert res.dist[(1,)] == pytest.approx(0.75, abs=1e-12)
