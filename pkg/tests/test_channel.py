import json
import math
import random
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from bbstego.channel import (
    CountingChannel,
    DrawSequence,
    IllegalHistory,
    MemorylessChannel,
    PseudorandomFlatChannel,
    TrueRandomFlatChannel,
    channel_from_spec,
    draw_oracle_next,
    load_channel,
    make_memoryless_empirical,
    min_entropy,
    sample_next,
    save_channel,
    uniform_channel,
)
from bbstego.flat import FlatChannelSeed


def test_uniform_memoryless_range(rng):
    ch = uniform_channel(range(4))
    assert {sample_next(ch, [1, 2], rng) for _ in range(200)} == {0, 1, 2, 3}


def test_full_support_flat_is_uniform(rng):
    ch = PseudorandomFlatChannel.generate(32, 32, rng)
    counts = np.bincount([ch.sample_at(5, rng) for _ in range(100_000)], minlength=32)
    assert stats.chisquare(counts).pvalue > 0.01


def test_true_random_flat_empirical_support(rng):
    ch = TrueRandomFlatChannel.generate(16, 4, 3, rng)
    seen = {ch.sample([], rng) for _ in range(10_000)}
    assert seen == set(ch.support(1))


def test_memoryless_min_entropy():
    assert make_memoryless_empirical({0: 1, 1: 1}).min_entropy_bits == 1.0
    ch = make_memoryless_empirical({0: 3, 1: 1})
    assert ch.min_entropy_bits == pytest.approx(-math.log2(0.75))
    assert min_entropy(ch) == pytest.approx(0.41504, abs=1e-5)
    with pytest.raises(ValueError):
        make_memoryless_empirical({0: 0})
    with pytest.raises(ValueError):
        make_memoryless_empirical({0: -1, 1: 2})


def test_memoryless_proportional_sampling(rng):
    ch = make_memoryless_empirical({3: 1, 5: 2, 9: 5})
    c = Counter(ch.sample([], rng) for _ in range(40_000))
    assert stats.chisquare([c[3], c[5], c[9]], [5000, 10000, 25000]).pvalue > 0.01


def test_memoryless_history_invariance(rng):
    ch = make_memoryless_empirical({0: 1, 1: 2, 2: 3, 3: 4})
    a = Counter(ch.sample([], rng) for _ in range(20_000))
    b = Counter(ch.sample([3, 3, 0, 1, 2], rng) for _ in range(20_000))
    table = [[a[s] for s in range(4)], [b[s] for s in range(4)]]
    assert stats.chi2_contingency(table).pvalue > 0.01


def test_flat_min_entropy(rng):
    assert min_entropy(PseudorandomFlatChannel.generate(1024, 256, rng)) == 8.0
    assert min_entropy(TrueRandomFlatChannel.generate(8, 1, 2, rng)) == 0.0


def test_min_entropy_unsupported():
    with pytest.raises(NotImplementedError):
        min_entropy(DrawSequence(streams={1: [1, 2]}))


def test_flat_support_sizes_exact(rng):
    ch = PseudorandomFlatChannel.generate(4096, 300, rng)
    for i in (1, 2, 3):
        supp = ch.support(i)
        assert len(supp) == 300 == len(set(supp))


def test_history_validation(rng):
    ch = PseudorandomFlatChannel(FlatChannelSeed(bytes(16)), 64, 16)
    good = [ch.sample_at(1, rng), ch.sample_at(2, rng)]
    sample_next(ch, good, rng)
    with pytest.raises(IllegalHistory):
        sample_next(ch, [64], rng)
    bad = next(s for s in range(64) if not ch.in_support(1, s))
    with pytest.raises(IllegalHistory):
        sample_next(ch, [bad], rng)


def test_draw_sequence_cursor_semantics(rng):
    ds = DrawSequence(streams={1: [7, 7, 3]})
    assert [draw_oracle_next(ds, 1) for _ in range(3)] == [7, 7, 3]
    with pytest.raises(IndexError):
        draw_oracle_next(ds, 1)
    lazy = DrawSequence(uniform_channel(range(10)), rng)
    a, b = draw_oracle_next(lazy, 1), draw_oracle_next(lazy, 1)
    assert (a, b) == (lazy.entry(1, 1), lazy.entry(1, 2))


def test_draw_sequence_backed_by_flat_stays_in_support(rng):
    ch = PseudorandomFlatChannel.generate(512, 40, rng)
    ds = DrawSequence(ch, rng)
    for i in range(1, 6):
        for _ in range(30):
            assert ch.in_support(i, draw_oracle_next(ds, i))


def test_draw_sequence_replay_is_deterministic(rng):
    from bbstego.prf import RandomFunctionOracle
    from bbstego.stl import stl_encode_symbols

    ds = DrawSequence(uniform_channel(range(50)), rng)
    g = RandomFunctionOracle(2, random.Random(1))
    first = stl_encode_symbols(g, 8, [1, 2, 3, 0], ds, random.Random(0))
    ds.rewind()
    assert stl_encode_symbols(g, 8, [1, 2, 3, 0], ds, random.Random(0)) == first


def test_counting_channel_records(rng):
    ch = CountingChannel(uniform_channel(range(5)))
    for _ in range(7):
        ch.sample([0, 0], rng)
    assert ch.calls == 7 and all(i == 3 for i, _ in ch.responses)
    ch.reset()
    assert ch.calls == 0


@pytest.mark.parametrize("make", [
    lambda r: PseudorandomFlatChannel.generate(256, 16, r),
    lambda r: TrueRandomFlatChannel.generate(32, 8, 4, r),
    lambda r: make_memoryless_empirical({1: 2, 4: 7}, 10),
])
def test_spec_round_trip(make, rng, tmp_path):
    ch = make(rng)
    path = tmp_path / "ch.json"
    save_channel(ch, path)
    back = load_channel(path)
    assert back.to_spec() == ch.to_spec()
    assert json.loads(path.read_text())["kind"] == ch.kind


def test_spec_true_random_from_seed():
    spec = {"kind": "flat-true-random", "S": 64, "H": 8, "rng_seed": 3, "max_i": 4}
    a, b = channel_from_spec(spec), channel_from_spec(spec)
    assert a.support(2) == b.support(2)
    with pytest.raises(ValueError):
        channel_from_spec({"kind": "nope"})


def test_memoryless_rejects_docs_outside_alphabet():
    with pytest.raises(ValueError):
        MemorylessChannel({9: 1}, 4)
