import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bbstego.bits import bits_to_bytes, bits_to_symbols, bytes_to_bits, num_symbols, symbols_to_bits
from bbstego.codes import (
    SymbolBlock,
    majority_block_error,
    rep_decode,
    rep_encode,
    repetition3_block_error,
    stf_capacity_bound,
    stf_symbol_error,
)


@given(st.lists(st.integers(0, 1), max_size=80), st.integers(1, 9))
def test_bits_symbols_round_trip_with_padding(bits, w):
    syms = bits_to_symbols(bits, w)
    assert len(syms) == num_symbols(len(bits), w)
    back = symbols_to_bits(syms, w)
    assert back[:len(bits)] == bits and set(back[len(bits):]) <= {0}


def test_msb_first():
    assert bits_to_symbols([1, 0, 0, 1, 1], 2) == [2, 1, 2]
    assert bytes_to_bits(b"\x81") == [1, 0, 0, 0, 0, 0, 0, 1]


@given(st.binary(max_size=40))
def test_bytes_round_trip(data):
    assert bits_to_bytes(bytes_to_bits(data)) == data


def test_bad_bits_rejected():
    with pytest.raises(ValueError):
        bits_to_symbols([2], 1)
    with pytest.raises(ValueError):
        symbols_to_bits([4], 2)


def test_rep_examples():
    b = SymbolBlock((5, 9), 4)
    assert rep_encode(b, 1) == b
    assert rep_encode(b, 3).symbols == (5, 5, 5, 9, 9, 9)
    assert rep_decode(SymbolBlock((1, 1, 2), 2), 3).symbols == (1,)
    assert rep_decode(SymbolBlock((3, 0, 2), 2), 3).symbols == (0,)
    with pytest.raises(ValueError):
        rep_encode(b, 2)
    with pytest.raises(ValueError):
        rep_decode(SymbolBlock((1, 1), 2), 3)
    with pytest.raises(ValueError):
        SymbolBlock((4,), 2)


@given(st.integers(1, 6), st.data())
def test_rep_round_trip(w, data):
    syms = data.draw(st.lists(st.integers(0, (1 << w) - 1), max_size=30))
    r = data.draw(st.sampled_from([1, 3, 5, 7]))
    blk = SymbolBlock(syms, w)
    assert rep_decode(rep_encode(blk, r), r) == blk


def _enumerated_block_error(p, w):
    # independent oracle: enumerate every error pattern of the three copies
    q = 1 << w
    total = 0.0
    for sent in range(q):
        for copies in itertools.product(range(q), repeat=3):
            pr = 1.0 / q
            for c in copies:
                pr *= (1 - p) if c == sent else p / (q - 1)
            if rep_decode(SymbolBlock(copies, w), 3).symbols[0] != sent:
                total += pr
    return total


@pytest.mark.parametrize("w", [1, 2, 3])
@pytest.mark.parametrize("p", [0.01, 0.1, 0.3])
def test_repetition3_block_error_exact(w, p):
    assert repetition3_block_error(p, w) == pytest.approx(_enumerated_block_error(p, w), rel=1e-12)


def test_majority_formula_binary():
    p = 0.07
    assert majority_block_error(p) == pytest.approx(p * p * (3 - 2 * p))
    assert repetition3_block_error(p, 1) == pytest.approx(p * p * (3 - 2 * p))


def test_capacity_examples():
    cb = stf_capacity_bound(2, 8)
    assert cb.lower_bound == pytest.approx(1.84375)
    assert cb.assumption_holds
    assert stf_capacity_bound(3, float("inf")).lower_bound == 3
    assert stf_capacity_bound(3, 2.0).assumption_holds is False
    assert stf_symbol_error(8, 2) == pytest.approx(3 / 256)


def test_exact_capacity_dominates_lower_bound():
    for w in range(1, 7):
        for h in range(w + 1, 24):
            cb = stf_capacity_bound(w, h)
            if cb.assumption_holds:
                assert cb.exact >= cb.lower_bound - 1e-12, (w, h)
            assert cb.exact <= w + 1e-12


def test_coded_beats_uncoded_on_stf_error_channel():
    from bbstego.harness.experiments import stf_error_channel_stats
    w, h, n = 2, 6, 3 * 60_000
    st_ = stf_error_channel_stats(w, h, n, seed=7)
    t, d = st_["targets"], st_["decoded"]
    # consecutive triples play the three copies of one uniformly chosen symbol;
    # each copy's error offset (decoded XOR target) is applied to that symbol
    offsets = (t ^ d).reshape(-1, 3)
    sent = np.random.default_rng(1).integers(0, 1 << w, len(offsets))
    p = float((t != d).mean())
    wrong = [rep_decode(SymbolBlock(tuple(int(v) ^ int(m) for v in row), w), 3).symbols[0] != m
             for row, m in zip(offsets, sent)]
    coded = sum(wrong) / len(wrong)
    assert coded < p
    pred = repetition3_block_error(p, w)
    sigma = (pred * (1 - pred) / len(wrong)) ** 0.5
    assert abs(coded - pred) <= 3 * sigma
