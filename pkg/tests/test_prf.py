import hashlib
import hmac
import random
import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from bbstego.prf import (
    KeyedFunction,
    PrfInput,
    RandomFunctionOracle,
    StegoKey,
    as_symbol_function,
    prf_eval_w,
    prf_uniform64,
    random_function_oracle,
)

KEY = StegoKey(bytes(range(16)))


def test_golden_vector_matches_hmac_sha256():
    msg = struct.pack(">BQQ", 1, 7, 1234)
    want = int.from_bytes(hmac.digest(KEY.key, msg, hashlib.sha256)[:8], "big")
    assert prf_uniform64(KEY, PrfInput("stf", 7, 1234)) == want
    assert prf_eval_w(KEY, PrfInput("stf", 7, 1234), 5) == want & 31


def test_pinned_outputs():
    # frozen values: changing the construction would orphan stored stegotexts
    assert prf_uniform64(KEY, PrfInput("stl", 0, 0)) == 17522985851973519870
    assert [prf_eval_w(KEY, PrfInput("tree", 1, n), 8) for n in range(4)] == [62, 216, 149, 90]
    assert prf_uniform64(KEY, PrfInput("stf", 2**64 - 1, 2**64 - 1)) == 13173414351473984175


@given(st.sampled_from(["stf", "stl", "tree"]), st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
def test_input_encoding_round_trips(tag, ctr, doc):
    x = PrfInput(tag, ctr, doc)
    raw = x.encode()
    assert len(raw) == 17
    assert PrfInput.decode(raw) == x


def test_domain_tags_separate_outputs():
    outs = {prf_uniform64(KEY, PrfInput(t, 3, 9)) for t in ("stf", "stl", "tree")}
    assert len(outs) == 3


@pytest.mark.parametrize("w", [0, 33, -1])
def test_w_out_of_range_rejected(w):
    with pytest.raises(ValueError):
        prf_eval_w(KEY, PrfInput("stf", 0, 0), w)


def test_bad_inputs_rejected():
    with pytest.raises(ValueError):
        PrfInput("nope", 0, 0)
    with pytest.raises((ValueError, OverflowError)):
        PrfInput("stf", 2**64, 0)
    with pytest.raises(ValueError):
        StegoKey(b"")


def test_key_repr_hides_material(monkeypatch):
    assert KEY.key.hex() not in repr(KEY)
    monkeypatch.setenv("STEGO_KEY_HEX", KEY.hex())
    assert StegoKey.from_env() == KEY
    assert StegoKey.from_hex(KEY.hex()).kappa == 128


def test_sequential_counters_uniform_w4():
    f = KeyedFunction(KEY, "stf", 4)
    counts = np.bincount([f(c, 0) for c in range(200_000)], minlength=16)
    assert stats.chisquare(counts).pvalue > 0.01


def test_uniform64_mean_and_serial_correlation():
    xs = np.array([prf_uniform64(KEY, PrfInput("tree", 2, n)) for n in range(100_000)], dtype=np.float64) / 2.0**64
    assert abs(xs.mean() - 0.5) < 0.003
    r = np.corrcoef(xs[:-1], xs[1:])[0, 1]
    assert abs(r) < 3 / np.sqrt(len(xs))


def test_one_bit_key_change_collision_rate():
    other = StegoKey(bytes([KEY.key[0] ^ 1]) + KEY.key[1:])
    w, n = 2, 40_000
    same = sum(prf_eval_w(KEY, PrfInput("stl", 0, d), w) == prf_eval_w(other, PrfInput("stl", 0, d), w)
               for d in range(n))
    assert stats.binomtest(same, n, 2**-w).pvalue > 0.001


def test_random_function_oracle_memoizes():
    g = random_function_oracle(3, random.Random(1))
    a = [g(0, d) for d in range(50)]
    assert a == [g(0, d) for d in range(50)]
    assert len(g) == 50
    g(1, 0)
    assert len(g) == 51


def test_random_function_oracle_uniform():
    g = RandomFunctionOracle(3, random.Random(2))
    counts = np.bincount([g(0, d) for d in range(80_000)], minlength=8)
    assert stats.chisquare(counts).pvalue > 0.01


def test_as_symbol_function_checks_width():
    g = RandomFunctionOracle(2, random.Random(0))
    assert as_symbol_function(g, "stf", 2) is g
    with pytest.raises(ValueError):
        as_symbol_function(g, "stf", 3)
    f = as_symbol_function(KEY.key, "stl", 4)
    assert f(0, 5) == prf_eval_w(KEY, PrfInput("stl", 0, 5), 4)
