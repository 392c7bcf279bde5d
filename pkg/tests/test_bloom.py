import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bbstego.bloom import BloomFilter, stateless_bloom_bits_per_entry


@given(st.sets(st.integers(0, 2**40), max_size=200), st.binary(max_size=16))
def test_no_false_negatives(items, salt):
    bf = BloomFilter.for_capacity(max(1, len(items)), 8, salt)
    for x in items:
        bf.add(x)
    assert all(x in bf for x in items)
    assert bf.inserted == len(items)


def test_false_positive_rate_near_estimate():
    rng = random.Random(0)
    bf = BloomFilter.for_capacity(2000, 8.66, b"k")
    for x in rng.sample(range(10**9), 2000):
        bf.add(x)
    probes = [10**9 + i for i in range(50_000)]
    fp = sum(x in bf for x in probes) / len(probes)
    est = bf.false_positive_estimate()
    assert abs(fp - est) <= 4 * math.sqrt(est / len(probes)) + 1e-3


def test_sizing():
    bpe = stateless_bloom_bits_per_entry(10, 1, 8)
    assert bpe == pytest.approx(6 / math.log(2))
    bf = BloomFilter.for_capacity(100, bpe)
    assert bf.m == math.ceil(100 * bpe) and bf.j == round(bpe * math.log(2))
    with pytest.raises(ValueError):
        BloomFilter(0, 1)


def test_salt_changes_positions():
    a, b = BloomFilter(1024, 3, b"a"), BloomFilter(1024, 3, b"b")
    a.add(5)
    b.add(5)
    assert a.bits != b.bits
