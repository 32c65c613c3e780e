import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from paramrls_lab.bitcore import (
    BitString,
    RngStream,
    flip_k_distinct,
    flip_positions,
    hamming_distance,
    sample_k_subset,
)
from paramrls_lab.errors import InvalidArgumentError

bit_text = st.text(alphabet="01", min_size=1, max_size=48)
seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_bitstring_from_text_and_back():
    x = BitString("0110")
    assert x.n == 4
    assert str(x) == "0110"
    assert x.count_ones() == 2
    assert list(x.bits) == [0, 1, 1, 0]


@pytest.mark.parametrize("bad", ["", "012", "ab"])
def test_bitstring_rejects_bad_text(bad):
    with pytest.raises(InvalidArgumentError):
        BitString(bad)


def test_bitstring_rejects_non_binary_values():
    with pytest.raises(InvalidArgumentError):
        BitString([0, 2, 1])


def test_bitstring_is_read_only():
    x = BitString("000")
    with pytest.raises(ValueError):
        x.bits[0] = 1


def test_hex_round_trip_msb_first():
    x = BitString.from_hex("0xA", 4)
    assert str(x) == "1010"
    assert x.to_hex() == "a"
    with pytest.raises(InvalidArgumentError):
        BitString.from_hex("1f", 4)


def test_xor_and_equality():
    assert BitString("1100") ^ BitString("1010") == BitString("0110")
    assert BitString("01") != BitString("10")
    assert hash(BitString("0101")) == hash(BitString([0, 1, 0, 1]))
    with pytest.raises(InvalidArgumentError):
        BitString("01") ^ BitString("011")


def test_bitstring_pickles():
    x = BitString("10011")
    assert pickle.loads(pickle.dumps(x)) == x


@pytest.mark.parametrize("x, y, expected", [("000", "000", 0), ("101", "010", 3), ("1100", "1010", 2)])
def test_hamming_distance_examples(x, y, expected):
    assert hamming_distance(BitString(x), BitString(y)) == expected


@pytest.mark.parametrize("x, expected", [("000", "111"), ("10", "01")])
def test_flipping_every_bit_complements(rng, x, expected):
    assert flip_k_distinct(BitString(x), len(x), rng) == BitString(expected)


@pytest.mark.parametrize("k", [0, 4])
def test_flip_rejects_k_out_of_range(rng, k):
    with pytest.raises(InvalidArgumentError):
        flip_k_distinct(BitString("000"), k, rng)


@settings(max_examples=200, deadline=None)
@given(text=bit_text, seed=seeds, data=st.data())
def test_flip_k_distinct_moves_exactly_k(text, seed, data):
    x = BitString(text)
    k = data.draw(st.integers(min_value=1, max_value=x.n))
    y = flip_k_distinct(x, k, RngStream(seed))
    assert hamming_distance(x, y) == k
    assert str(x) == text


@settings(max_examples=100, deadline=None)
@given(text=bit_text, data=st.data())
def test_flip_positions_is_an_involution(text, data):
    x = BitString(text)
    positions = data.draw(st.lists(st.integers(0, x.n - 1), unique=True, max_size=x.n))
    assert flip_positions(flip_positions(x, positions), positions) == x


def test_flip_positions_rejects_duplicates():
    with pytest.raises(InvalidArgumentError):
        flip_positions(BitString("0000"), [1, 1])


@settings(max_examples=100, deadline=None)
@given(seed=seeds, n=st.integers(1, 200), data=st.data())
def test_sample_k_subset_is_distinct_and_in_range(seed, n, data):
    k = data.draw(st.integers(1, n))
    chosen = sample_k_subset(n, k, RngStream(seed))
    assert len(chosen) == k
    assert len(set(chosen)) == k
    assert all(0 <= c < n for c in chosen)


@pytest.mark.statistical
def test_single_flip_position_is_uniform():
    stream = RngStream(7)
    x = BitString("0000")
    counts = np.zeros(4, dtype=int)
    draws = 40_000
    for _ in range(draws):
        y = flip_k_distinct(x, 1, stream)
        counts[int(np.flatnonzero(y.bits)[0])] += 1
    assert np.all(np.abs(counts / draws - 0.25) < 0.01)
    assert stats.chisquare(counts).pvalue > 0.001


@pytest.mark.statistical
def test_pair_subsets_are_uniform():
    stream = RngStream(11)
    counts = {}
    for _ in range(30_000):
        key = tuple(sorted(sample_k_subset(5, 2, stream)))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 10
    assert stats.chisquare(list(counts.values())).pvalue > 0.001


def test_streams_are_reproducible_and_distinct():
    a = RngStream(42, 3).generator.integers(0, 2**32, size=8)
    b = RngStream(42, 3).generator.integers(0, 2**32, size=8)
    c = RngStream(42, 4).generator.integers(0, 2**32, size=8)
    d = RngStream(42, 3).child(1).generator.integers(0, 2**32, size=8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_stream_rejects_out_of_range_seed():
    with pytest.raises(InvalidArgumentError):
        RngStream(-1)
    with pytest.raises(InvalidArgumentError):
        RngStream(0, 2**64)
