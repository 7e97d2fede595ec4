from itertools import combinations
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pobshare.errors import PobRangeError
from pobshare.pob import (
    POB_9_4,
    PobNumber,
    PobParams,
    as_plain_binary,
    binomial,
    bitstring,
    enumerate_all,
    enumerate_bits,
    pob_bits_from_values,
    pob_values,
    parity,
    pob_from_value,
    pob_value,
)


def colex_rank_oracle(n, r):
    """Map bit pattern -> index in colex order of r-subsets, from itertools only."""
    subsets = sorted(combinations(range(n), r), key=lambda c: tuple(reversed(c)))
    return {sum(1 << j for j in c): i for i, c in enumerate(subsets)}


@pytest.mark.parametrize("j,k,expected", [(0, 1, 0), (8, 4, 70), (0, 0, 1), (17, 0, 1), (5, 9, 0)])
def test_binomial_examples(j, k, expected):
    assert binomial(j, k) == expected


def test_binomial_matches_factorials_and_pascal():
    for j in range(65):
        for k in range(j + 1):
            assert binomial(j, k) == factorial(j) // (factorial(k) * factorial(j - k))
            if j and k:
                assert binomial(j, k) == binomial(j - 1, k - 1) + binomial(j - 1, k)
    assert binomial(64, 32) < 2**64


def test_binomial_rejects_beyond_table():
    with pytest.raises(PobRangeError):
        binomial(65, 3)


@pytest.mark.parametrize(
    "text,value",
    [("001110100", 33), ("000001111", 0), ("010100101", 46), ("110010100", 113), ("101100010", 101), ("111100000", 125)],
)
def test_pob_value_examples(text, value):
    assert pob_value(PobNumber.parse(text)) == value


@pytest.mark.parametrize("value,text", [(33, "001110100"), (125, "111100000"), (113, "110010100")])
def test_pob_from_value_examples(value, text):
    assert bitstring(pob_from_value(POB_9_4, value).bits, 9) == text


def test_text_form_has_p_suffix():
    x = PobNumber.parse("001110100p")
    assert str(x) == "001110100p"
    assert x.value == 33


@pytest.mark.parametrize("text,value", [("001110100", 116), ("000000000", 0), ("111100000", 480)])
def test_as_plain_binary(text, value):
    assert as_plain_binary(text) == value


def test_parity():
    assert parity(0b10110110) == "odd"
    assert parity(0) == "even"
    assert all(parity(x.bits) == "even" for x in enumerate_all(POB_9_4))


def test_enumerate_small_cases():
    assert [x.bits for x in enumerate_all(PobParams(1, 1))] == [1]
    four_two = enumerate_all(PobParams(4, 2))
    # hand evaluation of the value formula
    assert [bitstring(x.bits, 4) for x in four_two] == ["0011", "0101", "0110", "1001", "1010", "1100"]
    assert [pob_value(x) for x in four_two] == list(range(6))
    assert len(enumerate_all(POB_9_4)) == 126


def test_enumerate_guard():
    with pytest.raises(PobRangeError):
        enumerate_all(PobParams(40, 20))
    assert len(enumerate_all(PobParams(64, 2))) == 2016


def test_value_matches_colex_oracle_for_all_small_params():
    for n in range(1, 13):
        for r in range(1, n + 1):
            oracle = colex_rank_oracle(n, r)
            for bits, rank in oracle.items():
                x = PobNumber(PobParams(n, r), bits)
                assert pob_value(x) == rank
                assert pob_from_value(x.params, rank) == x


def test_extremes_are_zero_and_max():
    for n in range(1, 20):
        for r in range(1, n + 1):
            p = PobParams(n, r)
            assert pob_value(PobNumber(p, (1 << r) - 1)) == 0
            assert pob_value(PobNumber(p, ((1 << r) - 1) << (n - r))) == comb(n, r) - 1


def test_invalid_numbers_rejected():
    with pytest.raises(PobRangeError):
        PobNumber(POB_9_4, 0b111)
    with pytest.raises(PobRangeError):
        pob_from_value(POB_9_4, 126)
    with pytest.raises(PobRangeError):
        PobParams(3, 0)


@given(st.integers(1, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))), st.data())
def test_roundtrip_large_params(nr, data):
    n, r = nr
    p = PobParams(n, r)
    v = data.draw(st.integers(0, p.size - 1))
    x = pob_from_value(p, v)
    assert bin(x.bits).count("1") == r
    assert pob_value(x) == v


def test_batch_functions_agree_with_scalar():
    rng = np.random.default_rng(0)
    for n, r in [(9, 4), (1, 1), (5, 5), (20, 7), (64, 2), (64, 63), (64, 32), (40, 1)]:
        p = PobParams(n, r)
        values = rng.integers(0, p.size, size=200, dtype=np.uint64) if p.size > 1 else np.zeros(3, np.uint64)
        bits = pob_bits_from_values(p, values)
        assert [int(b) for b in bits] == [pob_from_value(p, int(v)).bits for v in values]
        assert np.array_equal(pob_values(p, bits), values)


def test_enumerate_bits_matches_enumerate_all():
    for n, r in [(9, 4), (6, 6), (7, 1), (10, 8)]:
        p = PobParams(n, r)
        assert sorted(int(b) for b in enumerate_bits(p)) == sorted(x.bits for x in enumerate_all(p))


def test_batch_unrank_range_check():
    with pytest.raises(PobRangeError):
        pob_bits_from_values(POB_9_4, np.array([126], dtype=np.uint64))
