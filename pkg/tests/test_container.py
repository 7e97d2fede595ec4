import json
import random
import zlib

import pytest
from hypothesis import given, strategies as st

from pobshare.access import to_mask
from pobshare.container import (
    RedundantPolicyWarning,
    decode_bundle,
    dump_policy,
    encode_bundle,
    pack_7bit,
    packed_length,
    parse_policy,
    unpack_7bit,
)
from pobshare.dealer import deal
from pobshare.errors import (
    BadMagicError,
    CrcMismatchError,
    FormatError,
    PaddingBitsError,
    PobRangeError,
    PolicyError,
    UnsupportedVersionError,
)

EXAMPLE1 = json.dumps(
    {"participants": ["P1", "P2", "P3", "P4"], "minimal_authorized": [["P1", "P2"], ["P3", "P4"]]}
)


def test_pack_examples():
    assert pack_7bit([113]) == b"\xe2"
    assert pack_7bit([0] * 8) == bytes(7)
    assert len(pack_7bit(list(range(8)))) == 7
    with pytest.raises(PobRangeError):
        pack_7bit([128])


def test_pack_bit_layout_against_string_oracle():
    rng = random.Random(0)
    for count in range(0, 30):
        values = [rng.randrange(128) for _ in range(count)]
        bits = "".join(format(v, "07b") for v in values)
        bits += "0" * (-len(bits) % 8)
        expected = bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8))
        assert pack_7bit(values) == expected
        assert len(expected) == packed_length(count)


def test_unpack_examples():
    assert unpack_7bit(b"\xe2", 1) == [113]
    with pytest.raises(PaddingBitsError):
        unpack_7bit(b"\xe3", 1)
    with pytest.raises(FormatError):
        unpack_7bit(b"\xe2\x00", 1)


def test_pack_roundtrip_many():
    rng = random.Random(1)
    for _ in range(10_000):
        values = [rng.randrange(128) for _ in range(rng.randrange(0, 20))]
        assert unpack_7bit(pack_7bit(values), len(values)) == values


@given(st.lists(st.integers(0, 127), max_size=100))
def test_pack_roundtrip_property(values):
    assert unpack_7bit(pack_7bit(values), len(values)) == values


@pytest.fixture
def bundles(example1):
    return deal(b"hello world", example1, random.Random(12))[1]


def test_bundle_roundtrip(bundles):
    for b in bundles:
        data = encode_bundle(b)
        assert decode_bundle(data) == b
        assert encode_bundle(decode_bundle(data)) == data


def test_bundle_layout(bundles):
    data = encode_bundle(bundles[0])
    assert data[:4] == b"POBS" and data[4] == 1
    assert data[5:21] == bundles[0].scheme_id
    assert int.from_bytes(data[21:25], "big") == 11
    assert int.from_bytes(data[25:27], "big") == 4
    assert data[27] == 0
    assert data[28:30] == b"\x00\x02" and data[30:32] == b"P1"
    assert data[32:34] == b"\x00\x02"
    record = 2 + packed_length(11)
    assert len(data) == 34 + 2 * record + 4
    assert int.from_bytes(data[34:36], "big") == 3
    assert int.from_bytes(data[-4:], "big") == zlib.crc32(data[:-4])


def _recrc(body):
    return body + zlib.crc32(body).to_bytes(4, "big")


def test_decode_errors_are_distinct(bundles):
    data = encode_bundle(bundles[0])
    with pytest.raises(UnsupportedVersionError):
        decode_bundle(_recrc(data[:4] + b"\x02" + data[5:-4]))
    with pytest.raises(BadMagicError):
        decode_bundle(_recrc(b"XOBS" + data[4:-4]))
    with pytest.raises(CrcMismatchError):
        decode_bundle(data[:-1])
    with pytest.raises(CrcMismatchError):
        decode_bundle(data[:10])
    with pytest.raises(FormatError):
        decode_bundle(_recrc(data[:-4] + b"\x00"))


def test_decode_rejects_set_pad_bits():
    from pobshare.dealer import ParticipantBundle
    from pobshare.threshold import ShareVector

    b = ParticipantBundle(bytes(16), "X", 3, 1, 0, (ShareVector(1, b"\x05"),))
    data = bytearray(encode_bundle(b))
    data[-5] |= 1  # last payload byte, pad bit
    with pytest.raises(PaddingBitsError):
        decode_bundle(_recrc(bytes(data[:-4])))


def test_single_byte_corruption_always_detected(bundles):
    data = encode_bundle(bundles[2])
    rng = random.Random(5)
    for _ in range(1000):
        pos = rng.randrange(len(data))
        bad = bytearray(data)
        bad[pos] ^= rng.randrange(1, 256)
        with pytest.raises((CrcMismatchError, PaddingBitsError)):
            decode_bundle(bytes(bad))


def test_unicode_participant_name(example1):
    from pobshare.access import AccessStructure

    a = AccessStructure(("Zoë", "李"), (3,))
    for b in deal(b"\x00", a, random.Random(1))[1]:
        assert decode_bundle(encode_bundle(b)).participant == b.participant


def test_parse_policy_example1():
    a = parse_policy(EXAMPLE1)
    assert a.roster == ("P1", "P2", "P3", "P4")
    assert a.minimal == (to_mask([0, 1]), to_mask([2, 3]))
    assert parse_policy(dump_policy(a)) == a


def test_parse_policy_minimizes_with_warning():
    text = json.dumps({"participants": ["1", "2", "3"], "minimal_authorized": [["1", "2"], ["1", "2", "3"]]})
    with pytest.warns(RedundantPolicyWarning):
        a = parse_policy(text)
    assert a.minimal == (to_mask([0, 1]),)


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ({"participants": ["A"], "minimal_authorized": [["A", "Bob"]]}, "'Bob'"),
        ({"participants": ["A", "A"], "minimal_authorized": [["A"]]}, "duplicate"),
        ({"participants": ["A"], "minimal_authorized": [[]]}, "empty"),
        ({"participants": ["A"]}, "exactly"),
        ({"participants": ["A"], "minimal_authorized": []}, "no authorized"),
    ],
)
def test_parse_policy_errors(doc, fragment):
    with pytest.raises(PolicyError, match=fragment):
        parse_policy(json.dumps(doc))


def test_parse_policy_rejects_non_json():
    with pytest.raises(PolicyError):
        parse_policy("participants: [A]")
