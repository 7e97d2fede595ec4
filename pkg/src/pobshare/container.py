"""On-disk bundle format, 7-bit share packing and policy documents.

Bundle file layout (all integers big-endian)::

    magic        4   b"POBS"
    version      1   1
    scheme id    16
    secret len   4
    m            2   primitive share count
    padding      1   how many of the m primitives are padding
    name len     2   then the UTF-8 participant name
    records      2   then per record: index (2) + packed payload
    crc32        4   CRC-32 of every preceding byte

Each payload holds ``secret len`` share values packed as 7-bit fields,
most significant bit first, final byte zero-padded.
"""

from __future__ import annotations

import json
import struct
import warnings
import zlib
from typing import Sequence

from .access import AccessStructure, canonical, minimize, to_mask
from .dealer import ParticipantBundle
from .errors import (
    BadMagicError,
    CrcMismatchError,
    FormatError,
    InvalidShareError,
    PaddingBitsError,
    PolicyError,
    PobRangeError,
    UnsupportedVersionError,
)
from .threshold import ShareVector

MAGIC = b"POBS"
VERSION = 1
_HEADER = struct.Struct(">4sB16sIHB")
_U16 = struct.Struct(">H")
_U32 = struct.Struct(">I")


class RedundantPolicyWarning(UserWarning):
    pass


def packed_length(count: int) -> int:
    return (7 * count + 7) // 8


def pack_7bit(values: Sequence[int]) -> bytes:
    out = bytearray()
    for start in range(0, len(values), 8):
        group = values[start : start + 8]
        acc = 0
        for v in group:
            if not 0 <= v < 128:
                raise PobRangeError(f"value {v} does not fit in 7 bits")
            acc = acc << 7 | v
        nbytes = packed_length(len(group))
        acc <<= 8 * nbytes - 7 * len(group)
        out += acc.to_bytes(nbytes, "big")
    return bytes(out)


def unpack_7bit(data: bytes, count: int) -> list[int]:
    if len(data) != packed_length(count):
        raise FormatError(f"{count} packed values need {packed_length(count)} bytes, got {len(data)}")
    out = []
    for start in range(0, count, 8):
        k = min(8, count - start)
        nbytes = packed_length(k)
        offset = start // 8 * 7
        acc = int.from_bytes(data[offset : offset + nbytes], "big")
        pad = 8 * nbytes - 7 * k
        if acc & ((1 << pad) - 1):
            raise PaddingBitsError("nonzero padding bits in packed payload")
        acc >>= pad
        out.extend((acc >> (7 * (k - 1 - i))) & 0x7F for i in range(k))
    return out


def encode_bundle(bundle: ParticipantBundle) -> bytes:
    name = bundle.participant.encode("utf-8")
    body = bytearray(
        _HEADER.pack(MAGIC, VERSION, bundle.scheme_id, bundle.secret_length, bundle.m, bundle.padding)
    )
    body += _U16.pack(len(name)) + name
    body += _U16.pack(len(bundle.shares))
    for vec in bundle.shares:
        if len(vec.values) != bundle.secret_length:
            raise FormatError(f"primitive {vec.index} length differs from the secret length")
        body += _U16.pack(vec.index) + pack_7bit(vec.values)
    body += _U32.pack(zlib.crc32(body))
    return bytes(body)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("bundle ends before its declared content")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk


def decode_bundle(data: bytes) -> ParticipantBundle:
    if len(data) < _HEADER.size + 4 + 4:
        raise CrcMismatchError("bundle truncated: too short to carry a CRC-checked header")
    body, crc = data[:-4], _U32.unpack(data[-4:])[0]
    if zlib.crc32(body) != crc:
        raise CrcMismatchError("CRC-32 mismatch: bundle is truncated or corrupt")
    rd = _Reader(body)
    magic, version, scheme_id, length, m, padding = _HEADER.unpack(rd.take(_HEADER.size))
    if magic != MAGIC:
        raise BadMagicError(f"not a POBS bundle (magic {magic!r})")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported bundle version {version}")
    (name_len,) = _U16.unpack(rd.take(2))
    try:
        name = rd.take(name_len).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError("participant name is not valid UTF-8") from exc
    (count,) = _U16.unpack(rd.take(2))
    shares = []
    seen = set()
    for _ in range(count):
        (index,) = _U16.unpack(rd.take(2))
        if not 1 <= index <= m or index in seen:
            raise FormatError(f"bad or repeated record index {index}")
        seen.add(index)
        values = unpack_7bit(rd.take(packed_length(length)), length)
        try:
            shares.append(ShareVector(index, bytes(values)))
        except InvalidShareError as exc:
            raise FormatError(str(exc)) from exc
    if rd.pos != len(body):
        raise FormatError("trailing bytes after the last record")
    return ParticipantBundle(scheme_id, name, m, length, padding, tuple(shares))


def parse_policy(text: str) -> AccessStructure:
    """Parse ``{"participants": [...], "minimal_authorized": [[...], ...]}``.

    Roster order is document order. Redundant sets are minimized away with a
    :class:`RedundantPolicyWarning`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolicyError(f"policy is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"participants", "minimal_authorized"}:
        raise PolicyError('policy must be an object with exactly "participants" and "minimal_authorized"')
    names = doc["participants"]
    sets = doc["minimal_authorized"]
    if not isinstance(names, list) or not all(isinstance(x, str) and x for x in names):
        raise PolicyError('"participants" must be a list of non-empty names')
    if len(set(names)) != len(names):
        dup = next(x for x in names if names.count(x) > 1)
        raise PolicyError(f"duplicate participant {dup!r}")
    index = {name: i for i, name in enumerate(names)}
    if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
        raise PolicyError('"minimal_authorized" must be a list of name lists')
    masks = []
    for s in sets:
        if not s:
            raise PolicyError("empty authorized set")
        for name in s:
            if name not in index:
                raise PolicyError(f"unknown participant {name!r} in authorized set {s}")
        masks.append(to_mask(index[name] for name in s))
    minimal = minimize(masks)
    if len(minimal) != len(masks) or minimal != canonical(masks):
        warnings.warn("redundant authorized sets were dropped", RedundantPolicyWarning, stacklevel=2)
    return AccessStructure(tuple(names), minimal)


def dump_policy(a: AccessStructure) -> str:
    return json.dumps(
        {"participants": list(a.roster), "minimal_authorized": [a.names_of(s) for s in a.minimal]},
        indent=2,
    )
