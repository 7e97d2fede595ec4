"""The byte-oriented (n, n) POB scheme.

Each secret byte is widened to a 9-bit even-parity string ``T`` and split
into ``n`` POB(9,4) numbers whose XOR is ``T``. Each share is the 7-bit
value of one of those numbers. The position of the inserted parity bit is
derived from share 2, so shares are tied to their slot index.

Bit positions are 1-based from the left: position ``i`` of a
9-bit string is bit ``9 - i`` of the int holding it.
"""

from __future__ import annotations

import secrets
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Protocol, Sequence

from .errors import (
    EmptyInputError,
    InvalidShareError,
    MalformedInputError,
    UnsupportedArityError,
)
from .pob import POB_9_4, PobParams, binomial, bitstring, pob_from_value, popcount, value_table

WIDTH = 9
ONES = 4
SHARE_RANGE = POB_9_4.size  # 126
VALUES_PER_POSITION = SHARE_RANGE // WIDTH  # 14

POB_BITS = value_table(POB_9_4)
POB_VALUES = {bits: v for v, bits in enumerate(POB_BITS)}


class RandomSource(Protocol):
    def randrange(self, stop: int) -> int: ...


class ReplayRandom:
    """Replays a scripted list of draws; each draw must lie in the requested range.

    Used to reproduce hand-worked examples. Not random at all.
    """

    def __init__(self, draws: Iterable[int]):
        self._draws = list(draws)
        self._pos = 0

    def randrange(self, stop: int) -> int:
        if self._pos >= len(self._draws):
            raise IndexError("replay script exhausted")
        value = self._draws[self._pos]
        if not 0 <= value < stop:
            raise ValueError(f"scripted draw {value} outside [0, {stop})")
        self._pos += 1
        return value

    @property
    def remaining(self) -> int:
        return len(self._draws) - self._pos


def default_rng() -> RandomSource:
    return secrets.SystemRandom()


class ParityWarning(UserWarning):
    """Recovered 9-bit string has odd parity, so the shares are inconsistent."""


class Share(NamedTuple):
    index: int
    value: int


@dataclass(frozen=True)
class ShareVector:
    index: int
    values: bytes

    def __post_init__(self):
        if any(v >= SHARE_RANGE for v in self.values):
            raise InvalidShareError(f"slot {self.index} carries a value >= {SHARE_RANGE}")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ShareTrace:
    """Every intermediate of one sharing run; bit strings held as 9-bit ints."""

    secret: int
    position: int
    expanded: int
    combined: int
    numbers: tuple[int, ...]  # A_1 .. A_n

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(POB_VALUES[a] for a in self.numbers)


def _check_byte(k: int):
    if not 0 <= k <= 0xFF:
        raise MalformedInputError(f"secret byte {k} outside 0..255")


def derive_insertion_position(s2: int) -> int:
    if not 0 <= s2 < SHARE_RANGE:
        raise InvalidShareError(f"share value {s2} outside [0, {SHARE_RANGE})")
    # ceil((s2 + 1) / 14)
    return s2 // VALUES_PER_POSITION + 1


def expand_with_parity(k: int, r: int) -> int:
    _check_byte(k)
    if not 1 <= r <= WIDTH:
        raise ValueError(f"insertion position {r} outside 1..9")
    low = WIDTH - r
    return (k >> low) << (low + 1) | (popcount(k) & 1) << low | k & ((1 << low) - 1)


def remove_inserted_bit(t: int, r: int) -> int:
    if not 1 <= r <= WIDTH:
        raise ValueError(f"insertion position {r} outside 1..9")
    low = WIDTH - r
    return (t >> (low + 1)) << low | t & ((1 << low) - 1)


@dataclass(frozen=True)
class PartialA1:
    """A 9-bit assignment where only positions in ``assigned`` are fixed."""

    assigned: int
    ones: int

    @property
    def free_positions(self) -> list[int]:
        return [i for i in range(1, WIDTH + 1) if not self.assigned >> (WIDTH - i) & 1]

    def __str__(self):
        out = []
        for i in range(1, WIDTH + 1):
            bit = 1 << (WIDTH - i)
            out.append(("1" if self.ones & bit else "0") if self.assigned & bit else "*")
        return "".join(out)


def interleave_partial_a1(w: int) -> PartialA1:
    assigned = ones = 0
    seen = 0
    for i in range(1, WIDTH + 1):
        bit = 1 << (WIDTH - i)
        if w & bit:
            seen += 1
            assigned |= bit
            if seen % 2:
                ones |= bit
    return PartialA1(assigned, ones)


def complete_a1(partial: PartialA1, rng: RandomSource) -> int:
    """Fill the free positions so the result has exactly four ones.

    The extra ones are chosen with a single draw in ``[0, C(free, extra))``,
    read as a POB(free, extra) number laid over the free positions left to
    right. Every completion is equally likely under a uniform draw.
    """
    extra = ONES - popcount(partial.ones)
    free = partial.free_positions
    if extra < 0 or extra > len(free):
        raise AssertionError(f"partial {partial} cannot complete to four ones")
    bits = partial.ones
    if extra == 0:
        return bits
    pick = pob_from_value(PobParams(len(free), extra), rng.randrange(binomial(len(free), extra)))
    for offset, pos in enumerate(free):
        if pick.bits >> (len(free) - 1 - offset) & 1:
            bits |= 1 << (WIDTH - pos)
    return bits


def trace_share_byte(k: int, n: int, rng: RandomSource | None = None) -> ShareTrace:
    _check_byte(k)
    if n < 3:
        raise UnsupportedArityError(f"the POB (n,n) scheme needs n >= 3, got {n}")
    rng = rng or default_rng()
    middle = [POB_BITS[rng.randrange(SHARE_RANGE)] for _ in range(n - 2)]
    r = derive_insertion_position(POB_VALUES[middle[0]])
    t = expand_with_parity(k, r)
    w = t
    for a in middle:
        w ^= a
    a1 = complete_a1(interleave_partial_a1(w), rng)
    an = w ^ a1
    if popcount(an) != ONES:
        raise AssertionError(f"A_n = {bitstring(an, WIDTH)} is not a POB(9,4) number")
    return ShareTrace(k, r, t, w, (a1, *middle, an))


def share_byte(k: int, n: int, rng: RandomSource | None = None) -> list[Share]:
    trace = trace_share_byte(k, n, rng)
    return [Share(i, v) for i, v in enumerate(trace.values, start=1)]


def _ordered_values(shares: Iterable[Share]) -> list[int]:
    by_slot: dict[int, int] = {}
    for index, value in shares:
        if index in by_slot:
            raise MalformedInputError(f"slot {index} given twice")
        by_slot[index] = value
    n = len(by_slot)
    if n < 3 or sorted(by_slot) != list(range(1, n + 1)):
        raise MalformedInputError(f"need slots 1..n (n >= 3) exactly once, got {sorted(by_slot)}")
    for index, value in by_slot.items():
        if not 0 <= value < SHARE_RANGE:
            raise InvalidShareError(f"slot {index} value {value} outside [0, {SHARE_RANGE})")
    return [by_slot[i] for i in range(1, n + 1)]


def _recover(values: Sequence[int]) -> tuple[int, bool]:
    t = 0
    for v in values:
        t ^= POB_BITS[v]
    r = derive_insertion_position(values[1])
    return remove_inserted_bit(t, r), popcount(t) % 2 == 0


def recover_byte_checked(shares: Iterable[Share]) -> tuple[int, bool]:
    """Recovered byte plus whether the XOR of the shares had even parity."""
    return _recover(_ordered_values(shares))


def recover_byte(shares: Iterable[Share]) -> int:
    k, consistent = recover_byte_checked(shares)
    if not consistent:
        warnings.warn("shares are inconsistent (odd parity after XOR)", ParityWarning, stacklevel=2)
    return k


def share_secret(secret: bytes, n: int, rng: RandomSource | None = None) -> list[ShareVector]:
    """Share every byte independently; vector ``i`` holds slot ``i`` of each byte."""
    if not secret:
        raise EmptyInputError("cannot share an empty secret")
    if n < 3:
        raise UnsupportedArityError(f"the POB (n,n) scheme needs n >= 3, got {n}")
    rng = rng or default_rng()
    columns = [bytearray(len(secret)) for _ in range(n)]
    for pos, k in enumerate(secret):
        for slot, v in enumerate(trace_share_byte(k, n, rng).values):
            columns[slot][pos] = v
    return [ShareVector(i, bytes(col)) for i, col in enumerate(columns, start=1)]


def recover_secret_checked(vectors: Iterable[ShareVector]) -> tuple[bytes, list[int]]:
    """Recovered secret and the byte offsets whose shares failed the parity check."""
    vectors = list(vectors)
    ordered = _ordered_values((v.index, 0) for v in vectors)  # slot validation only
    by_slot = {v.index: v.values for v in vectors}
    lengths = {len(v.values) for v in vectors}
    if len(lengths) != 1:
        raise MalformedInputError(f"share vectors have unequal lengths {sorted(lengths)}")
    columns = [by_slot[i] for i in range(1, len(ordered) + 1)]
    out = bytearray()
    bad = []
    for pos, values in enumerate(zip(*columns)):
        k, ok = _recover(values)
        out.append(k)
        if not ok:
            bad.append(pos)
    return bytes(out), bad


def recover_secret(vectors: Iterable[ShareVector]) -> bytes:
    secret, bad = recover_secret_checked(vectors)
    if bad:
        warnings.warn(f"{len(bad)} byte(s) failed the parity check", ParityWarning, stacklevel=2)
    return secret
