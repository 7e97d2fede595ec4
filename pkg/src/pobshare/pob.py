"""Permutation Ordered Binary (POB) numbers.

A POB(n, r) number is a length-``n`` bit string with exactly ``r`` ones.
Its value is ``sum(b_j * C(j, p_j))`` where ``p_j`` counts the ones in
``b_0..b_j`` (inclusive). That is the combinatorial number system in
colexicographic order, so every value in ``[0, C(n, r))`` has exactly one
representation.

Bits are stored as a Python int: bit ``j`` of the int is ``b_j`` and the
leftmost character of the text form is ``b_{n-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations

import numpy as np

from .errors import PobRangeError

MAX_N = 64
ENUMERATION_LIMIT = 10**6


def _build_table(max_n: int) -> list[list[int]]:
    table = [[0] * (max_n + 2) for _ in range(max_n + 1)]
    for j in range(max_n + 1):
        table[j][0] = 1
        for k in range(1, j + 1):
            table[j][k] = table[j - 1][k - 1] + table[j - 1][k]
            if table[j][k] >= 1 << 64:
                raise OverflowError(f"C({j},{k}) exceeds 64 bits")
    return table


# C(64, 32) < 2**64, so a 64-wide table never overflows.
_BINOM = _build_table(MAX_N)


def binomial(j: int, k: int) -> int:
    """Exact C(j, k) with C(j, k) = 0 for k > j."""
    if j < 0 or k < 0:
        raise PobRangeError(f"binomial({j}, {k}) needs non-negative arguments")
    if j > MAX_N:
        raise PobRangeError(f"binomial table holds j <= {MAX_N}, got {j}")
    if k > j:
        return 0
    return _BINOM[j][k]


@dataclass(frozen=True)
class PobParams:
    n: int
    r: int

    def __post_init__(self):
        if not 1 <= self.r <= self.n <= MAX_N:
            raise PobRangeError(f"POB({self.n},{self.r}) needs 1 <= r <= n <= {MAX_N}")

    @property
    def size(self) -> int:
        return binomial(self.n, self.r)


POB_9_4 = PobParams(9, 4)


@dataclass(frozen=True)
class PobNumber:
    params: PobParams
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 1 << self.params.n:
            raise PobRangeError(f"{self.bits:#x} does not fit in {self.params.n} bits")
        if popcount(self.bits) != self.params.r:
            raise PobRangeError(
                f"{bitstring(self.bits, self.params.n)} has {popcount(self.bits)} ones, "
                f"POB({self.params.n},{self.params.r}) needs {self.params.r}"
            )

    @classmethod
    def parse(cls, text: str, r: int | None = None) -> "PobNumber":
        """Build from ``"001110100"`` or ``"001110100p"``; ``r`` defaults to the popcount."""
        text = text.strip()
        if text.endswith("p"):
            text = text[:-1]
        bits = parse_bits(text)
        return cls(PobParams(len(text), popcount(bits) if r is None else r), bits)

    @property
    def value(self) -> int:
        return pob_value(self)

    def __str__(self):
        return bitstring(self.bits, self.params.n) + "p"


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def parse_bits(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise PobRangeError(f"not a bit string: {text!r}")
    return int(text, 2)


def bitstring(bits: int, n: int) -> str:
    return format(bits, f"0{n}b") if n else ""


def as_plain_binary(bits: int | str) -> int:
    """Ordinary base-2 reading of a bit string (``b_{n-1}`` most significant)."""
    return parse_bits(bits) if isinstance(bits, str) else bits


def is_even_parity(bits: int) -> bool:
    return popcount(bits) % 2 == 0


def parity(bits: int) -> str:
    return "even" if is_even_parity(bits) else "odd"


def pob_value(x: PobNumber) -> int:
    value = 0
    ones = 0
    bits = x.bits
    while bits:
        low = bits & -bits
        j = low.bit_length() - 1
        ones += 1
        value += _BINOM[j][ones]
        bits ^= low
    return value


def pob_from_value(params: PobParams, value: int) -> PobNumber:
    """Greedy colex unranking: the k-th one from the right sits at the largest j with C(j, k) <= rest."""
    if not 0 <= value < params.size:
        raise PobRangeError(f"value {value} outside [0, {params.size}) for POB({params.n},{params.r})")
    bits = 0
    rest = value
    j = params.n - 1
    for k in range(params.r, 0, -1):
        while _BINOM[j][k] > rest:
            j -= 1
        bits |= 1 << j
        rest -= _BINOM[j][k]
        j -= 1
    return PobNumber(params, bits)


_BINOM_NP = np.array([row[: MAX_N + 1] for row in _BINOM], dtype=np.uint64)


def pob_values(params: PobParams, bits: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pob_value` over an array of bit patterns (uint64)."""
    bits = np.asarray(bits, dtype=np.uint64)
    value = np.zeros(bits.shape, dtype=np.uint64)
    ones = np.zeros(bits.shape, dtype=np.uint64)
    one = np.uint64(1)
    for j in range(params.n):
        bit = (bits >> np.uint64(j)) & one
        ones += bit
        value += bit * _BINOM_NP[j, ones]
    return value


def pob_bits_from_values(params: PobParams, values: np.ndarray) -> np.ndarray:
    """Vectorized unranking; each step is a search down one binomial column."""
    rest = np.asarray(values, dtype=np.uint64).copy()
    if rest.size and int(rest.max()) >= params.size:
        raise PobRangeError(f"value outside [0, {params.size}) for POB({params.n},{params.r})")
    bits = np.zeros(rest.shape, dtype=np.uint64)
    for k in range(params.r, 0, -1):
        column = _BINOM_NP[: params.n, k]  # non-decreasing in j
        j = np.searchsorted(column, rest, side="right") - 1
        bits |= np.left_shift(np.uint64(1), j.astype(np.uint64))
        rest -= column[j]
    return bits


def enumerate_all(params: PobParams) -> list[PobNumber]:
    """Every POB(n, r) number in increasing value order.

    The strings come from plain subset enumeration, independent of the
    ranking, so the result can serve as an oracle for it.
    """
    if params.size > ENUMERATION_LIMIT:
        raise PobRangeError(f"C({params.n},{params.r}) = {params.size} exceeds {ENUMERATION_LIMIT}")
    found = [PobNumber(params, sum(1 << j for j in ones)) for ones in combinations(range(params.n), params.r)]
    found.sort(key=pob_value)
    return found


def enumerate_bits(params: PobParams) -> np.ndarray:
    """All POB(n, r) bit patterns as uint64, in subset-enumeration order (not sorted by value)."""
    if params.size > ENUMERATION_LIMIT:
        raise PobRangeError(f"C({params.n},{params.r}) = {params.size} exceeds {ENUMERATION_LIMIT}")
    # pick whichever of the ones or the zeros is the smaller set
    k = min(params.r, params.n - params.r)
    flat = chain.from_iterable(combinations(range(params.n), k))
    positions = np.fromiter(flat, dtype=np.uint64, count=params.size * k).reshape(params.size, k)
    picked = np.left_shift(np.uint64(1), positions).sum(axis=1, dtype=np.uint64)
    if k == params.r:
        return picked
    full = np.uint64((1 << params.n) - 1)
    return picked ^ full


def value_table(params: PobParams = POB_9_4) -> list[int]:
    """Bit patterns indexed by value; the hot path for the (n, n) scheme."""
    return [pob_from_value(params, v).bits for v in range(params.size)]
