"""Brute-force oracles and the empirical leakage audit."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from statistics import mean
from typing import Iterable, Sequence

from .access import AccessStructure, is_authorized, maximal_unauthorized, members
from .dealer import combine, deal
from .errors import AuthorizedCoalitionError, EnumerationLimitError, MalformedInputError
from .pob import PobParams, enumerate_all, pob_from_value, pob_value, popcount
from .threshold import (
    SHARE_RANGE,
    RandomSource,
    Share,
    POB_BITS,
    default_rng,
    derive_insertion_position,
    remove_inserted_bit,
)

ENUMERATION_LIMIT = 10**7


def _reachable_xors(slots: int) -> set[int]:
    reach = {0}
    for _ in range(slots):
        reach = {x ^ b for x in reach for b in POB_BITS}
    return reach


def candidate_secrets(known: Iterable[Share], n: int) -> set[int]:
    """Every byte recovery can yield over all completions of the missing slots.

    Equivalent to running recovery on each of the ``126**missing`` completions,
    but the missing slots other than slot 2 only matter through their XOR,
    which takes at most 512 distinct values.
    """
    known = list(known)
    slots = [s.index for s in known]
    if len(set(slots)) != len(slots):
        raise MalformedInputError("known share slots must be distinct")
    if any(not 1 <= i <= n for i in slots):
        raise MalformedInputError(f"known share slot outside 1..{n}")
    if len(known) >= n:
        raise MalformedInputError("candidate enumeration needs at least one missing slot")
    missing = [i for i in range(1, n + 1) if i not in slots]
    size = SHARE_RANGE ** len(missing)
    if size > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"{size} completions exceed the limit of {ENUMERATION_LIMIT}")

    base = 0
    for s in known:
        if not 0 <= s.value < SHARE_RANGE:
            raise MalformedInputError(f"share value {s.value} outside [0, {SHARE_RANGE})")
        base ^= POB_BITS[s.value]
    if 2 in missing:
        others = _reachable_xors(len(missing) - 1)
        out = set()
        for v2 in range(SHARE_RANGE):
            r = derive_insertion_position(v2)
            head = base ^ POB_BITS[v2]
            out.update(remove_inserted_bit(head ^ x, r) for x in others)
        return out
    r = derive_insertion_position(next(s.value for s in known if s.index == 2))
    return {remove_inserted_bit(base ^ x, r) for x in _reachable_xors(len(missing))}


@dataclass
class LeakageReport:
    coalition: list[str]
    known_indices: list[int]
    missing_indices: list[int]
    counts: list[int]
    contains_secret: bool
    enumeration_size: int

    @property
    def min(self) -> int:
        return min(self.counts)

    @property
    def max(self) -> int:
        return max(self.counts)

    @property
    def mean(self) -> float:
        return mean(self.counts)

    def to_text(self) -> str:
        lines = [
            f"coalition:         {', '.join(self.coalition) or '(empty)'}",
            f"known primitives:  {self.known_indices}",
            f"missing primitives:{' ' if self.missing_indices else ''}{self.missing_indices}",
            f"completions/byte:  {self.enumeration_size}",
            f"candidates/byte:   min={self.min} max={self.max} mean={self.mean:.2f}",
            f"true secret among candidates: {'yes' if self.contains_secret else 'NO'}",
        ]
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["byte", "candidates"])
        for pos, count in enumerate(self.counts):
            w.writerow([pos, count])
        return buf.getvalue()


def leakage_audit(
    policy: AccessStructure,
    coalition: int,
    secret: bytes,
    rng: RandomSource | None = None,
) -> LeakageReport:
    if is_authorized(coalition, policy):
        raise AuthorizedCoalitionError(
            f"coalition {policy.names_of(coalition)} is authorized; the audit is for forbidden sets"
        )
    rng = rng or default_rng()
    meta, bundles = deal(secret, policy, rng)
    pooled = {}
    for i in members(coalition):
        for vec in bundles[i].shares:
            pooled[vec.index] = vec.values
    report = combine([bundles[i] for i in members(coalition)], meta)
    counts = []
    contained = True
    for pos, k in enumerate(secret):
        known = [Share(j, values[pos]) for j, values in pooled.items()]
        candidates = candidate_secrets(known, meta.m)
        counts.append(len(candidates))
        contained &= k in candidates
    return LeakageReport(
        coalition=policy.names_of(coalition),
        known_indices=sorted(pooled),
        missing_indices=report.missing,
        counts=counts,
        contains_secret=contained,
        enumeration_size=SHARE_RANGE ** len(report.missing),
    )


@dataclass
class CrosscheckReport:
    params: PobParams
    total: int
    passed: int
    structure_mismatches: list[AccessStructure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total and not self.structure_mismatches


def oracle_crosscheck(params: PobParams, structures: Sequence[AccessStructure] = ()) -> CrosscheckReport:
    """Check ranking/unranking against brute-force enumeration, and the fast forbidden-family path."""
    numbers = enumerate_all(params)
    passed = 0
    seen = set()
    for x in numbers:
        v = pob_value(x)
        if 0 <= v < params.size and v not in seen and pob_from_value(params, v) == x and popcount(x.bits) == params.r:
            passed += 1
        seen.add(v)
    bad = [
        a for a in structures if maximal_unauthorized(a, "brute").sets != maximal_unauthorized(a, "hitting").sets
    ]
    return CrosscheckReport(params, params.size, passed if len(numbers) == params.size else 0, bad)
