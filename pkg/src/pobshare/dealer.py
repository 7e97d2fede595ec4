"""Generalized secret sharing: cumulative array on top of the (m, m) POB scheme.

The dealer computes the maximal forbidden family of the policy, builds the
cumulative array, splits the secret into ``m`` primitive share vectors and
hands primitive ``j`` to every participant outside forbidden set ``j``.
A coalition recovers the secret exactly when its pooled indices cover
``1..m``, which happens exactly when it is authorized.

When the family has fewer than three members the inner scheme is unusable,
so extra primitive shares are appended and given to everyone.
"""

from __future__ import annotations

import random
import secrets
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .access import (
    AccessStructure,
    covers_all,
    cumulative_array,
    is_authorized,
    maximal_unauthorized,
)
from .errors import ConflictError, EmptyInputError, MalformedInputError, SchemeMismatchError
from .threshold import RandomSource, ShareVector, default_rng, recover_secret_checked, share_secret

MIN_PRIMITIVES = 3


@dataclass(frozen=True)
class SchemeMetadata:
    scheme_id: bytes
    roster: tuple[str, ...]
    m: int
    columns: tuple[int, ...]
    secret_length: int
    padding: int

    @property
    def padding_indices(self) -> list[int]:
        return list(range(self.m - self.padding + 1, self.m + 1))


@dataclass(frozen=True)
class ParticipantBundle:
    scheme_id: bytes
    participant: str
    m: int
    secret_length: int
    padding: int
    shares: tuple[ShareVector, ...]

    def __post_init__(self):
        indices = [s.index for s in self.shares]
        if len(set(indices)) != len(indices):
            raise MalformedInputError(f"bundle for {self.participant!r} repeats a primitive index")
        object.__setattr__(self, "shares", tuple(sorted(self.shares, key=lambda s: s.index)))

    @property
    def indices(self) -> list[int]:
        return [s.index for s in self.shares]


@dataclass(frozen=True)
class CombineReport:
    secret: bytes | None
    present: list[int]
    missing: list[int]
    parity_warning: bool = False
    bad_bytes: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.secret is not None


def _new_scheme_id(rng: RandomSource) -> bytes:
    if isinstance(rng, random.Random):
        return rng.getrandbits(128).to_bytes(16, "big")
    return secrets.token_bytes(16)


def deal(
    secret: bytes,
    a: AccessStructure,
    rng: RandomSource | None = None,
    scheme_id: bytes | None = None,
) -> tuple[SchemeMetadata, list[ParticipantBundle]]:
    if not secret:
        raise EmptyInputError("cannot deal an empty secret")
    rng = rng or default_rng()
    forbidden = maximal_unauthorized(a)
    array = cumulative_array(forbidden)
    m = max(array.m, MIN_PRIMITIVES)
    padding = m - array.m
    vectors = share_secret(secret, m, rng)
    if scheme_id is None:
        scheme_id = _new_scheme_id(rng)
    meta = SchemeMetadata(scheme_id, a.roster, m, array.columns, len(secret), padding)
    pad = meta.padding_indices
    bundles = []
    for i, name in enumerate(a.roster):
        held = array.held_by(i) + pad
        bundles.append(
            ParticipantBundle(
                scheme_id, name, m, len(secret), padding, tuple(vectors[j - 1] for j in held)
            )
        )
    return meta, bundles


def combine(bundles: Iterable[ParticipantBundle], meta: SchemeMetadata | None = None) -> CombineReport:
    bundles = list(bundles)
    if meta is None:
        if not bundles:
            raise MalformedInputError("no bundles and no scheme metadata")
        first = bundles[0]
        scheme_id, m, length = first.scheme_id, first.m, first.secret_length
    else:
        scheme_id, m, length = meta.scheme_id, meta.m, meta.secret_length

    pooled: dict[int, bytes] = {}
    for b in bundles:
        if b.scheme_id != scheme_id:
            raise SchemeMismatchError(
                f"bundle for {b.participant!r} belongs to scheme {b.scheme_id.hex()}, expected {scheme_id.hex()}"
            )
        if b.m != m or b.secret_length != length:
            raise MalformedInputError(f"bundle for {b.participant!r} disagrees on scheme shape")
        for vec in b.shares:
            if not 1 <= vec.index <= m:
                raise MalformedInputError(f"primitive index {vec.index} outside 1..{m}")
            if len(vec.values) != length:
                raise MalformedInputError(f"primitive {vec.index} has {len(vec.values)} values, expected {length}")
            seen = pooled.setdefault(vec.index, vec.values)
            if seen != vec.values:
                raise ConflictError(f"conflicting payloads for primitive index {vec.index}")

    present = sorted(pooled)
    missing = [j for j in range(1, m + 1) if j not in pooled]
    if missing:
        return CombineReport(None, present, missing)
    secret, bad = recover_secret_checked(ShareVector(j, pooled[j]) for j in present)
    return CombineReport(secret, present, [], bool(bad), bad)


@dataclass(frozen=True)
class EquivalenceReport:
    checked: int
    counterexamples: list[int]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def authorized_equivalence_check(
    a: AccessStructure,
    trials: int = 0,
    secret: bytes | None = None,
    rng: RandomSource | None = None,
) -> EquivalenceReport:
    """Deal once and try every coalition (or ``trials`` random ones when ``trials > 0``).

    A coalition is a counterexample when combine's outcome, the
    row cover test and the policy itself do not all agree.
    """
    rng = rng or default_rng()
    if secret is None:
        secret = bytes(rng.randrange(256) for _ in range(16))
    meta, bundles = deal(secret, a, rng)
    array = cumulative_array(maximal_unauthorized(a))
    if trials > 0:
        subsets: Sequence[int] = [rng.randrange(1 << a.n) for _ in range(trials)]
    else:
        subsets = range(1 << a.n)
    bad = []
    for s in subsets:
        report = combine([bundles[i] for i in range(a.n) if s >> i & 1], meta)
        authorized = is_authorized(s, a)
        if authorized:
            good = report.secret == secret
        else:
            good = report.secret is None and bool(report.missing)
        if not good or covers_all(array, s) != authorized:
            bad.append(s)
    return EquivalenceReport(len(subsets), bad)

