"""Monotone access structures, maximal forbidden families and cumulative arrays.

Subsets of the roster are int bitmasks: bit ``i`` set means participant
``roster[i]`` is a member. Families are kept in canonical order, sorted by
the tuple of member positions, so cumulative-array columns (and with them
primitive share indices) are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyPolicyError, PolicyError, PublicSecretError

MAX_PARTICIPANTS = 20


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def to_mask(positions: Iterable[int]) -> int:
    mask = 0
    for p in positions:
        mask |= 1 << p
    return mask


def canonical(family: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(family), key=members))


def minimize(family: Iterable[int]) -> tuple[int, ...]:
    """Drop every set that strictly contains another member of the family."""
    family = set(family)
    keep = [s for s in family if not any(t != s and t & s == t for t in family)]
    return canonical(keep)


@dataclass(frozen=True)
class AccessStructure:
    """Roster plus the antichain of minimal authorized sets."""

    roster: tuple[str, ...]
    minimal: tuple[int, ...]

    def __post_init__(self):
        n = len(self.roster)
        if not 1 <= n <= MAX_PARTICIPANTS:
            raise PolicyError(f"roster size must be in 1..{MAX_PARTICIPANTS}, got {n}")
        if len(set(self.roster)) != n:
            raise PolicyError("duplicate participant in roster")
        if not self.minimal:
            raise EmptyPolicyError("access structure has no authorized sets")
        if 0 in self.minimal:
            raise PublicSecretError("the empty set is authorized; the secret would be public")
        if any(s >> n for s in self.minimal):
            raise PolicyError("authorized set references a participant outside the roster")
        if minimize(self.minimal) != canonical(self.minimal) or len(set(self.minimal)) != len(self.minimal):
            raise PolicyError("minimal authorized sets must form an antichain")
        object.__setattr__(self, "minimal", canonical(self.minimal))

    @classmethod
    def from_sets(cls, roster: Sequence[str], sets: Iterable[Iterable[int]]) -> "AccessStructure":
        """Build from 0-based position sets; redundant supersets are dropped."""
        return cls(tuple(roster), minimize(to_mask(s) for s in sets))

    @classmethod
    def threshold(cls, t: int, n: int, names: Sequence[str] | None = None) -> "AccessStructure":
        from itertools import combinations

        roster = tuple(names) if names else tuple(f"P{i}" for i in range(1, n + 1))
        return cls(roster, canonical(to_mask(c) for c in combinations(range(n), t)))

    @property
    def n(self) -> int:
        return len(self.roster)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, names: Iterable[str]) -> int:
        index = {name: i for i, name in enumerate(self.roster)}
        mask = 0
        for name in names:
            if name not in index:
                raise PolicyError(f"unknown participant {name!r}")
            mask |= 1 << index[name]
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [self.roster[i] for i in members(mask)]


def is_authorized(s: int, a: AccessStructure) -> bool:
    return any(s & m == m for m in a.minimal)


@dataclass(frozen=True)
class ForbiddenFamily:
    """Inclusion-maximal unauthorized sets, in canonical order."""

    roster: tuple[str, ...]
    sets: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.sets)


def _maximal_unauthorized_brute(a: AccessStructure) -> tuple[int, ...]:
    out = []
    for s in range(1 << a.n):
        if is_authorized(s, a):
            continue
        if all(is_authorized(s | 1 << i, a) for i in range(a.n) if not s >> i & 1):
            out.append(s)
    return canonical(out)


def minimal_transversals(family: Iterable[int]) -> tuple[int, ...]:
    """Minimal hitting sets by Berge's incremental construction."""
    current = {0}
    for edge in family:
        grown = set()
        for t in current:
            if t & edge:
                grown.add(t)
            else:
                for p in members(edge):
                    grown.add(t | 1 << p)
        current = set(minimize(grown))
    return canonical(current)


def _maximal_unauthorized_hitting(a: AccessStructure) -> tuple[int, ...]:
    # unauthorized <=> complement hits every minimal set
    return canonical(a.full & ~t for t in minimal_transversals(a.minimal))


def maximal_unauthorized(a: AccessStructure, method: str = "brute") -> ForbiddenFamily:
    """``method="brute"`` sweeps all 2**n subsets; ``"hitting"`` complements minimal transversals."""
    if method == "brute":
        sets = _maximal_unauthorized_brute(a)
    elif method == "hitting":
        sets = _maximal_unauthorized_hitting(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ForbiddenFamily(a.roster, sets)


def incidence_array(a: AccessStructure) -> list[list[int]]:
    return [[m >> j & 1 for j in range(a.n)] for m in a.minimal]


@dataclass(frozen=True)
class CumulativeArray:
    """``rows[i][j] == 1`` iff participant ``i`` is outside forbidden set ``columns[j]``."""

    roster: tuple[str, ...]
    columns: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.columns)

    def row_mask(self, i: int) -> int:
        """Row ``i`` as a mask over columns, bit ``j`` for column ``j``."""
        return to_mask(j for j, b in enumerate(self.rows[i]) if b)

    def held_by(self, i: int) -> list[int]:
        """1-based primitive indices held by participant ``i``."""
        return [j + 1 for j, b in enumerate(self.rows[i]) if b]


def cumulative_array(f: ForbiddenFamily) -> CumulativeArray:
    n = len(f.roster)
    full = (1 << n) - 1
    if any(b == full for b in f.sets):
        raise EmptyPolicyError("the whole roster is unauthorized")
    rows = tuple(tuple(0 if b >> i & 1 else 1 for b in f.sets) for i in range(n))
    return CumulativeArray(f.roster, f.sets, rows)


def covers_all(c: CumulativeArray, s: int) -> bool:
    """True iff the OR of the rows selected by ``s`` is all ones."""
    acc = 0
    for i in members(s):
        acc |= c.row_mask(i)
    return c.m > 0 and acc == (1 << c.m) - 1


def format_matrix(rows: Sequence[Sequence[int]]) -> str:
    return "\n".join("".join(str(b) for b in row) for row in rows)
