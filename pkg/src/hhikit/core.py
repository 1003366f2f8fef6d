"""Concentration indices, truncated-data HHI bounds and classification ladders.

All shares are fractions in ``[0, 1]``. A :class:`MarketSnapshot` holds the
named (top-M) firms of one period plus the unattributed residual mass. When
the residual is zero the snapshot is complete and the exact HHI is defined;
otherwise only :func:`hhi_bounds` applies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .errors import (
    DegenerateTruncation,
    EmptySnapshot,
    InfeasibleGranularity,
    InsufficientFirms,
    InvalidSnapshot,
    OutOfRange,
    ResidualPresent,
    UnknownFirm,
)

SUM_TOLERANCE = 1e-9
# snap distance for R / s_M before flooring
INTEGER_SNAP = 1e-12

Entry = Tuple[str, float]


def _sum_sq(values) -> Fraction:
    # exact on the stored doubles; callers round once with float()
    return sum((Fraction(v) ** 2 for v in values), Fraction(0))


def _canonical_key(entry: Entry):
    name, share = entry
    return (-share, name)


@dataclass(frozen=True)
class MarketSnapshot:
    """Named firm shares for one period, sorted descending, plus residual mass."""

    entries: Tuple[Entry, ...]
    residual: float = 0.0

    def __post_init__(self):
        entries = tuple((str(name), float(share)) for name, share in self.entries)
        residual = float(self.residual)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "residual", residual)

        for name, share in entries:
            if not (0.0 <= share <= 1.0):
                raise InvalidSnapshot(f"share of {name!r} outside [0, 1]: {share!r}")
        if not (0.0 <= residual <= 1.0):
            raise InvalidSnapshot(f"residual outside [0, 1]: {residual!r}")
        names = [name for name, _ in entries]
        if len(set(names)) != len(names):
            raise InvalidSnapshot("firm names must be unique")
        for (_, a), (_, b) in zip(entries, entries[1:]):
            if a < b:
                raise InvalidSnapshot("entries must be sorted by descending share")
        total = math.fsum(self.shares) + residual
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidSnapshot(f"shares plus residual sum to {total!r}, not 1")

    @classmethod
    def from_shares(
        cls,
        shares: Union[Mapping[str, float], Iterable[Union[float, Entry]]],
        residual: float = 0.0,
    ) -> "MarketSnapshot":
        """Build a snapshot from shares in any order.

        ``shares`` may be a mapping of name to share, a sequence of
        ``(name, share)`` pairs, or bare numbers (named ``f1``, ``f2``, ...
        by input position). Entries are sorted by descending share, ties by
        name.
        """
        if isinstance(shares, Mapping):
            pairs = list(shares.items())
        else:
            pairs = []
            for i, item in enumerate(shares, start=1):
                if isinstance(item, tuple):
                    pairs.append((str(item[0]), float(item[1])))
                else:
                    pairs.append((f"f{i}", float(item)))
        pairs = [(str(n), float(s)) for n, s in pairs]
        pairs.sort(key=_canonical_key)
        return cls(tuple(pairs), residual)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    @property
    def shares(self) -> Tuple[float, ...]:
        return tuple(share for _, share in self.entries)

    @property
    def smallest_share(self) -> float:
        if not self.entries:
            raise EmptySnapshot("snapshot has no named firms")
        return self.entries[-1][1]

    @property
    def is_complete(self) -> bool:
        return self.residual == 0.0

    def share_of(self, name: str) -> float:
        for n, s in self.entries:
            if n == name:
                return s
        raise UnknownFirm(f"no firm named {name!r}")


class BoundBranch(enum.Enum):
    COMPLETE = "complete"
    SMALL_RESIDUAL = "small_residual"
    LARGE_RESIDUAL = "large_residual"


@dataclass(frozen=True)
class HhiBounds:
    lower: float
    upper: float
    r: float
    q: int
    branch: BoundBranch

    @property
    def width(self) -> float:
        return self.upper - self.lower


class ConcentrationClass(enum.IntEnum):
    """HHI ladder, ordered from least to most concentrated."""

    UNCONCENTRATED = 0
    MODERATELY_CONCENTRATED = 1
    HIGHLY_CONCENTRATED = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class CompetitionClass(enum.IntEnum):
    """CR4 ladder, ordered from most to least competitive."""

    PERFECT_COMPETITION = 0
    EFFECTIVE_COMPETITION = 1
    LOOSE_OLIGOPOLY = 2
    TIGHT_OLIGOPOLY = 3

    @property
    def label(self) -> str:
        return self.name.lower()


def hhi(snapshot: MarketSnapshot) -> float:
    """Sum of squared shares of a complete snapshot.

    Raises
    ------
    ResidualPresent
        If the snapshot carries unattributed mass; use :func:`hhi_bounds`.
    """
    if not snapshot.entries:
        raise EmptySnapshot("snapshot has no named firms")
    if snapshot.residual > 0.0:
        raise ResidualPresent(
            f"residual {snapshot.residual!r} present; exact HHI undefined, use hhi_bounds"
        )
    return float(_sum_sq(snapshot.shares))


def _snap_ratio(ratio: float) -> float:
    nearest = round(ratio)
    if abs(ratio - nearest) <= INTEGER_SNAP:
        return float(nearest)
    return ratio


def hhi_bounds(snapshot: MarketSnapshot) -> HhiBounds:
    """Lower and upper HHI over every completion of a truncated snapshot.

    The hidden firms that make up the residual ``R`` are each assumed no
    larger than the smallest named share ``s_M``. The lower bound is the
    named sum of squares (hidden mass spread infinitely thin). The upper
    bound packs ``Q = floor(R / s_M)`` hidden firms of size ``s_M`` plus one
    remainder firm, or a single firm of size ``R`` when ``R <= s_M``.
    """
    if not snapshot.entries:
        raise EmptySnapshot("snapshot has no named firms")
    named = _sum_sq(snapshot.shares)
    lower = float(named)
    r = snapshot.residual
    if r == 0.0:
        return HhiBounds(lower, lower, 0.0, 0, BoundBranch.COMPLETE)

    s_m = snapshot.smallest_share
    if s_m <= 0.0:
        raise DegenerateTruncation(
            "residual present but the smallest named share is 0; Q is undefined"
        )
    ratio = _snap_ratio(r / s_m)
    q = math.floor(ratio)
    r_x, s_x = Fraction(r), Fraction(s_m)
    if ratio <= 1.0:
        upper = float(named + r_x * r_x)
        branch = BoundBranch.SMALL_RESIDUAL
    else:
        remainder = r_x - s_x * q
        upper = float(named + s_x * s_x * q + remainder * remainder)
        branch = BoundBranch.LARGE_RESIDUAL
    return HhiBounds(lower, upper, r, q, branch)


def cr_k(snapshot: MarketSnapshot, k: int = 4) -> float:
    """Combined share of the ``k`` largest firms.

    Exact under truncation as long as ``k`` named firms are known, because
    no hidden firm can exceed the smallest named share.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if len(snapshot.entries) < k and snapshot.residual > 0.0:
        raise InsufficientFirms(
            f"only {len(snapshot.entries)} named firms with residual present; "
            f"top {k} not identifiable"
        )
    return math.fsum(snapshot.shares[:k])


def top_share(snapshot: MarketSnapshot) -> Tuple[str, float]:
    """Name and share of the largest firm; ties go to the smallest name."""
    if not snapshot.entries:
        raise EmptySnapshot("snapshot has no named firms")
    best = max(s for _, s in snapshot.entries)
    name = min(n for n, s in snapshot.entries if s == best)
    return name, best


def _check_unit(value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise OutOfRange(f"value {value!r} outside [0, 1]")


def classify_hhi(value: float) -> ConcentrationClass:
    _check_unit(value)
    if value < 0.15:
        return ConcentrationClass.UNCONCENTRATED
    if value <= 0.25:
        return ConcentrationClass.MODERATELY_CONCENTRATED
    return ConcentrationClass.HIGHLY_CONCENTRATED


def classify_cr4(value: float) -> CompetitionClass:
    _check_unit(value)
    if value == 0.0:
        return CompetitionClass.PERFECT_COMPETITION
    if value < 0.4:
        return CompetitionClass.EFFECTIVE_COMPETITION
    if value <= 0.6:
        return CompetitionClass.LOOSE_OLIGOPOLY
    return CompetitionClass.TIGHT_OLIGOPOLY


def merge(snapshot: MarketSnapshot, firm_a: str, firm_b: str) -> MarketSnapshot:
    """Snapshot with ``firm_a`` and ``firm_b`` replaced by one combined firm."""
    if firm_a == firm_b:
        raise UnknownFirm(f"cannot merge {firm_a!r} with itself")
    s_a = snapshot.share_of(firm_a)
    s_b = snapshot.share_of(firm_b)
    rest = [(n, s) for n, s in snapshot.entries if n not in (firm_a, firm_b)]
    rest.append((f"{firm_a}+{firm_b}", s_a + s_b))
    return MarketSnapshot.from_shares(rest, snapshot.residual)


def merger_delta(snapshot: MarketSnapshot, firm_a: str, firm_b: str) -> float:
    """HHI increase from merging two firms, ``2 * s_a * s_b``."""
    if snapshot.residual > 0.0:
        raise ResidualPresent("merger delta requires complete data")
    if firm_a == firm_b:
        raise UnknownFirm(f"cannot merge {firm_a!r} with itself")
    return 2.0 * snapshot.share_of(firm_a) * snapshot.share_of(firm_b)


# ---------------------------------------------------------------------------
# brute-force verification oracle for hhi_bounds


def _oracle_grid(snapshot: MarketSnapshot, granularity: int):
    if granularity < 1:
        raise ValueError(f"granularity must be >= 1, got {granularity!r}")
    r = snapshot.residual
    if r <= 0.0:
        raise ValueError("bounds oracle needs a truncated snapshot (residual > 0)")
    s_m = snapshot.smallest_share
    if s_m <= 0.0:
        raise DegenerateTruncation(
            "residual present but the smallest named share is 0; Q is undefined"
        )
    chunk = Fraction(r) / granularity
    cap = min(math.floor(_snap_ratio(float(Fraction(s_m) / chunk))), granularity)
    if cap < 1:
        raise InfeasibleGranularity(
            f"chunk {float(chunk)!r} exceeds smallest named share {s_m!r}; raise granularity"
        )
    return chunk, cap


def _max_partition(total: int, cap: int) -> list:
    """Partition ``total`` chunks into parts <= ``cap`` maximizing sum of squares.

    Exhaustive over all partitions by dynamic programming; does not assume
    the optimum packs cap-sized parts.
    """
    best = [0] * (total + 1)
    choice = [0] * (total + 1)
    for j in range(1, total + 1):
        top_val, top_p = -1, 0
        for p in range(1, min(cap, j) + 1):
            v = best[j - p] + p * p
            if v > top_val:
                top_val, top_p = v, p
        best[j] = top_val
        choice[j] = top_p
    parts = []
    j = total
    while j > 0:
        parts.append(choice[j])
        j -= choice[j]
    return sorted(parts, reverse=True)


def _hidden_sizes(parts: Sequence[int], chunk: Fraction, s_m: float) -> list:
    # a snapped cap can put p * chunk a hair above s_m
    cap = Fraction(s_m)
    return [min(p * chunk, cap) for p in parts]


def oracle_completions(snapshot: MarketSnapshot, granularity: int) -> list:
    """Feasible completions of a truncated snapshot on a residual grid.

    The residual is cut into ``granularity`` equal chunks that are assembled
    into hidden firms, each no larger than the smallest named share. Returns
    a list of hidden-firm share lists: the sum-of-squares maximizer, the
    even spread, and uniform packings at a few intermediate firm sizes.
    """
    chunk, cap = _oracle_grid(snapshot, granularity)
    s_m = snapshot.smallest_share
    layouts = [_max_partition(granularity, cap), [1] * granularity]
    for size in sorted({max(1, cap // 2), max(1, cap // 3), 2 if cap >= 2 else 1}):
        full, rem = divmod(granularity, size)
        layouts.append([size] * full + ([rem] if rem else []))
    out = []
    for parts in layouts:
        sizes = [float(x) for x in _hidden_sizes(parts, chunk, s_m)]
        if sizes not in out:
            out.append(sizes)
    return out


def complete(snapshot: MarketSnapshot, hidden: Sequence[float]) -> MarketSnapshot:
    """Complete snapshot with the residual replaced by explicit hidden firms."""
    pairs = list(snapshot.entries)
    pairs += [(f"~hidden-{i}", s) for i, s in enumerate(hidden, start=1)]
    return MarketSnapshot.from_shares(pairs, 0.0)


def bounds_oracle(snapshot: MarketSnapshot, granularity: int) -> Tuple[float, float]:
    """Extremal sum of squares over completions explored on the residual grid.

    The maximum is found by exhaustive search over partitions of the
    ``granularity`` chunks into hidden firms capped at the smallest named
    share; the minimum spreads one chunk per hidden firm.
    """
    chunk, cap = _oracle_grid(snapshot, granularity)
    s_m = snapshot.smallest_share
    named = _sum_sq(snapshot.shares)
    hi = _hidden_sizes(_max_partition(granularity, cap), chunk, s_m)
    max_found = float(named + sum(h * h for h in hi))
    min_found = float(named + chunk * chunk * granularity)
    return min_found, max_found
