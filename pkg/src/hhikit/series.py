"""Quarter-by-quarter index computation, bound-gap statistics and crossovers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    CompetitionClass,
    ConcentrationClass,
    HhiBounds,
    MarketSnapshot,
    classify_cr4,
    classify_hhi,
    cr_k,
    hhi_bounds,
    top_share,
)
from .dataset import QuarterId, QuarterlyDataset, quarters, to_snapshot
from .errors import EmptySeries, HhikitError, SeriesError


@dataclass(frozen=True)
class IndexRecord:
    quarter: QuarterId
    hhi_bounds: HhiBounds
    cr4: Optional[float]
    top: Tuple[str, float]
    hhi_class_lower: ConcentrationClass
    hhi_class_upper: ConcentrationClass
    cr4_class: Optional[CompetitionClass]
    snapshot: Optional[MarketSnapshot] = None

    @property
    def gap_pct(self) -> float:
        return relative_gap_pct(self.hhi_bounds)

    @property
    def hhi_class_label(self) -> str:
        lo, hi = self.hhi_class_lower, self.hhi_class_upper
        if lo == hi:
            return lo.label
        return f"{lo.label}..{hi.label}"


def relative_gap_pct(bounds: HhiBounds) -> float:
    """``(upper - lower) / lower`` in percent; 0 when both bounds are 0."""
    if bounds.lower > 0:
        return (bounds.upper - bounds.lower) / bounds.lower * 100.0
    return 0.0


@dataclass(frozen=True)
class GapStats:
    gaps_pct: Tuple[float, ...]

    @property
    def max_gap_pct(self) -> float:
        return max(self.gaps_pct)

    def fraction_below(self, threshold_pct: float) -> float:
        """Fraction of quarters whose relative gap is strictly below the threshold."""
        below = sum(1 for g in self.gaps_pct if g < threshold_pct)
        return below / len(self.gaps_pct)

    def fractions(self, thresholds_pct: Iterable[float]) -> Dict[float, float]:
        return {t: self.fraction_below(t) for t in thresholds_pct}


@dataclass(frozen=True)
class CrossoverEvent:
    quarter: QuarterId
    previous_leader: str
    new_leader: str


@dataclass(frozen=True)
class SeriesReport:
    records: Tuple[IndexRecord, ...]
    gap_stats: GapStats
    crossovers: Tuple[CrossoverEvent, ...]
    k: int = 4


def index_record(quarter: QuarterId, snapshot: MarketSnapshot, k: int = 4) -> IndexRecord:
    bounds = hhi_bounds(snapshot)
    cr = None
    if len(snapshot.entries) >= k or snapshot.residual == 0.0:
        cr = cr_k(snapshot, k)
    return IndexRecord(
        quarter=quarter,
        hhi_bounds=bounds,
        cr4=cr,
        top=top_share(snapshot),
        hhi_class_lower=classify_hhi(bounds.lower),
        hhi_class_upper=classify_hhi(bounds.upper),
        cr4_class=None if cr is None else classify_cr4(cr),
        snapshot=snapshot,
    )


def gap_stats(records: Sequence[IndexRecord]) -> GapStats:
    if not records:
        raise EmptySeries("gap statistics need at least one record")
    return GapStats(tuple(r.gap_pct for r in records))


def detect_crossovers(records: Sequence[IndexRecord]) -> List[CrossoverEvent]:
    events = []
    for prev, cur in zip(records, records[1:]):
        if prev.top[0] != cur.top[0]:
            events.append(CrossoverEvent(cur.quarter, prev.top[0], cur.top[0]))
    return events


def analyze_series(dataset: QuarterlyDataset, k: int = 4) -> SeriesReport:
    """One :class:`IndexRecord` per quarter, ascending, plus gap and crossover summaries.

    Any core failure is re-raised as :class:`SeriesError` carrying the quarter.
    """
    qs = quarters(dataset)
    if not qs:
        raise EmptySeries("dataset has no quarters")
    records = []
    for q in qs:
        try:
            records.append(index_record(q, to_snapshot(dataset, q), k))
        except HhikitError as exc:
            raise SeriesError(q, exc) from exc
    return SeriesReport(
        records=tuple(records),
        gap_stats=gap_stats(records),
        crossovers=tuple(detect_crossovers(records)),
        k=k,
    )
