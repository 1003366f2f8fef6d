"""Market concentration analytics: HHI, CR-k, truncated-data HHI bounds."""

from .core import (
    BoundBranch,
    CompetitionClass,
    ConcentrationClass,
    HhiBounds,
    MarketSnapshot,
    bounds_oracle,
    classify_cr4,
    classify_hhi,
    complete,
    cr_k,
    hhi,
    hhi_bounds,
    merge,
    merger_delta,
    oracle_completions,
    top_share,
)
from .dataset import QuarterId, QuarterlyDataset, SalesRecord, parse_csv, quarters, to_csv, to_snapshot
from .series import (
    CrossoverEvent,
    GapStats,
    IndexRecord,
    SeriesReport,
    analyze_series,
    detect_crossovers,
    gap_stats,
)

__version__ = "0.1.0"
