"""Text, CSV and SVG renderings of a :class:`~hhikit.series.SeriesReport`."""

from __future__ import annotations

import csv
import io
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .errors import EmptySeries
from .series import SeriesReport

CSV_HEADER = (
    "quarter", "hhi_lower", "hhi_upper", "gap_pct", "cr4",
    "top_vendor", "top_share", "hhi_class", "cr4_class",
)
PLOT_METRICS = ("shares", "hhi", "cr4", "top_share")

WIDTH, HEIGHT = 800, 500
PLOT_LEFT, PLOT_RIGHT = 60.0, 620.0
PLOT_TOP, PLOT_BOTTOM = 40.0, 440.0
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def _fmt_threshold(t: float) -> str:
    return f"{t:g}"


def report_rows(report: SeriesReport) -> List[Tuple[str, ...]]:
    rows = []
    for rec in report.records:
        rows.append((
            str(rec.quarter),
            fmt(rec.hhi_bounds.lower),
            fmt(rec.hhi_bounds.upper),
            fmt(rec.gap_pct),
            fmt(rec.cr4),
            rec.top[0],
            fmt(rec.top[1]),
            rec.hhi_class_label,
            "" if rec.cr4_class is None else rec.cr4_class.label,
        ))
    return rows


def summary_lines(report: SeriesReport, thresholds_pct: Sequence[float]) -> List[Tuple[str, ...]]:
    lines = [("max_gap_pct", fmt(report.gap_stats.max_gap_pct))]
    for t in thresholds_pct:
        lines.append(("fraction_below_pct", _fmt_threshold(t), fmt(report.gap_stats.fraction_below(t))))
    for ev in report.crossovers:
        lines.append(("crossover", str(ev.quarter), ev.previous_leader, ev.new_leader))
    return lines


def render_csv(report: SeriesReport, thresholds_pct: Sequence[float] = (1.0, 3.5)) -> str:
    """Per-quarter rows followed by ``#``-prefixed summary lines."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(report_rows(report))
    for line in summary_lines(report, thresholds_pct):
        buf.write("# " + ",".join(line) + "\n")
    return buf.getvalue()


def render_table(report: SeriesReport, thresholds_pct: Sequence[float] = (1.0, 3.5)) -> str:
    header = list(CSV_HEADER)
    header[4] = f"cr{report.k}"
    rows = [header] + [list(r) for r in report_rows(report)]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    out = []
    for j, row in enumerate(rows):
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    out.append("")
    out.append(f"max gap: {fmt(report.gap_stats.max_gap_pct)}%")
    for t in thresholds_pct:
        out.append(
            f"quarters with gap below {_fmt_threshold(t)}%: "
            f"{fmt(report.gap_stats.fraction_below(t))}"
        )
    if report.crossovers:
        out.append("crossovers:")
        for ev in report.crossovers:
            out.append(f"  {ev.quarter}: {ev.previous_leader} -> {ev.new_leader}")
    else:
        out.append("crossovers: none")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# SVG


def _num(v: float) -> str:
    return f"{v:.2f}"


def _metric_series(report: SeriesReport, metric: str) -> List[Tuple[str, List[Optional[float]]]]:
    recs = report.records
    if metric == "hhi":
        return [
            ("hhi lower", [r.hhi_bounds.lower for r in recs]),
            ("hhi upper", [r.hhi_bounds.upper for r in recs]),
        ]
    if metric == "cr4":
        return [(f"cr{report.k}", [r.cr4 for r in recs])]
    if metric == "top_share":
        return [("top share", [r.top[1] for r in recs])]
    if metric == "shares":
        names: List[str] = []
        for r in recs:
            for n in r.snapshot.names:
                if n not in names:
                    names.append(n)
        series = []
        for n in names:
            vals = []
            for r in recs:
                shares = dict(r.snapshot.entries)
                vals.append(shares.get(n))
            series.append((n, vals))
        series.append(("others", [r.snapshot.residual for r in recs]))
        return series
    raise ValueError(f"unknown plot metric {metric!r}; choose from {', '.join(PLOT_METRICS)}")


def _runs(values: Sequence[Optional[float]]) -> List[List[int]]:
    runs, cur = [], []
    for i, v in enumerate(values):
        if v is None:
            if cur:
                runs.append(cur)
            cur = []
        else:
            cur.append(i)
    if cur:
        runs.append(cur)
    return runs


def render_svg(report: SeriesReport, metric: str) -> str:
    """Deterministic 800x500 SVG 1.1 line chart of one metric over the quarters.

    Quarters are evenly spaced on x, y spans [0, 1]. Each series is drawn
    as one ``polyline`` per contiguous run of defined values; an isolated
    value is drawn as a ``circle`` marker, so undefined quarters show as
    breaks.
    """
    if not report.records:
        raise EmptySeries("cannot plot an empty series")
    series = _metric_series(report, metric)
    n = len(report.records)

    def x_at(i: int) -> float:
        if n == 1:
            return (PLOT_LEFT + PLOT_RIGHT) / 2
        return PLOT_LEFT + i * (PLOT_RIGHT - PLOT_LEFT) / (n - 1)

    def y_at(v: float) -> float:
        return PLOT_BOTTOM - v * (PLOT_BOTTOM - PLOT_TOP)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<title>{escape(metric)}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        '<g class="axes" stroke="#000000" stroke-width="1">',
        f'<line x1="{_num(PLOT_LEFT)}" y1="{_num(PLOT_BOTTOM)}" x2="{_num(PLOT_RIGHT)}" y2="{_num(PLOT_BOTTOM)}"/>',
        f'<line x1="{_num(PLOT_LEFT)}" y1="{_num(PLOT_TOP)}" x2="{_num(PLOT_LEFT)}" y2="{_num(PLOT_BOTTOM)}"/>',
        '</g>',
        '<g class="y-ticks" text-anchor="end">',
    ]
    for tick in range(6):
        v = tick / 5
        y = y_at(v)
        out.append(
            f'<line x1="{_num(PLOT_LEFT - 4)}" y1="{_num(y)}" x2="{_num(PLOT_LEFT)}" '
            f'y2="{_num(y)}" stroke="#000000"/>'
        )
        out.append(f'<text x="{_num(PLOT_LEFT - 8)}" y="{_num(y + 4)}">{v:.1f}</text>')
    out.append('</g>')

    out.append('<g class="x-labels" text-anchor="middle">')
    seen_years = set()
    for i, rec in enumerate(report.records):
        if rec.quarter.year in seen_years:
            continue
        seen_years.add(rec.quarter.year)
        x = x_at(i)
        out.append(
            f'<line x1="{_num(x)}" y1="{_num(PLOT_BOTTOM)}" x2="{_num(x)}" '
            f'y2="{_num(PLOT_BOTTOM + 4)}" stroke="#000000"/>'
        )
        out.append(
            f'<text class="year-label" x="{_num(x)}" y="{_num(PLOT_BOTTOM + 20)}">'
            f'{rec.quarter.year}</text>'
        )
    out.append('</g>')

    for idx, (name, values) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        out.append(f'<g class="series" stroke="{color}" fill="{color}">')
        out.append(f'<title>{escape(name)}</title>')
        for run in _runs(values):
            if len(run) == 1:
                i = run[0]
                out.append(
                    f'<circle cx="{_num(x_at(i))}" cy="{_num(y_at(values[i]))}" r="3" stroke="none"/>'
                )
            else:
                pts = " ".join(f"{_num(x_at(i))},{_num(y_at(values[i]))}" for i in run)
                out.append(f'<polyline points="{pts}" fill="none" stroke-width="2"/>')
        out.append('</g>')

    out.append('<g class="legend">')
    for idx, (name, _) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        y = PLOT_TOP + idx * 18
        out.append(f'<rect x="640" y="{_num(y)}" width="12" height="12" fill="{color}"/>')
        out.append(f'<text x="658" y="{_num(y + 10)}">{escape(name)}</text>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
