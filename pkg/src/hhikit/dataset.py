"""Quarterly unit-sales CSV ingestion and normalization into snapshots.

Input format::

    quarter,vendor,units
    2015Q4,android,1000
    2015Q4,others,50

Vendors are matched case-insensitively after trimming; the first spelling
seen is kept for display. The residual bucket is any vendor whose label
matches ``residual_label`` (``"others"`` by default; a tuple of aliases is
also accepted, at most one of which may appear per quarter).
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from fractions import Fraction
from dataclasses import dataclass, field
from typing import IO, Iterable, List, Tuple, Union

from .core import MarketSnapshot
from .errors import (
    DuplicateKey,
    MalformedRow,
    MultipleResiduals,
    NoNamedVendors,
    UnknownQuarter,
    ZeroTotal,
)

log = logging.getLogger(__name__)

HEADER = ("quarter", "vendor", "units")
_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")


@dataclass(frozen=True, order=True)
class QuarterId:
    year: int
    quarter: int

    def __post_init__(self):
        if not 1 <= self.quarter <= 4:
            raise ValueError(f"quarter must be in 1..4, got {self.quarter!r}")

    @classmethod
    def parse(cls, text: str) -> "QuarterId":
        m = _QUARTER_RE.match(text.strip())
        if m is None:
            raise ValueError(f"bad quarter {text!r}; expected YYYYQn with n in 1..4")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"{self.year:04d}Q{self.quarter}"


@dataclass(frozen=True)
class SalesRecord:
    quarter: QuarterId
    vendor: str
    units: float


def vendor_key(name: str) -> str:
    return name.strip().lower()


@dataclass(frozen=True)
class QuarterlyDataset:
    records: Tuple[SalesRecord, ...] = ()
    residual_label: Union[str, Tuple[str, ...]] = "others"
    _display: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        residuals = set()
        display = {}
        for rec in self.records:
            key = vendor_key(rec.vendor)
            if (rec.quarter, key) in seen:
                raise DuplicateKey(f"duplicate vendor {rec.vendor!r} in {rec.quarter}")
            seen.add((rec.quarter, key))
            if not (rec.units >= 0 and math.isfinite(rec.units)):
                raise MalformedRow(f"invalid units {rec.units!r} for {rec.vendor!r}")
            if self.is_residual(rec.vendor):
                if rec.quarter in residuals:
                    raise MultipleResiduals(f"two residual rows in {rec.quarter}")
                residuals.add(rec.quarter)
            display.setdefault(key, rec.vendor.strip())
        object.__setattr__(self, "_display", display)

    def is_residual(self, vendor: str) -> bool:
        return vendor_key(vendor) in _residual_keys(self.residual_label)

    def display_name(self, vendor: str) -> str:
        return self._display.get(vendor_key(vendor), vendor.strip())


def _residual_keys(label) -> frozenset:
    if isinstance(label, str):
        label = (label,)
    return frozenset(vendor_key(x) for x in label)


def _open_text(source) -> IO[str]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def _data_lines(stream: IO[str]) -> Iterable[Tuple[int, str]]:
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, line


def parse_csv(
    source: Union[bytes, str, IO[bytes], IO[str]],
    residual_label: Union[str, Tuple[str, ...]] = "others",
) -> QuarterlyDataset:
    """Parse and validate a ``quarter,vendor,units`` CSV.

    ``source`` may be raw bytes, already-decoded text, or a binary or text
    stream. Raises :class:`MalformedRow`, :class:`DuplicateKey` or
    :class:`MultipleResiduals` naming the 1-based line of the offending row.
    """
    stream = _open_text(source)
    lines = _data_lines(stream)
    try:
        lineno, header_line = next(lines)
    except StopIteration:
        raise MalformedRow("missing header row 'quarter,vendor,units'", line=1) from None
    header = next(csv.reader([header_line]))
    if tuple(h.strip().lower() for h in header) != HEADER:
        raise MalformedRow(
            f"expected header 'quarter,vendor,units', got {header_line.strip()!r}",
            line=lineno,
        )

    records: List[SalesRecord] = []
    keys = {}
    residual_lines = {}
    res_keys = _residual_keys(residual_label)
    for lineno, line in lines:
        row = next(csv.reader([line]))
        if len(row) != 3:
            raise MalformedRow(f"expected 3 fields, got {len(row)}", line=lineno)
        q_text, vendor, u_text = (c.strip() for c in row)
        try:
            quarter = QuarterId.parse(q_text)
        except ValueError as exc:
            raise MalformedRow(str(exc), line=lineno) from None
        if not vendor:
            raise MalformedRow("empty vendor", line=lineno)
        try:
            units = float(u_text)
        except ValueError:
            raise MalformedRow(f"non-numeric units {u_text!r}", line=lineno) from None
        if not math.isfinite(units) or units < 0:
            raise MalformedRow(f"units must be a finite non-negative number, got {u_text!r}", line=lineno)
        key = (quarter, vendor_key(vendor))
        if key in keys:
            raise DuplicateKey(
                f"vendor {vendor!r} repeats line {keys[key]} in {quarter}", line=lineno
            )
        keys[key] = lineno
        if key[1] in res_keys:
            if quarter in residual_lines:
                raise MultipleResiduals(f"second residual row in {quarter}", line=lineno)
            residual_lines[quarter] = lineno
        records.append(SalesRecord(quarter, vendor, units))
    return QuarterlyDataset(tuple(records), residual_label)


def quarters(dataset: QuarterlyDataset) -> List[QuarterId]:
    return sorted({rec.quarter for rec in dataset.records})


def to_snapshot(dataset: QuarterlyDataset, quarter: QuarterId) -> MarketSnapshot:
    """Normalize one quarter's units into shares of the quarter total.

    The residual row (if any) counts toward the total and becomes the
    snapshot residual. Named vendors with zero units are dropped.
    """
    rows = [rec for rec in dataset.records if rec.quarter == quarter]
    if not rows:
        raise UnknownQuarter(f"quarter {quarter} not in dataset")
    # exact rational totals keep shares invariant under exact rescaling of units
    total = sum(Fraction(rec.units) for rec in rows)
    if total <= 0:
        raise ZeroTotal(f"all units are zero in {quarter}")
    named = []
    residual = 0.0
    for rec in rows:
        if dataset.is_residual(rec.vendor):
            residual = float(Fraction(rec.units) / total)
        elif rec.units > 0:
            named.append((dataset.display_name(rec.vendor), float(Fraction(rec.units) / total)))
    if not named:
        raise NoNamedVendors(f"no named vendor with positive units in {quarter}")
    snap = MarketSnapshot.from_shares(named, residual)
    if residual > snap.smallest_share:
        log.warning(
            "%s: residual share %.6f exceeds smallest named share %.6f; "
            "bounds still assume each hidden firm is no larger than the smallest named one",
            quarter, residual, snap.smallest_share,
        )
    return snap


def to_csv(dataset: QuarterlyDataset) -> str:
    """Serialize back to the input CSV format, quarters ascending."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for rec in sorted(dataset.records, key=lambda r: (r.quarter, vendor_key(r.vendor))):
        writer.writerow([str(rec.quarter), rec.vendor, repr(rec.units)])
    return buf.getvalue()


def synthetic_demo() -> QuarterlyDataset:
    """The bundled invented 2007Q1-2015Q4 dataset (not real market data)."""
    from importlib.resources import files

    return parse_csv(files("hhikit").joinpath("data/synthetic_os_sales.csv").read_bytes())
