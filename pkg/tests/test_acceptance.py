"""Exit criteria for the package. Each test prints one PASS/FAIL line in the
``acceptance criteria`` section of the pytest summary.

Run just these with ``pytest tests/test_acceptance.py -v``.
"""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

import spreadsheet_oracle
from conftest import ROOT
from hhikit import (
    BoundBranch,
    CompetitionClass,
    ConcentrationClass,
    MarketSnapshot,
    analyze_series,
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
    parse_csv,
)
from hhikit.dataset import synthetic_demo

snap = MarketSnapshot.from_shares
FLIP_CSV = ROOT / "fixtures" / "duopoly_flip.csv"
FLIP_GOLDEN = ROOT / "fixtures" / "duopoly_flip.golden.csv"


def _random_shares(rng, n):
    ws = [rng.random() + 1e-9 for _ in range(n)]
    total = math.fsum(ws)
    return [w / total for w in ws]


def _truncated(rng, m, residual, s_m):
    """Named top-m shares summing to 1 - residual with smallest exactly ``s_m``."""
    extra = 1.0 - residual - m * s_m
    assert extra >= -1e-15
    if m == 1:
        return [1.0 - residual]
    cuts = sorted(rng.random() for _ in range(m - 2))
    parts = [b - a for a, b in zip([0.0] + cuts, cuts + [1.0])]
    return [s_m + max(extra, 0.0) * p for p in parts] + [s_m]


@pytest.mark.criterion("range: 1000 random complete snapshots satisfy 1/n <= hhi <= 1; equal shares hit 1/n to 1e-12; < 1 s")
def test_range_property():
    rng = random.Random(20160401)
    start = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(1, 50)
        value = hhi(snap(_random_shares(rng, n)))
        assert 1.0 / n <= value <= 1.0
    for n in range(1, 51):
        assert abs(hhi(snap([1.0 / n] * n)) - 1.0 / n) <= 1e-12
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion("bounds vs oracle: 200 truncated snapshots (M <= 6, R <= 0.5, g = 200) bracket the oracle; aligned cases attain upper to 1e-9; < 30 s")
def test_bounds_vs_oracle():
    rng = random.Random(7)
    g = 200
    start = time.perf_counter()
    aligned_checked = 0
    for i in range(200):
        m = rng.randint(1, 6)
        residual = rng.uniform(0.005, 0.5)
        chunk = residual / g
        if i % 2 == 0 and m > 1:
            # smallest named share an exact number of oracle chunks
            c_max = int((1.0 - residual) / m / chunk)
            c = rng.randint(1, max(1, min(c_max, 3 * g)))
            s_m = c * chunk
            aligned = True
        else:
            s_m = rng.uniform(chunk, (1.0 - residual) / m)
            aligned = False
        shares = _truncated(rng, m, residual, s_m)
        s = snap(shares, residual)
        b = hhi_bounds(s)
        min_found, max_found = bounds_oracle(s, g)
        assert b.lower <= min_found
        assert max_found <= b.upper
        if aligned:
            assert b.upper - max_found <= 1e-9
            aligned_checked += 1
    assert aligned_checked >= 50
    assert time.perf_counter() - start < 30.0


@pytest.mark.criterion("bound branches: complete, small-residual and two large-residual examples reproduce to 1e-12")
def test_table1_branches():
    cases = [
        ([0.7, 0.3], 0.0, 0.58, 0.58, BoundBranch.COMPLETE, None),
        ([0.5, 0.3], 0.2, 0.34, 0.38, BoundBranch.SMALL_RESIDUAL, None),
        ([0.5, 0.1], 0.4, 0.26, 0.30, BoundBranch.LARGE_RESIDUAL, 4),
        ([0.6, 0.15], 0.25, 0.3825, 0.415, BoundBranch.LARGE_RESIDUAL, 1),
    ]
    for shares, r, lower, upper, branch, q in cases:
        b = hhi_bounds(snap(shares, r))
        assert abs(b.lower - lower) <= 1e-12
        assert abs(b.upper - upper) <= 1e-12
        assert b.branch is branch
        if q is not None:
            assert b.q == q


@pytest.mark.criterion("classification ladders: threshold sweep matches the decided boundaries; 0.75 -> highly concentrated, CR4 0.99 -> tight oligopoly")
def test_classification_sweep():
    U, M, H = (ConcentrationClass.UNCONCENTRATED, ConcentrationClass.MODERATELY_CONCENTRATED,
               ConcentrationClass.HIGHLY_CONCENTRATED)
    P, E, L, T = (CompetitionClass.PERFECT_COMPETITION, CompetitionClass.EFFECTIVE_COMPETITION,
                  CompetitionClass.LOOSE_OLIGOPOLY, CompetitionClass.TIGHT_OLIGOPOLY)
    expected = {
        0: (U, P), 0.1: (U, E), 0.15: (M, E), 0.2: (M, E), 0.25: (M, E), 0.3: (H, E),
        0.4: (H, L), 0.6: (H, L), 0.75: (H, T), 0.99: (H, T), 1: (H, T),
    }
    for value, (h, c) in expected.items():
        assert classify_hhi(value) is h, value
        assert classify_cr4(value) is c, value
    assert classify_hhi(0.75) is ConcentrationClass.HIGHLY_CONCENTRATED
    assert classify_cr4(0.99) is CompetitionClass.TIGHT_OLIGOPOLY


@pytest.mark.criterion("CR4 truncation exactness: 100 truncated snapshots with >= 4 named vendors equal CR4 of every oracle completion exactly")
def test_cr4_truncation_exactness():
    rng = random.Random(11)
    checked = 0
    for _ in range(100):
        m = rng.randint(4, 8)
        residual = rng.uniform(0.001, 0.5)
        s_m = rng.uniform(residual / 200, (1.0 - residual) / m)
        s = snap([(f"v{i}", x) for i, x in enumerate(_truncated(rng, m, residual, s_m))], residual)
        expected = cr_k(s, 4)
        for hidden in oracle_completions(s, 200):
            assert cr_k(complete(s, hidden), 4) == expected
            checked += 1
    assert checked >= 200


@pytest.mark.criterion("merger property: 500 random complete snapshots, delta = 2*s_a*s_b to 1e-12 and >= 0")
def test_merger_property():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(2, 30)
        s = snap([(f"v{i}", x) for i, x in enumerate(_random_shares(rng, n))])
        a, b = rng.sample(s.names, 2)
        d = merger_delta(s, a, b)
        assert d >= 0
        assert abs(d - 2 * s.share_of(a) * s.share_of(b)) <= 1e-12
        assert abs((hhi(merge(s, a, b)) - hhi(s)) - d) <= 1e-12


@pytest.mark.criterion("end-to-end golden: analyze on duopoly_flip.csv is byte-identical to the golden CSV, one crossover at 2015Q1, fraction_below(3.5%) equals the oracle")
def test_end_to_end_golden():
    result = subprocess.run(
        [sys.executable, "-m", "hhikit", "analyze", "--input", "fixtures/duopoly_flip.csv",
         "--format", "csv"],
        cwd=ROOT, capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout == FLIP_GOLDEN.read_text(encoding="utf-8")

    report = analyze_series(parse_csv(FLIP_CSV.read_bytes()))
    assert [(str(e.quarter), e.previous_leader, e.new_leader) for e in report.crossovers] == [
        ("2015Q1", "alpha", "beta")
    ]
    data = spreadsheet_oracle.load(FLIP_CSV)
    gaps = [spreadsheet_oracle.quarter_row(rows)["gap"] for rows in data.values()]
    oracle_fraction = Fraction(sum(g < Fraction(35, 10) for g in gaps), len(gaps))
    assert report.gap_stats.fraction_below(3.5) == float(oracle_fraction)


@pytest.mark.criterion("demo dataset shape: leader share > 0.8 forces hhi_lower >= 0.64 and highly concentrated; CR4 > 0.99 in the four-vendor quarters")
def test_demo_dataset_shape():
    report = analyze_series(synthetic_demo())
    late = [r for r in report.records if r.top[1] > 0.8]
    assert len(late) >= 4
    assert all(r.quarter.year >= 2014 for r in late)
    for r in late:
        assert r.hhi_bounds.lower >= 0.64
        assert r.hhi_class_lower is ConcentrationClass.HIGHLY_CONCENTRATED
        assert r.hhi_class_upper is ConcentrationClass.HIGHLY_CONCENTRATED
    designed = [r for r in report.records if r.quarter.year >= 2014]
    assert len(designed) == 8
    for r in designed:
        assert r.cr4 > 0.99
        assert r.cr4_class is CompetitionClass.TIGHT_OLIGOPOLY
    assert len(report.crossovers) == 1
