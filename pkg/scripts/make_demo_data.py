"""Regenerate src/hhikit/data/synthetic_os_sales.csv.

Invented numbers only. One incumbent ("sigma") declines while a challenger
("alpha") rises, overtaking it near the middle of 2007Q1-2015Q4 and
settling above 80% of unit sales, with the top four vendors holding more
than 99% in the final two years.
"""

import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "hhikit" / "data" / "synthetic_os_sales.csv"
N = 36
TOTAL = 300_000  # thousand units per quarter, constant for readability


def logistic(t, mid, width):
    return 1.0 / (1.0 + math.exp(-(t - mid) / width))


def weights(t):
    rise = logistic(t, 17.0, 2.6)
    return {
        "Alpha": 0.01 + 0.82 * rise,
        "Sigma": 0.003 + 0.62 * (1 - logistic(t, 16.0, 3.2)),
        "Iota": 0.03 + 0.12 * logistic(t, 6.0, 2.0),
        "Rho": 0.004 + 0.14 * math.exp(-((t - 10.0) / 8.0) ** 2),
        "Omega": 0.025 + 0.10 * (1 - logistic(t, 8.0, 3.0)),
        "Beta": 0.0015 + 0.035 * math.exp(-((t - 17.0) / 6.0) ** 2),
        "Lambda": 0.001 + 0.09 * (1 - logistic(t, 5.0, 3.0)),
    }


def main():
    lines = [
        "# Synthetic demonstration data. NOT real market data.",
        "quarter,vendor,units",
    ]
    for t in range(N):
        year, q = 2007 + t // 4, t % 4 + 1
        w = weights(t)
        smallest = min(w.values())
        # residual kept below the smallest named share
        w["others"] = 0.8 * smallest
        scale = TOTAL / sum(w.values())
        for name, v in w.items():
            lines.append(f"{year}Q{q},{name},{round(v * scale)}")
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(OUT)


if __name__ == "__main__":
    main()
