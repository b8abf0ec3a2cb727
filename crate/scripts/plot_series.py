#!/usr/bin/env python3
"""Generic plotter for permspec CSV series (tails and staircase runs).

Usage:
    permspec simulate --d 2 --N 2000 --trials 100 --seed 7 --out tails.csv
    python3 scripts/plot_series.py tails.csv

Reads the CSV written by `permspec simulate` or `permspec staircase` (first
line is a `# config:` comment) and draws a histogram of the eigenvalue column
with reference lines at 2*sqrt(2d-1) and, when present, rho_m. Requires
matplotlib; the toolkit itself has no plotting dependency.
"""

import csv
import json
import math
import sys


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    path = sys.argv[1]
    with open(path) as f:
        first = f.readline()
        config = {}
        if first.startswith("# config:"):
            config = json.loads(first[len("# config:"):].strip())
        else:
            f.seek(0)
        rows = list(csv.DictReader(f))
    column = "lambda2" if "lambda2" in rows[0] else "top"
    values = [float(r[column]) for r in rows]

    command = config.get("command", {})
    params = next(iter(command.values()), {}) if isinstance(command, dict) else {}
    d = int(params.get("d", 2))
    bulk = 2.0 * math.sqrt(2 * d - 1)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(values, bins=max(10, len(values) // 5), color="#4878d0", alpha=0.85)
    ax.axvline(bulk, color="k", linestyle="--", label=f"2√(2d−1) = {bulk:.4f}")
    if "m" in params:
        m = int(params["m"])
        a = 2 * m - 1
        if a * a > 2 * d - 1:
            rho = a + (2 * d - 1) / a
            ax.axvline(rho, color="#d65f5f", linestyle=":", label=f"ρ_{m} = {rho:.4f}")
    ax.set_xlabel(column)
    ax.set_ylabel("trials")
    ax.legend()
    out = path.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
