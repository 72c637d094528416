"""Weighted capacity sweep: LP pipeline vs the combined class-based greedy.

Reproduces the comparison methodology at desk scale: both algorithms run
over a grid of constants, each reports its best value, and the CSV carries
the LP-to-greedy ratio per instance.
"""

import csv
import tempfile
from pathlib import Path

from sinrcap import GenConfig, PowerAssignment, run_compare

configs = [
    GenConfig(n=60, R=r, delta=d, weight_dist="ordinary", seed=10 * i)
    for i, (d, r) in enumerate((d, r) for d in (2.0, 8.0) for r in (6.0, 24.0))
]
sweep = [0.4, 0.8, 1.2, 1.6, 2.0]

out = Path(tempfile.gettempdir()) / "weighted_compare.csv"
records = run_compare(configs, sweep, trials=60, out_path=out,
                      power=PowerAssignment.linear())
print(f"wrote {out}")

print(f"{'delta':>6} {'R':>6} {'density':>8} {'best C':>7} {'LP':>9} "
      f"{'greedy':>9} {'LP/greedy':>9}")
by_key = {}
for rec in records:
    by_key.setdefault((rec.delta, rec.R), {})[rec.algo] = rec
for (d, r), recs in sorted(by_key.items()):
    lp, g, ratio = recs["lp"], recs["greedy"], recs["ratio"]
    print(f"{d:6.1f} {r:6.1f} {60 / r ** 2:8.3f} {lp.constant:7.2f} "
          f"{lp.value:9.2f} {g.value:9.2f} {ratio.ratio:9.3f}")

print("\nfirst CSV rows:")
with open(out) as fh:
    for row in list(csv.reader(fh))[:4]:
        print(" ", ",".join(row[:9]))
