"""
Parameter sweeps: window length and server capacities
=====================================================

Sweeps run every override under every seed and return summaries keyed by
``(override, seed)``. ``write_summary`` turns them into a stable JSON file.
"""

import tempfile
from collections import defaultdict
from pathlib import Path

import numpy as np

from edgebandit import build, run_sweep
from edgebandit.engine import expand_grid
from edgebandit.io import write_summary

base = build("tidal", {"horizon": 4000, "explore_slots": 2000})
seeds = list(range(5))

results = run_sweep(base, expand_grid({"policy.window": [5, 10, 25, 50]}), seeds)
by_window = defaultdict(list)
for (override, _seed), summary in results.items():
    by_window[dict(override)["policy.window"]].append(summary.final_avg_cost)
for window, costs in sorted(by_window.items()):
    print(f"D={window:<3} mean final cost {np.mean(costs):.5f}")

###############################################################################
# Server capacities (gNB, eNB): widening the gap between them.

grid = expand_grid({"network.server_capacities": [[200.0, 150.0], [200.0, 100.0], [200.0, 50.0]]})
results = run_sweep(base, grid, seeds, workers=2)
for (override, seed), summary in sorted(results.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
    if seed == 0:
        print(dict(override), f"{summary.final_avg_cost:.4f}")

out = Path(tempfile.mkdtemp()) / "capacity_sweep.json"
write_summary(results, out)
print("wrote", out)
