"""
Epsilon-greedy and UCB1 under stable and unstable traffic
=========================================================

Desk-scale version (4000 slots, 2000 of them exploration) of the comparison
between the two classic policies. Both policies see identical task sequences
for a given seed.
"""

import numpy as np

from edgebandit import build, run

DESK = {"horizon": 4000, "explore_slots": 2000}
SEEDS = range(5)


def mean_final(preset, **values):
    return np.mean([run(build(preset, {**DESK, "seed": s, **values}))[1].final_avg_cost for s in SEEDS])


for preset in ("stable", "unstable"):
    print(f"--- {preset} ---")
    for eps in (0.01, 0.1, 0.3):
        print(f"epsilon-greedy eps={eps:<5} {mean_final(preset, **{'policy.name': 'epsilon_greedy', 'policy.epsilon': eps}):.4f}")
    for xi in (0.1, 1.0, 5.0):
        print(f"UCB1           xi={xi:<6} {mean_final(preset, **{'policy.name': 'ucb1', 'policy.xi': xi}):.4f}")

###############################################################################
# The running average over time for one seed, sampled every 500 slots.

records, _ = run(build("unstable", {**DESK, "seed": 0, "policy.name": "ucb1"}))
print([round(r.avg_cost, 4) for r in records[499::500]])
