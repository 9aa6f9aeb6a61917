"""
ATOA on tidal traffic
=====================

Traffic alternates 150 low-variance slots with 150 high-variance slots. ATOA
predicts the phase from the variance of the last ``D`` slots and switches
between its greedy and UCB1 branches.
"""

import numpy as np

from edgebandit import build, default_threshold, run

config = build("tidal", {"horizon": 4000, "explore_slots": 2000, "seed": 1})
print("threshold a =", default_threshold(config.pattern.means, config.policy.window))

records, summary = run(config)
exploit = [r for r in records if r.phase == "exploit"]
agree = np.mean([(r.pred_state == 1) == (r.true_phase == "stable") for r in exploit])
print(f"predicted phase matches generator on {agree:.1%} of exploitation slots")
print("greedy-branch share:", np.mean([r.pred_state == 1 for r in exploit]))

###############################################################################
# Against the two baselines on the same tasks.

for name in ("atoa", "epsilon_greedy", "ucb1"):
    _, s = run(build("tidal", {"horizon": 4000, "explore_slots": 2000, "seed": 1, "policy.name": name}))
    print(f"{name:15s} final {s.final_avg_cost:.4f}  stable {s.stable_avg_cost:.4f}  unstable {s.unstable_avg_cost:.4f}")

###############################################################################
# The two limiting thresholds reduce ATOA to one of its branches.

inf_arms = [r.arm for r in run(build("tidal", {"horizon": 1000, "explore_slots": 500,
                                               "policy.threshold": float("inf")}))[0]]
greedy_arms = [r.arm for r in run(build("tidal", {"horizon": 1000, "explore_slots": 500,
                                                  "policy.name": "epsilon_greedy"}))[0]]
print("a=inf reproduces epsilon-greedy:", inf_arms == greedy_arms)
