"""
The latency model and the clairvoyant optimum
=============================================

Builds the six-user, two-server network used by the presets, draws one slot
of tasks and looks at what every joint decision would cost.
"""

import numpy as np

from edgebandit import ArmSpace, SeededSource, build, draw_slot, latency_table, oracle_choose, system_cost

config = build("tidal")
profile, pattern = config.profile, config.pattern
print("server capacities:", profile.server_capacities)
print("local caps:", [profile.deadline * c / profile.cycles_per_bit for c in profile.user_capacities])

###############################################################################
# One slot of tasks. Rows of the table are users, columns are
# local / server 0 / server 1. Users whose task fits locally show the local
# latency in every column.

workload = draw_slot(pattern, SeededSource(0), slot=1)
print("sizes:", np.round(workload.sizes, 2))
table = latency_table(profile, workload)
print(np.round(table, 4))

###############################################################################
# All 729 joint arms at once, and the same number through the scalar path.

arms = ArmSpace(profile.num_users, profile.num_servers)
costs = arms.costs(table)
best, joint, decomposed = oracle_choose(profile, workload, arms)
print(f"{len(arms)} arms, cheapest {arms[best]} at {joint:.4f}, per-user optimum {decomposed:.4f}")
print("scalar path agrees:", system_cost(profile, workload, arms[best]) == costs[best])
print("spread of arm costs this slot:", round(costs.max() - costs.min(), 4))
