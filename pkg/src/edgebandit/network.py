"""Static edge-network description and the closed-form latency model.

Every user either runs its whole task locally or, when the task exceeds what
it can finish inside the deadline, runs the capped part locally and ships the
excess to one edge server. The slot cost is the worst per-user latency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NetworkProfile:
    """Users, servers, link rates, cycle cost ``d`` and deadline ``tau``."""

    user_capacities: tuple[float, ...]
    server_capacities: tuple[float, ...]
    link_capacity: tuple[tuple[float, ...], ...]
    cycles_per_bit: float = 1.0
    deadline: float = 1.0

    def __post_init__(self):
        users = tuple(float(c) for c in self.user_capacities)
        servers = tuple(float(c) for c in self.server_capacities)
        links = tuple(tuple(float(r) for r in row) for row in self.link_capacity)
        object.__setattr__(self, "user_capacities", users)
        object.__setattr__(self, "server_capacities", servers)
        object.__setattr__(self, "link_capacity", links)
        object.__setattr__(self, "cycles_per_bit", float(self.cycles_per_bit))
        object.__setattr__(self, "deadline", float(self.deadline))

        if not servers:
            raise ValueError("at least one server is required")
        if len(users) < len(servers) + 1:
            raise ValueError(
                f"need more users than servers, got {len(users)} users and {len(servers)} servers"
            )
        if len(links) != len(users) or any(len(row) != len(servers) for row in links):
            raise ValueError(f"link_capacity must have shape {len(users)}x{len(servers)}")
        values = users + servers + tuple(r for row in links for r in row)
        if any(not v > 0 or not np.isfinite(v) for v in values):
            raise ValueError("capacities and link rates must be positive and finite")
        if not self.cycles_per_bit > 0 or not self.deadline > 0:
            raise ValueError("cycles_per_bit and deadline must be positive")

    @property
    def num_users(self) -> int:
        return len(self.user_capacities)

    @property
    def num_servers(self) -> int:
        return len(self.server_capacities)

    @classmethod
    def uniform_links(cls, user_capacities, server_capacities, rate, **kwargs) -> "NetworkProfile":
        links = [[rate] * len(server_capacities) for _ in user_capacities]
        return cls(tuple(user_capacities), tuple(server_capacities), links, **kwargs)


@dataclass(frozen=True)
class SlotWorkload:
    """Task sizes (bits) generated by every user in one slot."""

    sizes: tuple[float, ...]
    slot_index: int = 1

    def __post_init__(self):
        sizes = tuple(float(s) for s in self.sizes)
        if any(not s >= 0 for s in sizes):
            raise ValueError("task sizes must be nonnegative")
        if self.slot_index < 1:
            raise ValueError("slot_index starts at 1")
        object.__setattr__(self, "sizes", sizes)


def local_size_cap(profile: NetworkProfile, user: int) -> float:
    """Largest task size user ``user`` finishes locally within the deadline."""
    return profile.deadline * profile.user_capacities[user] / profile.cycles_per_bit


def offload_size(profile: NetworkProfile, user: int, size: float) -> float:
    return max(0.0, size - local_size_cap(profile, user))


def local_latency(profile: NetworkProfile, user: int, size: float) -> float:
    return profile.cycles_per_bit * size / profile.user_capacities[user]


def offload_latency(profile: NetworkProfile, user: int, server: int, size: float) -> float:
    """Latency of a split task: local window, uplink, then remote compute.

    ``size`` is the full task size. Raises ``ValueError`` when nothing would
    be offloaded, since such tasks must be resolved to local execution first.
    """
    excess = offload_size(profile, user, size)
    if excess <= 0.0:
        raise ValueError(
            f"user {user}: task of size {size} fits locally, offloading is undefined"
        )
    return (
        profile.deadline
        + excess / profile.link_capacity[user][server]
        + profile.cycles_per_bit * excess / profile.server_capacities[server]
    )


def latency_table(profile: NetworkProfile, workload: SlotWorkload) -> np.ndarray:
    """Per-user latency of every action, shape ``(I, J + 1)``.

    Column 0 is local execution and column ``j + 1`` offloads to server ``j``.
    Users whose task fits locally get the local latency in every column, so a
    row lookup already applies effective-action resolution.
    """
    if len(workload.sizes) != profile.num_users:
        raise ValueError(
            f"workload has {len(workload.sizes)} users, profile has {profile.num_users}"
        )
    table = np.empty((profile.num_users, profile.num_servers + 1))
    for i, size in enumerate(workload.sizes):
        local = local_latency(profile, i, size)
        table[i, 0] = local
        if offload_size(profile, i, size) > 0.0:
            for j in range(profile.num_servers):
                table[i, j + 1] = offload_latency(profile, i, j, size)
        else:
            table[i, 1:] = local
    return table


def system_cost(profile: NetworkProfile, workload: SlotWorkload, arm) -> float:
    """Slot cost: the maximum latency over users under joint decision ``arm``.

    ``arm`` is a :class:`~edgebandit.arms.JointArm` or any sequence of per-user
    entries (``-1`` for local, ``j`` for server ``j``).
    """
    entries = getattr(arm, "entries", arm)
    if len(entries) != profile.num_users:
        raise ValueError(f"arm has {len(entries)} entries, expected {profile.num_users}")
    worst = 0.0
    for i, (entry, size) in enumerate(zip(entries, workload.sizes)):
        if entry < 0 or offload_size(profile, i, size) <= 0.0:
            latency = local_latency(profile, i, size)
        else:
            latency = offload_latency(profile, i, entry, size)
        worst = max(worst, latency)
    return worst
