"""Joint offloading decisions and their mixed-radix indexing.

An arm assigns every user either local execution or one server. Arms are
numbered in base ``J + 1`` with user 0 as the least significant digit; digit 0
means local and digit ``k`` means server ``k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import NetworkProfile, SlotWorkload, offload_size

LOCAL = -1
DEFAULT_ARM_CAP = 10**6


@dataclass(frozen=True)
class JointArm:
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(e < LOCAL for e in self.entries):
            raise ValueError(f"invalid arm entries {self.entries}")

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "[" + ",".join("L" if e == LOCAL else f"S{e}" for e in self.entries) + "]"

    def index(self, num_servers: int) -> int:
        n = 0
        for entry in reversed(self.entries):
            if entry >= num_servers:
                raise ValueError(f"server {entry} out of range for {num_servers} servers")
            n = n * (num_servers + 1) + (entry + 1)
        return n

    @classmethod
    def from_index(cls, n: int, num_users: int, num_servers: int) -> "JointArm":
        base = num_servers + 1
        if not 0 <= n < base**num_users:
            raise ValueError(f"arm index {n} out of range")
        entries = []
        for _ in range(num_users):
            n, digit = divmod(n, base)
            entries.append(digit - 1)
        return cls(tuple(entries))


class ArmSpace:
    """All ``(J + 1) ** I`` joint arms in canonical order.

    ``digits[n, i]`` is user ``i``'s action column for arm ``n`` and can be used
    to index a :func:`~edgebandit.network.latency_table` row directly.
    """

    def __init__(self, num_users: int, num_servers: int, cap: int = DEFAULT_ARM_CAP):
        if num_users < 1 or num_servers < 1:
            raise ValueError("need at least one user and one server")
        base = num_servers + 1
        count = base**num_users
        if count > cap:
            raise ValueError(
                f"{count} joint arms for {num_users} users and {num_servers} servers exceeds cap {cap}"
            )
        self.num_users = num_users
        self.num_servers = num_servers
        n = np.arange(count)
        self.digits = np.stack([(n // base**i) % base for i in range(num_users)], axis=1)

    def __len__(self):
        return self.digits.shape[0]

    def __getitem__(self, n: int) -> JointArm:
        return JointArm(tuple(int(d) - 1 for d in self.digits[n]))

    def __iter__(self):
        return (self[n] for n in range(len(self)))

    def index(self, arm: JointArm) -> int:
        if len(arm) != self.num_users:
            raise ValueError(f"arm has {len(arm)} entries, expected {self.num_users}")
        return arm.index(self.num_servers)

    def costs(self, table: np.ndarray) -> np.ndarray:
        """System cost of every arm given a per-user latency table."""
        return table[np.arange(self.num_users), self.digits].max(axis=1)


def enumerate_arms(num_users: int, num_servers: int, cap: int = DEFAULT_ARM_CAP) -> list[JointArm]:
    return list(ArmSpace(num_users, num_servers, cap))


def resolve_effective_actions(
    arm: JointArm, workload: SlotWorkload, profile: NetworkProfile
) -> list[int]:
    """Replace offload entries with ``LOCAL`` for users whose task fits locally."""
    if not len(arm) == len(workload.sizes) == profile.num_users:
        raise ValueError("arm, workload and profile disagree on the number of users")
    return [
        LOCAL if entry == LOCAL or offload_size(profile, i, size) <= 0.0 else entry
        for i, (entry, size) in enumerate(zip(arm.entries, workload.sizes))
    ]
