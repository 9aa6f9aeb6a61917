"""Seeded per-slot task-size generation for stable, unstable and tidal traffic."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .network import SlotWorkload


class Mode(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    TIDAL = "tidal"


class Phase(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class TrafficPattern:
    """Normal task sizes with per-user mean and a phase-dependent spread.

    The sigma factors scale each user's mean into a standard deviation. With
    ``sigma_is_variance`` set, ``factor * mean`` is read as a variance instead.
    """

    means: tuple[float, ...]
    mode: Mode = Mode.TIDAL
    stable_sigma_factor: float = 0.1
    unstable_sigma_factor: float = 0.5
    stable_period: int = 150
    unstable_period: int = 150
    sigma_is_variance: bool = False

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not self.means or any(not m > 0 for m in self.means):
            raise ValueError("means must be positive")
        if self.stable_sigma_factor < 0 or self.unstable_sigma_factor < 0:
            raise ValueError("sigma factors must be nonnegative")
        if self.stable_period < 1 or self.unstable_period < 1:
            raise ValueError("periods must be at least one slot")

    @classmethod
    def linear_means(cls, num_users: int, step: float = 10.0, **kwargs) -> "TrafficPattern":
        """Means ``step * i`` for users ``i = 1..num_users``."""
        return cls(tuple(step * i for i in range(1, num_users + 1)), **kwargs)

    def sigmas(self, phase: Phase) -> np.ndarray:
        factor = self.stable_sigma_factor if phase is Phase.STABLE else self.unstable_sigma_factor
        spread = factor * np.asarray(self.means)
        return np.sqrt(spread) if self.sigma_is_variance else spread


def phase_of(pattern: TrafficPattern, slot: int) -> Phase:
    if slot < 1:
        raise ValueError("slots are numbered from 1")
    if pattern.mode is Mode.STABLE:
        return Phase.STABLE
    if pattern.mode is Mode.UNSTABLE:
        return Phase.UNSTABLE
    offset = (slot - 1) % (pattern.stable_period + pattern.unstable_period)
    return Phase.STABLE if offset < pattern.stable_period else Phase.UNSTABLE


class SeededSource:
    """Single-owner random stream built on numpy's PCG64.

    ``stream`` selects an independent substream of the same seed, which keeps
    workload draws separate from policy-internal randomness.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed & (2**64 - 1), self.stream]))
        )

    def normal(self, loc, scale) -> np.ndarray:
        return self.generator.normal(loc, scale)

    def random(self) -> float:
        return float(self.generator.random())

    def integers(self, high: int) -> int:
        return int(self.generator.integers(high))


def draw_slot(pattern: TrafficPattern, source: SeededSource, slot: int) -> SlotWorkload:
    """Draw one size per user, in user order, clamping negatives to zero."""
    phase = phase_of(pattern, slot)
    means = np.asarray(pattern.means)
    sizes = np.maximum(source.normal(means, pattern.sigmas(phase)), 0.0)
    return SlotWorkload(tuple(sizes.tolist()), slot)


def dump_trace(pattern: TrafficPattern, seed: int, slots: int, path) -> None:
    """Write ``slot,user,size,phase`` rows for the first ``slots`` slots."""
    source = SeededSource(seed, stream=0)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["slot", "user", "size", "phase"])
        for t in range(1, slots + 1):
            workload = draw_slot(pattern, source, t)
            phase = phase_of(pattern, t).value
            for i, size in enumerate(workload.sizes):
                writer.writerow([t, i, format(size, ".17g"), phase])
