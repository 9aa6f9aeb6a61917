"""Bandit policies over the joint arm space.

All policies share one protocol used by the engine:

* ``explore(slot)`` during the exploration phase,
* ``choose(slot)`` afterwards,
* ``observe(arm, cost, slot, workload)`` after every slot.

Costs are latencies and are minimized. Ties always go to the lowest arm index.
"""

from __future__ import annotations

import math

import numpy as np

from .arms import ArmSpace
from .network import NetworkProfile, SlotWorkload, latency_table
from .workload import SeededSource

STABLE = 1
UNSTABLE = -1


class ArmStats:
    """Pull counts and exact running-mean costs per arm."""

    def __init__(self, num_arms: int):
        self.counts = np.zeros(num_arms, dtype=np.int64)
        self.means = np.zeros(num_arms)

    def update(self, arm: int, cost: float) -> None:
        self.counts[arm] += 1
        self.means[arm] += (cost - self.means[arm]) / self.counts[arm]

    @property
    def explored(self) -> np.ndarray:
        return np.flatnonzero(self.counts > 0)

    @property
    def unexplored(self) -> np.ndarray:
        return np.flatnonzero(self.counts == 0)


class CostRange:
    """Running max minus min of every observed cost, with a prior until two observations."""

    def __init__(self, prior: float = 1.0):
        if prior < 0:
            raise ValueError("amplitude prior must be nonnegative")
        self.prior = float(prior)
        self.n = 0
        self.lo = math.inf
        self.hi = -math.inf

    def update(self, cost: float) -> None:
        self.n += 1
        self.lo = min(self.lo, cost)
        self.hi = max(self.hi, cost)

    @property
    def value(self) -> float:
        return self.hi - self.lo if self.n >= 2 else self.prior


class Policy:
    """Shared exploration step and statistics bookkeeping."""

    name = "policy"

    def __init__(self, num_arms: int, rng: SeededSource, stats: ArmStats | None = None):
        self.num_arms = num_arms
        self.rng = rng
        self.stats = stats if stats is not None else ArmStats(num_arms)
        self.last_state: int | None = None

    def explore(self, slot: int) -> int:
        """Uniform over never-pulled arms, or over all arms once none are left."""
        self.last_state = None
        return self._random_unexplored()

    def _random_unexplored(self) -> int:
        pool = self.stats.unexplored
        if pool.size:
            return int(pool[self.rng.integers(pool.size)])
        return self.rng.integers(self.num_arms)

    def choose(self, slot: int) -> int:
        raise NotImplementedError

    def observe(self, arm: int, cost: float, slot: int, workload: SlotWorkload | None = None) -> None:
        if cost < 0:
            raise ValueError("costs are latencies and cannot be negative")
        self.stats.update(arm, cost)


class EpsilonGreedy(Policy):
    """With probability ``epsilon`` pull an unexplored arm, else the best explored one.

    The explored set is exactly the arms with a nonzero pull count.
    """

    name = "epsilon_greedy"

    def __init__(self, num_arms, rng, epsilon: float = 0.01, stats=None):
        super().__init__(num_arms, rng, stats)
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        self.epsilon = float(epsilon)

    def choose(self, slot: int) -> int:
        self.last_state = None
        return self._greedy_step()

    def _greedy_step(self) -> int:
        if self.rng.random() < self.epsilon:
            return self._random_unexplored()
        return self.best_explored()

    def best_explored(self) -> int:
        counts = self.stats.counts
        if not counts.any():
            raise RuntimeError("no explored arms to exploit; run the exploration phase first")
        return int(np.argmin(np.where(counts > 0, self.stats.means, np.inf)))


class Ucb1(Policy):
    """Lower-confidence-bound selection for cost minimization.

    Never-pulled arms carry a zero mean, so they look cheap and get tried.
    """

    name = "ucb1"

    def __init__(self, num_arms, rng, xi: float = 0.1, u_prior: float = 1.0, stats=None,
                 amplitude: CostRange | None = None):
        super().__init__(num_arms, rng, stats)
        if not xi > 0:
            raise ValueError("xi must be positive")
        self.xi = float(xi)
        self.amplitude = amplitude if amplitude is not None else CostRange(u_prior)

    def estimates(self, slot: int) -> np.ndarray:
        if slot < 1:
            raise ValueError("slots are numbered from 1")
        radius = self.amplitude.value * np.sqrt(self.xi * math.log(slot) / (1.0 + self.stats.counts))
        return self.stats.means - radius

    def estimate(self, arm: int, slot: int) -> float:
        return float(self.estimates(slot)[arm])

    def choose(self, slot: int) -> int:
        self.last_state = None
        return int(np.argmin(self.estimates(slot)))

    def observe(self, arm, cost, slot, workload=None):
        super().observe(arm, cost, slot, workload)
        self.amplitude.update(cost)


def traffic_variance(pool: np.ndarray) -> float:
    """Mean over users of the population variance of their stored task sizes.

    ``pool`` has shape ``(samples, users)``.
    """
    pool = np.asarray(pool, dtype=float)
    centered = pool - pool.mean(axis=0)
    return float((centered**2).mean(axis=0).mean())


def predict_state(variance: float, threshold: float) -> int:
    return STABLE if variance <= threshold else UNSTABLE


def default_threshold(means, window: int) -> float:
    means = list(means)
    if not means or window < 1:
        raise ValueError("need at least one mean and a window of at least one slot")
    return 0.5 * window * sum(means) / len(means)


class MemoryPool:
    """Ring buffer of the last ``window`` task-size vectors."""

    def __init__(self, window: int, num_users: int):
        if window < 1:
            raise ValueError("window must be at least one slot")
        self.window = window
        self._buf = np.zeros((window, num_users))
        self._next = 0
        self.size = 0

    def append(self, sizes) -> None:
        self._buf[self._next] = sizes
        self._next = (self._next + 1) % self.window
        self.size = min(self.size + 1, self.window)

    def samples(self) -> np.ndarray:
        if self.size < self.window:
            return self._buf[: self.size]
        return np.roll(self._buf, -self._next, axis=0)


class Atoa(Policy):
    """Switches between an epsilon-greedy and a UCB1 branch on predicted traffic state.

    Before each exploitation slot the variance of the last ``window`` slots'
    task sizes is compared with ``threshold``: low variance selects the greedy
    branch, high variance the UCB1 branch. Both branches read and update one
    shared statistics table. The pool is fed after the slot's cost is observed,
    so the prediction for slot ``t`` only sees slots before ``t``.
    """

    name = "atoa"

    def __init__(self, num_arms, rng, num_users: int, epsilon=0.01, xi=0.1, window=10,
                 threshold: float = math.inf, u_prior=1.0):
        super().__init__(num_arms, rng)
        if threshold < 0:
            raise ValueError("threshold must be nonnegative")
        self.threshold = float(threshold)
        self.pool = MemoryPool(window, num_users)
        self.greedy = EpsilonGreedy(num_arms, rng, epsilon, stats=self.stats)
        self.ucb = Ucb1(num_arms, rng, xi, u_prior, stats=self.stats)
        self.last_variance: float | None = None

    def predicted_state(self) -> int:
        # Fewer than two samples per user carries no spread information.
        if self.pool.size < 2:
            self.last_variance = None
            return STABLE
        self.last_variance = traffic_variance(self.pool.samples())
        return predict_state(self.last_variance, self.threshold)

    def choose(self, slot: int) -> int:
        state = self.predicted_state()
        arm = self.greedy._greedy_step() if state == STABLE else self.ucb.choose(slot)
        self.last_state = state
        return arm

    def observe(self, arm, cost, slot, workload=None):
        super().observe(arm, cost, slot, workload)
        self.ucb.amplitude.update(cost)
        if workload is not None:
            self.pool.append(workload.sizes)


class Oracle(Policy):
    """Clairvoyant baseline: the cheapest arm for the current slot's workload."""

    name = "oracle"

    def __init__(self, num_arms, rng, profile: NetworkProfile, arms: ArmSpace):
        super().__init__(num_arms, rng)
        self.profile = profile
        self.arms = arms
        self.workload: SlotWorkload | None = None

    def see(self, workload: SlotWorkload) -> None:
        self.workload = workload

    def explore(self, slot):
        return self.choose(slot)

    def choose(self, slot):
        self.last_state = None
        return oracle_choose(self.profile, self.workload, self.arms)[0]


def oracle_choose(profile: NetworkProfile, workload: SlotWorkload, arms: ArmSpace):
    """Brute-force argmin over all arms plus the per-user decomposed optimum.

    Returns ``(arm_index, joint_cost, decomposed_cost)``. Without server
    contention the two costs coincide.
    """
    table = latency_table(profile, workload)
    costs = arms.costs(table)
    best = int(np.argmin(costs))
    decomposed = float(table.min(axis=1).max())
    return best, float(costs[best]), decomposed


def make_policy(spec, num_arms: int, rng: SeededSource, profile: NetworkProfile,
                arms: ArmSpace, means=None) -> Policy:
    """Build a policy from a :class:`~edgebandit.config.PolicySpec`."""
    if spec.name == "epsilon_greedy":
        return EpsilonGreedy(num_arms, rng, spec.epsilon)
    if spec.name == "ucb1":
        return Ucb1(num_arms, rng, spec.xi, spec.u_prior)
    if spec.name == "atoa":
        threshold = spec.threshold
        if threshold is None:
            threshold = default_threshold(means, spec.window)
        return Atoa(num_arms, rng, profile.num_users, spec.epsilon, spec.xi, spec.window,
                    threshold, spec.u_prior)
    if spec.name == "oracle":
        return Oracle(num_arms, rng, profile, arms)
    raise ValueError(f"unknown policy {spec.name!r}")
