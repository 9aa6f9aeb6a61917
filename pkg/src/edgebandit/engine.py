"""Slot loop, metric accumulation and parameter sweeps."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .arms import ArmSpace
from .config import ExperimentConfig, with_overrides
from .network import latency_table
from .policies import Oracle, make_policy
from .workload import Phase, SeededSource, draw_slot, phase_of

WORKLOAD_STREAM = 0
POLICY_STREAM = 1


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    phase: str  # "explore" or "exploit"
    arm: int
    cost: float
    avg_cost: float
    pred_state: int | None
    true_phase: str
    oracle_cost: float | None = None


@dataclass(frozen=True)
class RunSummary:
    policy: str
    seed: int
    horizon: int
    explore_slots: int
    final_avg_cost: float
    total_cost: float
    discounted_cost: float
    windowed_avg_cost: float
    exploit_avg_cost: float
    stable_avg_cost: float | None
    unstable_avg_cost: float | None
    oracle_mean_gap: float | None = None
    oracle_min_gap: float | None = None
    oracle_lower_bound_held: bool | None = None
    config: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def run(config: ExperimentConfig) -> tuple[list[SlotRecord], RunSummary]:
    """Simulate ``config.horizon`` slots and return per-slot records plus a summary.

    Each slot draws the workload first from a stream that does not depend on
    the policy, so different policies under one seed face identical tasks.
    The policy then picks an arm without seeing the sizes, pays the resulting
    cost and observes it.
    """
    profile = config.profile
    arms = ArmSpace(profile.num_users, profile.num_servers, config.arm_cap)
    workload_rng = SeededSource(config.seed, WORKLOAD_STREAM)
    policy_rng = SeededSource(config.seed, POLICY_STREAM)
    policy = make_policy(config.policy, len(arms), policy_rng, profile, arms,
                         means=config.pattern.means)
    users = np.arange(profile.num_users)

    records: list[SlotRecord] = []
    total = 0.0
    discounted = 0.0
    by_phase = {Phase.STABLE: [0.0, 0], Phase.UNSTABLE: [0.0, 0]}
    window_total = 0.0
    exploit_total = 0.0
    gaps: list[float] = []
    for t in range(1, config.horizon + 1):
        workload = draw_slot(config.pattern, workload_rng, t)
        true_phase = phase_of(config.pattern, t)
        if isinstance(policy, Oracle):
            policy.see(workload)
        exploring = t <= config.explore_slots
        arm = policy.explore(t) if exploring else policy.choose(t)
        table = latency_table(profile, workload)
        cost = float(table[users, arms.digits[arm]].max())
        policy.observe(arm, cost, t, workload)

        total += cost
        discounted = discounted * config.discount + cost
        by_phase[true_phase][0] += cost
        by_phase[true_phase][1] += 1
        if t >= config.average_from:
            window_total += cost
        if not exploring:
            exploit_total += cost
        oracle_cost = None
        if config.oracle_trace:
            oracle_cost = float(arms.costs(table).min())
            gaps.append(cost - oracle_cost)
        records.append(SlotRecord(
            slot=t,
            phase="explore" if exploring else "exploit",
            arm=arm,
            cost=cost,
            avg_cost=total / t,
            pred_state=policy.last_state,
            true_phase=true_phase.value,
            oracle_cost=oracle_cost,
        ))

    def phase_avg(phase):
        s, n = by_phase[phase]
        return s / n if n else None

    summary = RunSummary(
        policy=config.policy.name,
        seed=config.seed,
        horizon=config.horizon,
        explore_slots=config.explore_slots,
        final_avg_cost=total / config.horizon,
        total_cost=total,
        discounted_cost=discounted,
        windowed_avg_cost=window_total / (config.horizon - config.average_from + 1),
        exploit_avg_cost=exploit_total / (config.horizon - config.explore_slots),
        stable_avg_cost=phase_avg(Phase.STABLE),
        unstable_avg_cost=phase_avg(Phase.UNSTABLE),
        oracle_mean_gap=float(np.mean(gaps)) if gaps else None,
        oracle_min_gap=float(np.min(gaps)) if gaps else None,
        oracle_lower_bound_held=bool(min(gaps) >= 0.0) if gaps else None,
        config=config.echo(),
    )
    return records, summary


class SweepError(RuntimeError):
    def __init__(self, key, cause):
        super().__init__(f"sweep run {key} failed: {cause}")
        self.key = key


def expand_grid(vary: dict) -> list[dict]:
    """Cartesian product of ``{key: [values]}`` as a list of override dicts."""
    if not vary:
        return [{}]
    keys = list(vary)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(vary[k] for k in keys))]


def _freeze(value):
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    return value


def _sweep_entry(args):
    key, config = args
    try:
        return key, run(config)[1]
    except Exception as exc:  # reported with the sweep key
        raise SweepError(key, exc) from exc


def run_sweep(base: ExperimentConfig, overrides: list[dict], seeds: list[int],
              workers: int = 1) -> dict:
    """Run every override under every seed.

    Returns a dict keyed by ``(override_items, seed)`` where ``override_items``
    is a sorted tuple of ``(key, value)`` pairs with list values frozen to
    tuples. A failing run aborts the sweep with a :class:`SweepError` that
    names its key.
    """
    if not seeds:
        raise ValueError("a sweep needs at least one seed")
    overrides = overrides or [{}]
    jobs = []
    for delta in overrides:
        items = tuple(sorted((k, _freeze(v)) for k, v in delta.items()))
        for seed in seeds:
            key = (items, seed)
            try:
                config = with_overrides(base, {**delta, "seed": seed})
            except Exception as exc:
                raise SweepError(key, exc) from exc
            jobs.append((key, config))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_entry, jobs))
    else:
        results = [_sweep_entry(job) for job in jobs]
    return dict(results)
