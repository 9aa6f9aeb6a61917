"""Multi-armed-bandit task offloading in a multi-user, multi-server edge network."""

from .arms import LOCAL, ArmSpace, JointArm, enumerate_arms, resolve_effective_actions
from .config import ConfigError, ExperimentConfig, PolicySpec, build, parse_config
from .engine import RunSummary, SlotRecord, run, run_sweep
from .network import (
    NetworkProfile,
    SlotWorkload,
    latency_table,
    local_latency,
    local_size_cap,
    offload_latency,
    offload_size,
    system_cost,
)
from .policies import (
    Atoa,
    EpsilonGreedy,
    Oracle,
    Ucb1,
    default_threshold,
    oracle_choose,
    predict_state,
    traffic_variance,
)
from .workload import Mode, Phase, SeededSource, TrafficPattern, draw_slot, phase_of

__version__ = "0.1.0"
