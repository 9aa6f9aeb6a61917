import json
import math

import pytest

from edgebandit.cli import main, split_values
from edgebandit.config import ARTIFACT, OVERRIDE, PAPER, ConfigError, build, from_echo, parse_config
from edgebandit.engine import expand_grid, run, run_sweep
from edgebandit.io import read_trace, write_summary, write_trace


def test_tidal_preset_values():
    cfg = parse_config(preset="tidal")
    assert cfg.profile.num_users == 6 and cfg.profile.num_servers == 2
    assert cfg.profile.server_capacities == (200.0, 50.0)
    assert cfg.pattern.means == (10.0, 20.0, 30.0, 40.0, 50.0, 60.0)
    assert (cfg.pattern.stable_period, cfg.pattern.unstable_period) == (150, 150)
    assert (cfg.pattern.stable_sigma_factor, cfg.pattern.unstable_sigma_factor) == (0.1, 0.5)
    assert (cfg.horizon, cfg.explore_slots) == (20000, 10000)
    assert (cfg.policy.epsilon, cfg.policy.xi, cfg.policy.window) == (0.01, 0.1, 10)
    assert cfg.policy.threshold is None  # derived: 0.5 * 10 * 35 = 175


def test_sources_mark_artifact_defaults():
    sources = parse_config(preset="tidal").echo()["sources"]
    for key in ("network.user_capacities", "network.link_capacity", "network.deadline",
                "network.cycles_per_bit", "policy.u_prior"):
        assert sources[key] == ARTIFACT
    for key in ("network.server_capacities", "traffic.means", "horizon", "policy.epsilon"):
        assert sources[key] == PAPER


def test_set_override():
    cfg = parse_config(preset="tidal", sets=["policy.epsilon=0.1"])
    assert cfg.policy.epsilon == 0.1
    assert cfg.echo()["sources"]["policy.epsilon"] == OVERRIDE
    assert parse_config(preset="tidal", sets=["policy.threshold=inf"]).policy.threshold == math.inf


@pytest.mark.parametrize("sets,key", [
    (["horizon=0"], "horizon"),
    (["policy.epsilon=1.5"], "policy.epsilon"),
    (["bogus=1"], "bogus"),
    (["policy.name=thompson"], "policy.name"),
    (["explore_slots=20000"], "explore_slots"),
    (["discount=0"], "discount"),
    (["network.server_capacities=[1,2,3,4,5,6]"], "network.server_capacities"),
])
def test_validation_names_key(sets, key):
    with pytest.raises(ConfigError) as err:
        parse_config(preset="tidal", sets=sets)
    assert err.value.key == key


def test_custom_preset_requires_network():
    with pytest.raises(ConfigError) as err:
        build("custom", {"horizon": 10, "explore_slots": 5})
    assert err.value.key.startswith("network.")


def test_unknown_preset():
    with pytest.raises(ConfigError, match="preset"):
        parse_config(preset="rainy")


def test_echo_round_trip(tmp_path):
    cfg = parse_config(preset="unstable", sets=["policy.xi=1", "horizon=500", "explore_slots=100",
                                                "network.link_capacity=[[1,2],[3,4],[5,6],[7,8],[9,10],[11,12]]"])
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg.echo()))
    again = parse_config(path)
    assert again == cfg
    assert from_echo(json.loads(json.dumps(cfg.echo()))) == cfg


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"preset": "tidal", "extra": 1}')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.key == "extra"


def desk(**extra):
    return build("tidal", {"horizon": 60, "explore_slots": 30, **extra})


def test_trace_format(tmp_path):
    records, _ = run(desk())
    path = write_trace(records[:3], tmp_path / "t.csv")
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "slot,phase,arm,cost,avg_cost,pred_state,true_phase"
    assert len(lines) == 4


def test_trace_round_trips_floats_and_empty_state(tmp_path):
    records, _ = run(desk(**{"policy.name": "ucb1"}))
    rows = read_trace(write_trace(records, tmp_path / "t.csv"))
    assert [float(r["cost"]) for r in rows] == [r.cost for r in records]
    assert all(r["pred_state"] == "" for r in rows)

    atoa, _ = run(desk())
    rows = read_trace(write_trace(atoa, tmp_path / "a.csv"))
    assert {r["pred_state"] for r in rows[30:]} <= {"1", "-1"}
    assert all(r["pred_state"] == "" for r in rows[:30])


def test_trace_rewrite_identical(tmp_path):
    records, _ = run(desk())
    a = write_trace(records, tmp_path / "a.csv").read_bytes()
    b = write_trace(records, tmp_path / "b.csv").read_bytes()
    assert a == b


def test_trace_errors(tmp_path):
    with pytest.raises(ValueError):
        write_trace([], tmp_path / "x.csv")
    records, _ = run(desk())
    with pytest.raises(OSError, match="missing"):
        write_trace(records, tmp_path / "missing" / "x.csv")


def test_summary_file(tmp_path):
    _, summary = run(desk())
    data = json.loads(write_summary(summary, tmp_path / "s.json").read_text())
    assert len(data) == 1
    assert data[0]["discounted_cost"] == data[0]["total_cost"]
    text = (tmp_path / "s.json").read_text()
    assert list(data[0]) == sorted(data[0])
    assert text.endswith("\n")


def test_sweep_summary_count_and_stability(tmp_path):
    base = desk()
    grid = expand_grid({"policy.window": [5, 10, 25, 50]})
    seeds = list(range(10))
    first = write_summary(run_sweep(base, grid, seeds), tmp_path / "a.json").read_bytes()
    second = write_summary(run_sweep(base, grid, seeds), tmp_path / "b.json").read_bytes()
    assert len(json.loads(first)) == 40
    assert first == second


def test_split_values():
    assert split_values("0.01,0.1") == ["0.01", "0.1"]
    assert split_values("[200,50],[300,50]") == ["[200,50]", "[300,50]"]


def test_cli_simulate(tmp_path, capsys):
    args = ["simulate", "--preset", "stable", "--set", "horizon=50", "--set", "explore_slots=20",
            "--seed", "7", "--out", str(tmp_path / "run")]
    assert main(args) == 0
    assert {p.name for p in (tmp_path / "run").iterdir()} == {"trace.csv", "summary.json", "config.json"}
    assert parse_config(tmp_path / "run" / "config.json").seed == 7


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"preset": "unstable", "set": {"horizon": 30, "explore_slots": 10}}))
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = read_trace(tmp_path / "o" / "trace.csv")
    assert len(rows) == 30 and rows[0]["true_phase"] == "unstable"


def test_cli_sweep(tmp_path):
    args = ["sweep", "--preset", "tidal", "--set", "horizon=40", "--set", "explore_slots=20",
            "--vary", "policy.epsilon=0.01,0.1", "--seeds", "1,2,3", "--out", str(tmp_path)]
    assert main(args) == 0
    data = json.loads((tmp_path / "summary.json").read_text())
    assert len(data) == 6
    assert {d["override"]["policy.epsilon"] for d in data} == {0.01, 0.1}


def test_cli_oracle_check(capsys):
    assert main(["oracle-check", "--preset", "tidal", "--slots", "50"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_cli_errors(tmp_path, capsys):
    assert main(["simulate", "--set", "horizon=0", "--out", str(tmp_path)]) == 2
    assert "horizon" in capsys.readouterr().err
    assert main(["sweep", "--seeds", "1,x", "--out", str(tmp_path)]) == 2
    assert main(["sweep", "--set", "horizon=40", "--set", "explore_slots=20",
                 "--vary", "policy.xi=-1", "--seeds", "1", "--out", str(tmp_path)]) == 1


def test_cli_sweep_list_values(tmp_path):
    args = ["sweep", "--set", "horizon=40", "--set", "explore_slots=20",
            "--vary", "network.server_capacities=[200,50],[200,150]", "--seeds", "1", "--out", str(tmp_path)]
    assert main(args) == 0
    data = json.loads((tmp_path / "summary.json").read_text())
    assert sorted(d["override"]["network.server_capacities"] for d in data) == [[200, 50], [200, 150]]
