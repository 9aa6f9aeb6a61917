"""Bit-stable trace and summary files."""

from __future__ import annotations

import csv
import json
from pathlib import Path

TRACE_HEADER = ("slot", "phase", "arm", "cost", "avg_cost", "pred_state", "true_phase")


def fmt(x: float) -> str:
    # 17 significant digits round-trip any double exactly.
    return format(x, ".17g")


def write_trace(records, path) -> Path:
    """Write per-slot records as CSV with LF endings; a missing ``pred_state`` stays empty."""
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRACE_HEADER)
            for r in records:
                writer.writerow([
                    r.slot,
                    r.phase,
                    r.arm,
                    fmt(r.cost),
                    fmt(r.avg_cost),
                    "" if r.pred_state is None else r.pred_state,
                    r.true_phase,
                ])
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc.strerror or exc}") from exc
    return path


def read_trace(path) -> list[dict]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def summary_objects(summaries) -> list[dict]:
    """Flatten summaries into JSON objects.

    ``summaries`` is a single :class:`~edgebandit.engine.RunSummary`, a list of
    them, or the ``{(override_items, seed): summary}`` mapping returned by
    :func:`~edgebandit.engine.run_sweep`.
    """
    if hasattr(summaries, "to_dict"):
        summaries = [summaries]
    if isinstance(summaries, dict):
        items = sorted(summaries.items(), key=lambda kv: (repr(kv[0][0]), kv[0][1]))
        out = []
        for (override, _seed), summary in items:
            obj = summary.to_dict()
            obj["override"] = dict(override)
            out.append(obj)
        return out
    return [{**s.to_dict(), "override": {}} for s in summaries]


def write_summary(summaries, path) -> Path:
    objects = summary_objects(summaries)
    if not objects:
        raise ValueError("no summaries to write")
    path = Path(path)
    text = json.dumps(objects, indent=2, sort_keys=True) + "\n"
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc.strerror or exc}") from exc
    return path


def write_config(config, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(config.echo(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
