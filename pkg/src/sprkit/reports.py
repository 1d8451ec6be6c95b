"""Report documents: versioned JSON (deterministic bytes) and CSV flattening.

JSON rendering sorts keys and contains no timestamps, so identical inputs and
seeds produce byte-identical reports.  Wall-clock timings are included only
on request for that reason.  Non-finite floats are encoded as strings
("inf") to stay within strict JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from .decomp import DecompositionStats
from .general import GeneralResult, LevelInfo
from .harness import AmplifiedResult, ComparisonReport, TrialReport

SCHEMA_VERSION = 1


def _num(x: float) -> float | str:
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _denum(x) -> float:
    return float(x)


def trial_to_dict(t: TrialReport, include_timings: bool = True) -> dict:
    doc: dict[str, Any] = {
        "seed": t.seed,
        "algorithm": t.algorithm,
        "stretch": [[_num(x) for x in row] for row in t.stretch],
        "max_stretch": _num(t.max_stretch),
        "outer_iterations": t.outer_iterations,
        "partition_valid": t.partition_valid,
    }
    if include_timings:
        doc["wall_time"] = t.wall_time
    return doc


def trial_from_dict(d: dict) -> TrialReport:
    return TrialReport(
        seed=int(d["seed"]),
        algorithm=d["algorithm"],
        stretch=tuple(tuple(_denum(x) for x in row) for row in d["stretch"]),
        max_stretch=_denum(d["max_stretch"]),
        outer_iterations=int(d["outer_iterations"]),
        wall_time=float(d.get("wall_time", 0.0)),
        partition_valid=bool(d["partition_valid"]),
    )


def amplified_to_dict(a: AmplifiedResult, include_timings: bool = False) -> dict:
    return {
        "trials": [trial_to_dict(t, include_timings) for t in a.trials],
        "failures": list(a.failures),
        "best_index": a.best_index,
        "best_max_stretch": _num(a.best_max_stretch),
    }


def comparison_to_dict(c: ComparisonReport, include_timings: bool = False) -> dict:
    return {
        "baseline": trial_to_dict(c.baseline, include_timings),
        "amplified": amplified_to_dict(c.amplified, include_timings),
    }


def level_to_dict(level: LevelInfo) -> dict:
    return {
        "depth": level.depth,
        "k": level.k,
        "aspect": _num(level.aspect),
        "scale": _num(level.scale),
        "mode": level.mode,
        "m0": level.m0,
        "classes": [list(c) for c in level.classes],
        "balls": [list(b) for b in level.balls],
        "ball_diameters": [_num(d) for d in level.ball_diameters],
        "alg1_outer": level.alg1_outer,
    }


def general_to_dict(res: GeneralResult) -> dict:
    return {
        "levels": [level_to_dict(level) for level in res.levels],
        "cells": [sorted(cell) for cell in res.partition.cells],
    }


def decomposition_to_dict(stats: DecompositionStats, requirements: dict) -> dict:
    return {
        "trials": stats.trials,
        "delta": stats.delta,
        "k": stats.k,
        "diameter_violations": stats.diameter_violations,
        "pair_separation": [
            {
                "u": p.u,
                "v": p.v,
                "distance": _num(p.distance),
                "frequency": p.frequency,
                "std_err": p.std_err,
            }
            for p in stats.pair_separation
        ],
        "path_crossings": [
            {
                "s": p.s,
                "t": p.t,
                "length": _num(p.length),
                "mean": p.mean,
                "std_err": p.std_err,
                "tail": {str(t): f for t, f in sorted(p.tail.items())},
            }
            for p in stats.path_crossings
        ],
        "zp_histogram": {str(t): f for t, f in sorted(stats.zp_histogram.items())},
        "requirements": requirements,
    }


def document(kind: str, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **payload}


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc


def render_csv(doc: dict) -> str:
    """Flatten a report document to CSV (columns documented in the README)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    kind = doc.get("kind")
    if kind in ("spr", "spr-amplified"):
        writer.writerow(
            ["trial", "seed", "algorithm", "max_stretch", "outer_iterations", "partition_valid"]
        )
        for idx, t in enumerate(doc["trials"]):
            writer.writerow(
                [idx, t["seed"], t["algorithm"], t["max_stretch"], t["outer_iterations"], t["partition_valid"]]
            )
    elif kind == "spr-general":
        writer.writerow(["depth", "k", "aspect", "scale", "mode", "m0", "alg1_outer"])
        for level in doc["levels"]:
            writer.writerow(
                [level["depth"], level["k"], level["aspect"], level["scale"], level["mode"], level["m0"], level["alg1_outer"]]
            )
    elif kind == "decompose":
        writer.writerow(["record", "key", "value"])
        for name, req in sorted(doc["requirements"].items()):
            if isinstance(req, dict):
                writer.writerow(["requirement", name, req["passed"]])
            else:
                writer.writerow(["requirement", name, req])
        for t, f in sorted(doc["zp_histogram"].items(), key=lambda kv: int(kv[0])):
            writer.writerow(["tail_frequency", t, f])
        writer.writerow(["stat", "diameter_violations", doc["diameter_violations"]])
    elif kind == "eval":
        writer.writerow(["i", "j", "stretch"])
        for i, row in enumerate(doc["stretch"]):
            for j, x in enumerate(row):
                if i < j:
                    writer.writerow([i, j, x])
    elif kind == "compare":
        writer.writerow(["role", "trial", "seed", "algorithm", "max_stretch", "partition_valid"])
        b = doc["baseline"]
        writer.writerow(["baseline", "", b["seed"], b["algorithm"], b["max_stretch"], b["partition_valid"]])
        for idx, t in enumerate(doc["amplified"]["trials"]):
            writer.writerow(["trial", idx, t["seed"], t["algorithm"], t["max_stretch"], t["partition_valid"]])
    else:
        raise ValueError(f"no CSV flattening for kind {kind!r}")
    return out.getvalue()
