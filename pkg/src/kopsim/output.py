"""Output bundle serialization: manifest, timeseries CSV, marginals, joint NDJSON.

A bundle directory contains:
    manifest.json          scenario TOML + seed + version + wall time
    timeseries.csv         one row per recorded snapshot (t = 0 always first)
    bins.json              shared histogram bin edges
    marginals_t<t>.csv     per scheduled snapshot: v-bins, c-bins, masses
    joint_t<t>.ndjson      per scheduled snapshot: one record per nonzero bin
    diagnostics.json       boundary clamp / noise resample counters
All numbers in CSV files use 9 significant digits.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import __version__
from .config import ScenarioConfig, serialize_scenario
from .engine import RunResult
from .stats import Observables


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _tname(t: float) -> str:
    return format(t, "g")


def write_timeseries(snapshots: list[Observables], group_names: list[str]) -> str:
    """CSV of global and per-group means, rows ordered by time."""
    if not snapshots:
        raise ValueError("need at least one snapshot")
    header = (["t", "m_c_global", "m_v_global"]
              + [f"m_c_{g}" for g in group_names]
              + [f"m_v_{g}" for g in group_names])
    lines = [",".join(header)]
    for ob in sorted(snapshots, key=lambda o: o.t):
        row = ([_fmt(ob.t), _fmt(ob.m_c_global), _fmt(ob.m_v_global)]
               + [_fmt(x) for x in ob.m_c_by_group]
               + [_fmt(x) for x in ob.m_v_by_group])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_marginals(ob: Observables) -> str:
    """CSV of both marginal histograms for one snapshot."""
    lines = ["var,bin,lo,hi,mass"]
    h = ob.hists
    for i, mass in enumerate(h.v_mass):
        lines.append(f"v,{i},{_fmt(h.v_edges[i])},{_fmt(h.v_edges[i + 1])},{_fmt(mass)}")
    n_interior = len(h.c_edges) - 1
    for i, mass in enumerate(h.c_mass):
        if i == 0:
            lo, hi = 0.0, h.c_edges[0]
        elif i == n_interior + 1:
            lo, hi = h.c_edges[-1], math.inf
        else:
            lo, hi = h.c_edges[i - 1], h.c_edges[i]
        lines.append(f"c,{i},{_fmt(lo)},{_fmt(hi)},{_fmt(mass)}")
    return "\n".join(lines) + "\n"


def write_joint(ob: Observables) -> str:
    """NDJSON of the joint histogram, one record per nonzero (v, c) bin."""
    h = ob.hists
    lines = []
    nz = h.joint_mass.nonzero()
    for iv, ic in zip(*nz):
        lines.append(json.dumps({"iv": int(iv), "ic": int(ic),
                                 "mass": float(h.joint_mass[iv, ic])}))
    return "\n".join(lines) + ("\n" if lines else "")


def write_bundle(result: RunResult, out_dir: str | Path,
                 wall_time_s: float = 0.0, threads: int = 1) -> Path:
    """Write the full output bundle for a run; returns the bundle directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg: ScenarioConfig = result.config
    group_names = [g.name for g in cfg.groups]

    manifest = {
        "scenario_toml": serialize_scenario(cfg),
        "seed": cfg.sim.seed,
        "version": __version__,
        "wall_time_s": wall_time_s,
        "threads": threads,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    (out / "timeseries.csv").write_text(write_timeseries(result.snapshots, group_names))
    (out / "diagnostics.json").write_text(json.dumps(result.diagnostics, indent=2) + "\n")

    h0 = result.snapshots[0].hists
    bins = {"v_edges": [float(x) for x in h0.v_edges],
            "c_edges": [float(x) for x in h0.c_edges]}
    (out / "bins.json").write_text(json.dumps(bins) + "\n")

    scheduled = set(cfg.sim.snapshot_times)
    for ob in result.snapshots:
        if ob.t not in scheduled:
            continue
        (out / f"marginals_t{_tname(ob.t)}.csv").write_text(write_marginals(ob))
        (out / f"joint_t{_tname(ob.t)}.ndjson").write_text(write_joint(ob))
    return out
