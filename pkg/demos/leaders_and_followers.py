"""Opinion leadership with and without feedback controls (Test 1 presets).

Four scenarios share the same two-group population (25% leaders starting
popular with opinions near +0.5, 75% followers starting negative):

    test1_a   no controls         leaders lose popularity and get dragged left
    test1_b   contact control     leaders stay popular but still drift
    test1_c   opinion control     leaders hold +0.5 but lose their audience
    test1_d   both controls       leaders stay popular and pull the mean up

Run at a reduced population for speed; pass --full for the preset size.
"""

import argparse
import dataclasses

from kopsim.config import preset
from kopsim.engine import run

parser = argparse.ArgumentParser()
parser.add_argument("--full", action="store_true", help="use the full preset population")
args = parser.parse_args()

print(f"{'scenario':<10} {'m_c leaders 0->T':>18} {'m_c global(T)':>14} {'m_v global(T)':>14}")
for name in ("test1_a", "test1_b", "test1_c", "test1_d"):
    cfg = preset(name)
    if not args.full:
        cfg = dataclasses.replace(cfg, sim=dataclasses.replace(cfg.sim, n_particles=2000))
    result = run(cfg)
    first, last = result.snapshots[0], result.snapshots[-1]
    print(f"{name:<10} {first.m_c_by_group[0]:>8.1f} -> {last.m_c_by_group[0]:<7.1f}"
          f" {last.m_c_global:>13.1f} {last.m_v_global:>14.3f}")
