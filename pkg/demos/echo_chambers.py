"""Competing leader groups and the emergence of echo chambers (Test 3).

Two small leader groups steer toward opposite targets (+/-0.5) inside an
initially uniform population.  Depending on which feedback controls are
active, the final opinion marginal is single-peaked, polarized, or split
into leader-anchored chambers plus an undecided center.
"""

import argparse
import dataclasses

import numpy as np

from kopsim.config import preset
from kopsim.engine import run

parser = argparse.ArgumentParser()
parser.add_argument("--full", action="store_true", help="use the full preset population")
args = parser.parse_args()


def modes(hists, min_mass=0.01):
    """Local maxima of the 3-bin-smoothed opinion marginal."""
    m = np.convolve(hists.v_mass, np.ones(3) / 3.0, mode="same")
    centers = 0.5 * (hists.v_edges[:-1] + hists.v_edges[1:])
    out = []
    for i in range(1, len(m) - 1):
        if m[i] >= m[i - 1] and m[i] > m[i + 1] and m[i] >= min_mass:
            out.append((centers[i], hists.v_mass[i]))
    return out


for name in ("test3_a", "test3_b", "test3_c"):
    cfg = preset(name)
    if not args.full:
        cfg = dataclasses.replace(cfg, sim=dataclasses.replace(cfg.sim, n_particles=2000))
    result = run(cfg)
    final = result.snapshots[-1]
    center_mass = float(np.sum(final.hists.v_mass[
        (final.hists.v_edges[:-1] >= -0.2) & (final.hists.v_edges[1:] <= 0.2)]))
    found = ", ".join(f"v={c:+.2f}" for c, _ in modes(final.hists))
    print(f"{name}: modes at [{found}]   mass in [-0.2,0.2]: {center_mass:.2f}   "
          f"m_v(T)={final.m_v_global:+.3f}")
