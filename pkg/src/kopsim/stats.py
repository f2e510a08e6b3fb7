"""Ensemble observables: means, local opinion mass, histograms.

All functions are read-only over the ensemble and operate on the state frozen
at the start of a step (the engine never recomputes these mid-step).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Ensemble:
    """Particle population in structure-of-arrays layout."""

    v: np.ndarray       # opinions, in [-1, 1]
    c: np.ndarray       # contacts, > 0
    group: np.ndarray   # group index per agent

    @property
    def n(self) -> int:
        return len(self.v)

    def copy(self) -> "Ensemble":
        return Ensemble(self.v.copy(), self.c.copy(), self.group.copy())

    def check(self) -> None:
        if not (len(self.v) == len(self.c) == len(self.group)):
            raise ValueError("ensemble arrays must have equal length")
        if np.any(np.abs(self.v) > 1):
            raise ValueError("opinions must lie in [-1, 1]")
        if np.any(self.c <= 0):
            raise ValueError("contacts must be strictly positive")


@dataclass
class HistogramSet:
    v_edges: np.ndarray   # uniform on [-1, 1], len bins_v + 1
    v_mass: np.ndarray    # normalized frequencies, sums to 1
    c_edges: np.ndarray   # log-uniform interior edges, len bins_c + 1
    c_mass: np.ndarray    # bins_c + 2 entries: underflow, interior..., overflow
    joint_mass: np.ndarray  # (bins_v, bins_c + 2), sums to 1


@dataclass
class Observables:
    """Per-snapshot record of the ensemble."""

    t: float
    m_v_global: float
    m_c_global: float
    m_v_by_group: np.ndarray
    m_c_by_group: np.ndarray
    hists: HistogramSet


def mean_opinion(e: Ensemble) -> float:
    """Mean opinion of the entire population (all groups)."""
    if e.n == 0:
        raise ValueError("empty ensemble")
    return float(np.mean(e.v))


def local_opinion_mass_all(e: Ensemble, r: float) -> np.ndarray:
    """Fraction of agents within opinion distance <= r of each agent.

    Counts the agent itself (the empirical measure has an atom at v_i), so
    rho_i >= 1/n always.  Sorting plus two binary searches per agent gives
    O(n log n) with counts identical to the O(n^2) double loop.
    """
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    vs = np.sort(e.v)
    lo = np.searchsorted(vs, e.v - r, side="left")
    hi = np.searchsorted(vs, e.v + r, side="right")
    return (hi - lo) / e.n


def group_means(e: Ensemble, n_groups: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-group arithmetic means of opinions and contacts."""
    counts = np.bincount(e.group, minlength=n_groups)
    if np.any(counts == 0):
        empty = int(np.argmin(counts))
        raise ValueError(f"group {empty} is empty")
    m_v = np.bincount(e.group, weights=e.v, minlength=n_groups) / counts
    m_c = np.bincount(e.group, weights=e.c, minlength=n_groups) / counts
    return m_v, m_c


def build_histograms(e: Ensemble, bins_v: int = 64,
                     c_range: tuple[float, float] = (1.0, 5000.0),
                     bins_c: int = 64) -> HistogramSet:
    """Normalized marginal and joint histograms.

    Opinion bins are uniform on [-1, 1]; contact bins are log-uniform on
    ``c_range`` with underflow/overflow bins at the ends (the contact
    marginal is lognormal-like, so log spacing resolves it).
    """
    if bins_v < 1 or bins_c < 1:
        raise ValueError("bin counts must be >= 1")
    c_lo, c_hi = c_range
    if c_lo <= 0 or c_hi <= c_lo:
        raise ValueError(f"invalid contact range {c_range}")

    v_edges = np.linspace(-1.0, 1.0, bins_v + 1)
    c_edges = np.geomspace(c_lo, c_hi, bins_c + 1)

    iv = np.clip(np.searchsorted(v_edges, e.v, side="right") - 1, 0, bins_v - 1)
    # contact bin 0 is underflow (< c_lo), bin bins_c + 1 is overflow (>= c_hi)
    ic = np.clip(np.searchsorted(c_edges, e.c, side="right"), 0, bins_c + 1)

    n = e.n
    v_mass = np.bincount(iv, minlength=bins_v) / n
    c_mass = np.bincount(ic, minlength=bins_c + 2) / n
    joint = np.bincount(iv * (bins_c + 2) + ic,
                        minlength=bins_v * (bins_c + 2)).reshape(bins_v, bins_c + 2) / n
    return HistogramSet(v_edges, v_mass, c_edges, c_mass, joint)


def observe(e: Ensemble, t: float, n_groups: int, bins_v: int = 64,
            c_range: tuple[float, float] = (1.0, 5000.0), bins_c: int = 64) -> Observables:
    m_v, m_c = group_means(e, n_groups)
    return Observables(
        t=t,
        m_v_global=mean_opinion(e),
        m_c_global=float(np.mean(e.c)),
        m_v_by_group=m_v,
        m_c_by_group=m_c,
        hists=build_histograms(e, bins_v, c_range, bins_c),
    )
