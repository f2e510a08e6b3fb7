"""Asymptotic Nanbu-type particle scheme for the coupled contact-opinion model.

One step: freeze the observables (mean opinion, local opinion mass), pair the
agents uniformly at random, evaluate the feedback controls per group on the
frozen state, then apply the scaled contact and opinion updates to both
members of every pair.  With the scaling parameter equal to the time step
every selected pair interacts each step.

Randomness is counter-based (Philox): each step owns disjoint counter blocks
per purpose (pairing, contact noise, opinion noise, resampling), and per-agent
draws are indexed by agent id within a block, so draws never depend on the
pairing order and multi-threaded runs are bit-identical to single-threaded
ones.  When the population size is odd, the one unpaired agent is idle for
that step (no drift, no noise) - a contract of this implementation.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from . import control, model, stats
from .config import ScenarioConfig, group_sizes, validate
from .model import NoiseSpec, sample_noise
from .stats import Ensemble, Observables

# counter-block purposes
_KIND_PAIR = 0
_KIND_ETA = 1
_KIND_XI = 2
_KIND_RESAMPLE = 3

_MAX_ETA_RESAMPLES = 8
_C_FLOOR_FACTOR = 1e-6


def _stream(seed: int, block: int, kind: int) -> np.random.Generator:
    """Generator over the (block, kind) counter window of the seeded Philox stream."""
    counter = np.array([0, 0, kind, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=np.uint64(seed), counter=counter))


@dataclass
class StepContext:
    """Observables frozen at the start of a step."""

    m_v: float
    rho: np.ndarray | None
    epsilon: float
    step_index: int


@dataclass
class RunResult:
    snapshots: list[Observables]
    final_ensemble: Ensemble
    diagnostics: dict[str, int]
    config: ScenarioConfig


@dataclass
class _Plan:
    """Per-run precomputation: per-agent group parameters and fast-path flags."""

    cc_enabled: np.ndarray        # bool per agent
    oc_enabled: np.ndarray        # bool per agent
    oc_groups: list[int]          # groups with opinion control enabled
    group_masks: list[np.ndarray]
    any_cc: bool
    need_rho: bool
    opinion_inert: bool
    frozen_m_v: float | None


def _make_plan(e: Ensemble, cfg: ScenarioConfig) -> _Plan:
    groups = cfg.groups
    cc_flags = np.array([g.contact_control_enabled for g in groups])
    oc_flags = np.array([g.opinion_control_enabled for g in groups])
    cc_enabled = cc_flags[e.group]
    oc_enabled = oc_flags[e.group]
    oc_groups = [i for i, g in enumerate(groups) if g.opinion_control_enabled]
    group_masks = [e.group == i for i in oc_groups]
    any_cc = bool(cc_flags.any())
    need_rho = any_cc or any(
        groups[i].opinion_control.hv_spec.kind == "sigmoid" for i in oc_groups)
    opinion_inert = (cfg.sim.epsilon * cfg.opinions.alpha == 0.0
                     and cfg.opinions.sigma == 0.0)
    frozen = stats.mean_opinion(e) if cfg.sim.mv_mode == "frozen-at-init" else None
    return _Plan(cc_enabled, oc_enabled, oc_groups, group_masks,
                 any_cc, need_rho, opinion_inert, frozen)


def initialize(cfg: ScenarioConfig) -> Ensemble:
    """Sample the initial ensemble from the per-group uniform rectangles."""
    validate(cfg)
    sizes = group_sizes(cfg)
    rng = _stream(cfg.sim.seed, 0, 0)
    vs, cs, gs = [], [], []
    for gi, (g, size) in enumerate(zip(cfg.groups, sizes)):
        cs.append(rng.uniform(g.init_c_range[0], g.init_c_range[1], size))
        vs.append(rng.uniform(g.init_v_range[0], g.init_v_range[1], size))
        gs.append(np.full(size, gi, dtype=np.int64))
    e = Ensemble(np.concatenate(vs), np.concatenate(cs), np.concatenate(gs))
    e.check()
    return e


def sample_pairs(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """round(n/2) disjoint unordered pairs from a uniform random permutation.

    For odd n exactly one agent is left unpaired.  round() is
    round-half-to-even, matching numpy's rint.
    """
    if n < 2:
        raise ValueError(f"need at least 2 agents to pair, got {n}")
    n_pairs = int(np.rint(n / 2))
    perm = rng.permutation(n)
    return perm[0:2 * n_pairs:2], perm[1:2 * n_pairs:2]


def update_contacts(c, v, kappa, ctx: StepContext, params, noise):
    """Scaled multiplicative contact update (no boundary handling here)."""
    eps = ctx.epsilon
    psi = model.scaled_value_function(np.asarray(c, dtype=float) / params.c_bar, eps, params) \
        if params.mu != 0.0 else 0.0
    phi = model.opinion_penalty(v, ctx.m_v, params)
    return np.asarray(c, dtype=float) * (1.0 - eps * params.beta * (psi + phi - kappa) + noise)


def update_opinions_pair(v, v_star, c, c_star, u, u_star, ctx: StepContext,
                         params, noise, noise_star):
    """Scaled binary opinion update for one pair (no boundary handling here)."""
    eps = ctx.epsilon
    sq = np.sqrt(eps) * params.sigma
    p = model.compromise(v, v_star, c, c_star, params)
    p_star = model.compromise(v_star, v, c_star, c, params)
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    v_new = v + eps * params.alpha * (p * (v_star - v) + u) + sq * model.diffusion_weight(v) * noise
    v_star_new = (v_star + eps * params.alpha * (p_star * (v - v_star) + u_star)
                  + sq * model.diffusion_weight(v_star) * noise_star)
    return v_new, v_star_new


def _compute_controls(e: Ensemble, cfg: ScenarioConfig, ctx: StepContext,
                      plan: _Plan, partner: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """Per-agent kappa and u from the frozen step context."""
    n = e.n
    kappa = np.zeros(n)
    if plan.any_cc:
        kappa = control.contact_control(e.c, ctx.rho, cfg.contact_control,
                                        cfg.contacts, enabled=plan.cc_enabled)
    u = np.zeros(n)
    if partner is not None:
        for gi, mask in zip(plan.oc_groups, plan.group_masks):
            m = mask & (partner >= 0)
            if not m.any():
                continue
            idx = np.flatnonzero(m)
            pj = partner[idx]
            rho_m = ctx.rho[idx] if ctx.rho is not None else None
            u[idx] = control.opinion_control_full(
                e.v[idx], e.v[pj], e.c[idx], e.c[pj], ctx.epsilon,
                cfg.groups[gi].opinion_control, cfg.opinions, rho=rho_m)
    return kappa, u


def step(e: Ensemble, cfg: ScenarioConfig, step_index: int,
         plan: _Plan | None = None, threads: int = 1,
         diagnostics: dict[str, int] | None = None) -> Ensemble:
    """Advance the ensemble by one step; mutates ``diagnostics`` counters if given."""
    if plan is None:
        plan = _make_plan(e, cfg)
    if diagnostics is None:
        diagnostics = {}
    n = e.n
    eps = cfg.sim.epsilon
    ct = cfg.contacts
    op = cfg.opinions
    seed = cfg.sim.seed
    block = step_index + 1

    m_v = plan.frozen_m_v if plan.frozen_m_v is not None else stats.mean_opinion(e)
    rho = stats.local_opinion_mass_all(e, cfg.contact_control.r) if plan.need_rho else None
    ctx = StepContext(m_v=m_v, rho=rho, epsilon=eps, step_index=step_index)

    # pairing is irrelevant to the contact update, so it is skipped entirely
    # when the opinion dynamics are inert and everyone is paired anyway
    skip_pairing = plan.opinion_inert and n % 2 == 0
    if skip_pairing:
        partner = None
        active = np.ones(n, dtype=bool)
    else:
        i_idx, j_idx = sample_pairs(n, _stream(seed, block, _KIND_PAIR))
        partner = np.full(n, -1, dtype=np.int64)
        partner[i_idx] = j_idx
        partner[j_idx] = i_idx
        active = partner >= 0

    eta_spec = NoiseSpec(std=np.sqrt(eps) * ct.nu)
    eta = sample_noise(eta_spec, n, _stream(seed, block, _KIND_ETA))
    xi = None
    if not plan.opinion_inert:
        xi = sample_noise(NoiseSpec(std=1.0), n, _stream(seed, block, _KIND_XI))

    kappa, u = _compute_controls(e, cfg, ctx, plan, partner)

    c_new = e.c.copy()
    v_new = e.v.copy()

    def apply_chunk(lo: int, hi: int) -> None:
        sl = slice(lo, hi)
        act = active[sl]
        c_new[sl] = np.where(
            act, update_contacts(e.c[sl], e.v[sl], kappa[sl], ctx, ct, eta[sl]), e.c[sl])
        if not plan.opinion_inert:
            pj = partner[sl]
            safe = np.where(pj >= 0, pj, 0)
            v = e.v[sl]
            v_star = e.v[safe]
            p = model.compromise(v, v_star, e.c[sl], e.c[safe], op)
            upd = (v + eps * op.alpha * (p * (v_star - v) + u[sl])
                   + np.sqrt(eps) * op.sigma * model.diffusion_weight(v) * xi[sl])
            v_new[sl] = np.where(act, upd, v)

    if threads <= 1 or n < 4 * threads:
        apply_chunk(0, n)
    else:
        bounds = np.linspace(0, n, threads + 1).astype(int)
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda k: apply_chunk(bounds[k], bounds[k + 1]), range(threads)))

    # positivity safeguard for contacts: resample the noise, then clamp
    bad = active & (c_new <= 0.0)
    if bad.any():
        rng_rs = _stream(seed, block, _KIND_RESAMPLE)
        for _ in range(_MAX_ETA_RESAMPLES):
            idx = np.flatnonzero(bad)
            if idx.size == 0:
                break
            diagnostics["noise_resamples"] = diagnostics.get("noise_resamples", 0) + idx.size
            eta[idx] = sample_noise(eta_spec, idx.size, rng_rs)
            c_new[idx] = update_contacts(e.c[idx], e.v[idx], kappa[idx], ctx, ct, eta[idx])
            bad = np.zeros(n, dtype=bool)
            bad[idx[c_new[idx] <= 0.0]] = True
        if bad.any():
            diagnostics["contact_clamps"] = diagnostics.get("contact_clamps", 0) + int(bad.sum())
            c_new[bad] = _C_FLOOR_FACTOR * ct.c_bar

    if not plan.opinion_inert:
        clipped = np.abs(v_new) > 1.0
        if clipped.any():
            diagnostics["opinion_clamps"] = diagnostics.get("opinion_clamps", 0) + int(clipped.sum())
            np.clip(v_new, -1.0, 1.0, out=v_new)

    return Ensemble(v_new, c_new, e.group)


def run(cfg: ScenarioConfig, threads: int = 1,
        bins_v: int = 64, c_range: tuple[float, float] = (1.0, 5000.0),
        bins_c: int = 64) -> RunResult:
    """Run the full scheme; snapshots at t = 0 and every scheduled time."""
    validate(cfg)
    e = initialize(cfg)
    plan = _make_plan(e, cfg)
    eps = cfg.sim.epsilon
    n_steps = int(np.rint(cfg.sim.t_final / eps))
    n_groups = len(cfg.groups)

    snap_at = {}
    for t in cfg.sim.snapshot_times:
        snap_at[int(np.rint(t / eps))] = t

    diagnostics = {"opinion_clamps": 0, "contact_clamps": 0,
                   "noise_resamples": 0, "rejected_pairs": 0}
    snapshots = [stats.observe(e, 0.0, n_groups, bins_v, c_range, bins_c)]
    if 0 in snap_at and snap_at[0] != 0.0:
        snapshots[0] = stats.observe(e, snap_at[0], n_groups, bins_v, c_range, bins_c)

    for step_index in range(n_steps):
        e = step(e, cfg, step_index, plan=plan, threads=threads, diagnostics=diagnostics)
        if (step_index + 1) in snap_at:
            snapshots.append(stats.observe(e, snap_at[step_index + 1],
                                           n_groups, bins_v, c_range, bins_c))
    return RunResult(snapshots, e, diagnostics, cfg)
