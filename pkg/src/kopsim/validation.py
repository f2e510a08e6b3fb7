"""Oracle suites behind the ``validate`` CLI subcommand.

Each suite returns a list of check rows; a run passes iff every row does.
The same suites back the acceptance tests, so their tolerances are pinned
here and nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import control, oracles
from .config import (ContactParams, GroupSpec, OpinionControlParams, OpinionParams,
                     ScenarioConfig, SimParams)
from .engine import run


@dataclass
class CheckRow:
    suite: str
    name: str
    oracle_value: float
    observed_value: float
    tolerance: float
    passed: bool


def suite_steady_state(n_particles: int = 100_000, t_final: float = 200.0,
                       epsilon: float = 1e-2, seed: int = 20_240_001,
                       threads: int = 1) -> list[CheckRow]:
    """Long frozen-opinion run against the analytic log-contact steady state.

    mu = 0.1 turns on the mean reversion (the reference experiments use
    mu = 0, where no stationary law exists); opinions are frozen and the
    opinion penalty disabled so the contact dynamics decouple per agent.
    """
    ct = ContactParams(beta=1.0, mu=0.1, c_bar=200.0, theta=0.0, delta_phi=0.1, nu=0.1)
    cfg = ScenarioConfig(
        contacts=ct,
        opinions=OpinionParams(alpha=0.0, sigma=0.0),
        sim=SimParams(epsilon=epsilon, t_final=t_final, n_particles=n_particles,
                      seed=seed, snapshot_times=(t_final,)),
        groups=(GroupSpec(name="all", fraction=1.0,
                          init_c_range=(150.0, 220.0), init_v_range=(0.0, 0.0)),),
    )
    result = run(cfg, threads=threads)
    y = np.log(result.final_ensemble.c)
    pred = oracles.predict_log_contact_steady_state(ct, phi0=0.0, kappa0=0.0)
    mean_emp, var_emp = float(np.mean(y)), float(np.var(y))
    return [
        CheckRow("steady-state", "mean_log_c", pred.mean_log_c, mean_emp, 0.05,
                 abs(mean_emp - pred.mean_log_c) <= 0.05),
        CheckRow("steady-state", "var_log_c", pred.var_log_c, var_emp,
                 0.10 * pred.var_log_c,
                 abs(var_emp - pred.var_log_c) <= 0.10 * pred.var_log_c),
    ]


def suite_minimizers(n_states: int = 50, grid_points: int = 201,
                     noise_draws: int = 100_000, seed: int = 7,
                     epsilon: float = 1e-3) -> list[CheckRow]:
    """Closed-form controls vs brute-force grid minimization on random states."""
    rng = np.random.default_rng(seed)
    cc = ScenarioConfig().contact_control
    ct = ContactParams()
    oc = OpinionControlParams()
    op = OpinionParams()
    rows = []

    kappa_max = 2.0 * cc.lam * ct.beta / cc.gamma_c
    kappa_grid = np.linspace(0.0, kappa_max, grid_points)
    cell_k = kappa_grid[1] - kappa_grid[0]
    for i in range(n_states):
        c = rng.uniform(10.0, 400.0)
        v = rng.uniform(-1.0, 1.0)
        m_v = rng.uniform(-1.0, 1.0)
        rho = rng.uniform(0.0, 1.0)
        kappa_hat = oracles.brute_force_contact_cost(
            c, v, rho, kappa_grid, cc, ct, m_v=m_v, epsilon=epsilon,
            noise_draws=noise_draws, rng=rng)
        kappa_star = float(control.contact_control(c, rho, cc, ct))
        rows.append(CheckRow("minimizers", f"kappa_{i}", kappa_star, kappa_hat,
                             cell_k, abs(kappa_hat - kappa_star) <= cell_k))

    for i in range(n_states):
        v = rng.uniform(-1.0, 1.0)
        v_star = rng.uniform(-1.0, 1.0)
        c = rng.uniform(10.0, 400.0)
        c_star = rng.uniform(10.0, 400.0)
        u_star_analytic = float(control.opinion_control_full(
            v, v_star, c, c_star, epsilon, oc, op))
        u_grid = np.linspace(u_star_analytic - 0.25, u_star_analytic + 0.25, grid_points)
        cell_u = u_grid[1] - u_grid[0]
        u_hat = oracles.brute_force_opinion_cost(
            v, v_star, c, c_star, u_grid, oc, op, epsilon=epsilon,
            noise_draws=noise_draws, rng=rng)
        rows.append(CheckRow("minimizers", f"u_{i}", u_star_analytic, u_hat,
                             cell_u, abs(u_hat - u_star_analytic) <= cell_u))
    return rows


def suite_scaling(mu: float = 0.1) -> list[CheckRow]:
    """Empirical convergence order of the scaled drift and control (target 1)."""
    ct = replace(ContactParams(), mu=mu)
    epsilons = np.geomspace(1e-1, 1e-3, 9)
    s_grid = np.geomspace(0.1, 10.0, 101)
    report = oracles.scaling_consistency_report(s_grid, epsilons, ct)
    rows = []
    if np.all(report.psi_errors == 0):
        rows.append(CheckRow("scaling", "psi_order", 1.0, 0.0, 0.4, True))
    else:
        rows.append(CheckRow("scaling", "psi_order", 1.0, report.psi_order, 0.4,
                             abs(report.psi_order - 1.0) <= 0.4))
    rows.append(CheckRow("scaling", "control_order", 1.0, report.control_order, 0.4,
                         abs(report.control_order - 1.0) <= 0.4))
    return rows


SUITES = {
    "steady-state": suite_steady_state,
    "minimizers": suite_minimizers,
    "scaling": suite_scaling,
}


def run_suites(names: list[str], **kwargs) -> list[CheckRow]:
    rows: list[CheckRow] = []
    for name in names:
        rows.extend(SUITES[name]())
    return rows
