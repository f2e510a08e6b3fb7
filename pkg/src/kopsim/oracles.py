"""Independent validation oracles.

These deliberately avoid the closed-form code paths they check: the
steady-state target comes from a by-hand Ito derivation, the control laws are
checked against brute-force grid minimization of the one-step cost
functionals, and the fast neighbor count is checked against an O(n^2) loop.

Steady-state derivation (frozen opinion penalty phi0 and control kappa0):
the scaled update  c' = c (1 - eps*beta*(Psi^eps(c/cbar) + phi0 - kappa0) + eta),
Var(eta) = eps*nu^2, is exact in y = ln c:
    dy = ln(1 - eps*beta*Psi^eps - eps*beta*(phi0 - kappa0) + eta).
Expanding to O(eps):  E[dy] = -eps*beta*Psi^eps - eps*beta*(phi0-kappa0)
- eps*nu^2/2, and beta*Psi^eps -> (mu/2)(y - ln cbar) as eps -> 0 (the 1/beta
prefactor of Psi cancels).  Hence y follows an Ornstein-Uhlenbeck process
    dy = -(mu/2) (y - y_inf) dt + nu dW,
    y_inf = ln cbar - (2/mu) (beta*(phi0 - kappa0) + nu^2/2),
with stationary variance nu^2 / (2 * (mu/2)) = nu^2 / mu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import control, model
from .config import ContactControlParams, ContactParams, OpinionControlParams, OpinionParams
from .stats import Ensemble


@dataclass(frozen=True)
class SteadyStatePrediction:
    mean_log_c: float
    var_log_c: float


def predict_log_contact_steady_state(params: ContactParams, phi0: float = 0.0,
                                     kappa0: float = 0.0) -> SteadyStatePrediction:
    """Stationary mean/variance of ln c in the quasi-invariant regime.

    Valid for mu > 0 (mu = 0 removes the mean reversion entirely, which is
    why the reference experiments - run at mu = 0 - cannot use this oracle).
    """
    if params.mu <= 0:
        raise ValueError("steady-state oracle requires mu > 0 (no mean reversion at mu = 0)")
    mu, nu, beta = params.mu, params.nu, params.beta
    mean = np.log(params.c_bar) - (2.0 / mu) * (beta * (phi0 - kappa0) + nu ** 2 / 2.0)
    return SteadyStatePrediction(mean_log_c=float(mean), var_log_c=nu ** 2 / mu)


def brute_force_contact_cost(c: float, v: float, rho: float, kappa_grid,
                             cc: ContactControlParams, ct: ContactParams,
                             m_v: float = 0.0, epsilon: float = 1e-3,
                             noise_draws: int = 100_000,
                             rng: np.random.Generator | None = None) -> float:
    """Empirical minimizer of the one-step contact cost over a kappa grid.

    Monte Carlo evaluation of
        E[ -lambda (c'-c)/c R_c(c) H_c(rho) + eps*gamma_c/2 kappa^2 ]
    with the scaled update (the quadratic penalty carries the same eps
    scaling as the interaction, which is what makes the closed-form law
    scale-invariant).  The same noise draws are reused for every grid point.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    kappa_grid = np.asarray(kappa_grid, dtype=float)
    eta = model.sample_noise(model.NoiseSpec(std=np.sqrt(epsilon) * ct.nu), noise_draws, rng)
    activation = float(model.sigmoid_rc(c, cc) * model.sigmoid_hc(rho, cc))
    psi = float(model.scaled_value_function(c / ct.c_bar, epsilon, ct))
    phi = float(model.opinion_penalty(v, m_v, ct))
    costs = np.empty(len(kappa_grid))
    for k, kappa in enumerate(kappa_grid):
        rel_change = -epsilon * ct.beta * (psi + phi - kappa) + eta
        costs[k] = np.mean(-cc.lam * rel_change * activation) \
            + 0.5 * epsilon * cc.gamma_c * kappa ** 2
    return float(kappa_grid[int(np.argmin(costs))])


def brute_force_opinion_cost(v: float, v_star: float, c: float, c_star: float,
                             u_grid, oc: OpinionControlParams, op: OpinionParams,
                             rho: float | None = None, epsilon: float = 1e-3,
                             noise_draws: int = 100_000,
                             rng: np.random.Generator | None = None) -> float:
    """Empirical minimizer of the one-step opinion cost over a u grid.

    Monte Carlo evaluation of
        E[ 1/2 (v' - v_target)^2 R_v H_v + gamma_v/2 eps*alpha u^2 ]
    with the scaled binary rule, common noise draws across the grid.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    u_grid = np.asarray(u_grid, dtype=float)
    xi = model.sample_noise(model.NoiseSpec(std=1.0), noise_draws, rng)
    rv = float(control.rv_activation(oc.rv_spec, c))
    hv = float(control.hv_activation(oc.hv_spec, rho if rho is not None else v))
    ea = epsilon * op.alpha
    p = float(model.compromise(v, v_star, c, c_star, op))
    noise_term = np.sqrt(epsilon) * op.sigma * model.diffusion_weight(v) * xi
    costs = np.empty(len(u_grid))
    for k, u in enumerate(u_grid):
        v_prime = v + ea * (p * (v_star - v) + u) + noise_term
        costs[k] = np.mean(0.5 * (v_prime - oc.v_target) ** 2 * rv * hv) \
            + 0.5 * oc.gamma_v * ea * u ** 2
    return float(u_grid[int(np.argmin(costs))])


def brute_force_rho(e: Ensemble, r: float) -> np.ndarray:
    """O(n^2) reference for the local opinion mass (self-inclusive, closed ball).

    The ball test is written as v_i - r <= v_j <= v_i + r so that rounding of
    the interval endpoints matches the fast estimator's exactly.
    """
    n = e.n
    rho = np.empty(n)
    for i in range(n):
        rho[i] = np.count_nonzero((e.v >= e.v[i] - r) & (e.v <= e.v[i] + r))
    return rho / n


@dataclass
class ScalingReport:
    epsilons: np.ndarray
    psi_errors: np.ndarray       # max-norm over the s grid
    control_errors: np.ndarray   # max-norm over the state grid
    psi_order: float             # least-squares slope of ln err vs ln eps
    control_order: float


def _fit_order(epsilons: np.ndarray, errors: np.ndarray) -> float:
    if np.all(errors == 0):
        return float("nan")
    return float(np.polyfit(np.log(epsilons), np.log(errors), 1)[0])


def scaling_consistency_report(s_grid, epsilon_list, ct: ContactParams,
                               oc: OpinionControlParams | None = None,
                               op: OpinionParams | None = None) -> ScalingReport:
    """Max-norm errors of the scaled quantities against their limits, per epsilon.

    The control comparison uses a fixed grid of pair states (opinions on a
    uniform grid, contacts at a few representative levels).
    """
    oc = oc or OpinionControlParams()
    op = op or OpinionParams()
    s_grid = np.asarray(s_grid, dtype=float)
    epsilons = np.asarray(sorted(epsilon_list, reverse=True), dtype=float)
    limit = model.limit_value_function(s_grid, ct)

    vv = np.linspace(-0.95, 0.95, 13)
    v_pairs = np.array([(a, b) for a in vv for b in vv])
    c_pairs = np.array([(50.0, 50.0), (50.0, 200.0), (200.0, 50.0), (400.0, 150.0)])
    u_lim = np.concatenate([
        control.opinion_control_limit(v_pairs[:, 0], np.full(len(v_pairs), ca), 0.5, oc)
        for ca, _ in c_pairs])

    psi_errors = np.empty(len(epsilons))
    ctrl_errors = np.empty(len(epsilons))
    for k, eps in enumerate(epsilons):
        psi_errors[k] = np.max(np.abs(model.scaled_value_function(s_grid, eps, ct) - limit))
        u_full = np.concatenate([
            control.opinion_control_full(v_pairs[:, 0], v_pairs[:, 1],
                                         np.full(len(v_pairs), ca),
                                         np.full(len(v_pairs), cb), eps, oc, op, rho=0.5)
            for ca, cb in c_pairs])
        ctrl_errors[k] = np.max(np.abs(u_full - u_lim))
    return ScalingReport(epsilons, psi_errors, ctrl_errors,
                         _fit_order(epsilons, psi_errors),
                         _fit_order(epsilons, ctrl_errors))
