"""Elementary model functions: drifts, interaction kernel, activations, noise.

Everything here is a pure function of scalars or numpy arrays; the particle
scheme in ``engine`` and the validation oracles both build on these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ContactControlParams, ContactParams


def value_function(s, params: ContactParams):
    """Asymmetric drift toward the reference contact level.

    Dimensionless, increasing, zero at s = 1 (s = c / c_bar).  Gains below
    the reference level are stronger than the incentive to shed contacts
    above it.
    """
    m = params.mu / (1.0 - params.mu)
    big_m = (1.0 + params.mu) / (1.0 - params.mu)
    s = np.asarray(s, dtype=float)
    return (m / params.beta) * (s - 1.0) / (big_m * s + 1.0)


def scaled_value_function(s, epsilon: float, params: ContactParams):
    """Quasi-invariant rescaling of :func:`value_function`.

    Converges pointwise to ``limit_value_function`` as epsilon -> 0 (s > 0).
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    m = params.mu / (1.0 - params.mu)
    big_m = (1.0 + params.mu) / (1.0 - params.mu)
    s_eps = np.power(np.asarray(s, dtype=float), epsilon)
    return (m / (params.beta * epsilon)) * (s_eps - 1.0) / (big_m * s_eps + 1.0)


def limit_value_function(s, params: ContactParams):
    """Pointwise limit of the scaled value function: (mu / (2 beta)) ln s."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("limit value function requires s > 0")
    return (params.mu / (2.0 * params.beta)) * np.log(s)


def opinion_penalty(v, m_v, params: ContactParams):
    """Contact drift penalizing opinions far from the population mean.

    Negative iff |v - m_v| < delta_phi; bounded in
    [-theta delta_phi^2, theta (4 - delta_phi^2)] on the opinion domain.
    """
    d = np.asarray(v, dtype=float) - m_v
    return params.theta * (d * d - params.delta_phi ** 2)


def diffusion_weight(v):
    """Opinion self-diffusion weight 1 - v^2; vanishes at the boundary."""
    v = np.asarray(v, dtype=float)
    return 1.0 - v * v


def connectivity_weight(c, c_star, p: float):
    """Relative-influence weight K(c, c*) = c*^p / (c^p + c*^p), in (0, 1)."""
    c = np.asarray(c, dtype=float)
    c_star = np.asarray(c_star, dtype=float)
    if p == 0:
        return np.full(np.broadcast(c, c_star).shape, 0.5)
    both_zero = (c == 0) & (c_star == 0)
    if np.any(both_zero):
        raise ValueError("K(0, 0) is an undefined form for p > 0")
    # computed via the ratio to stay finite for large contact counts
    with np.errstate(divide="ignore"):
        ratio = np.power(c / c_star, p)
    return 1.0 / (ratio + 1.0)


def compromise(v, v_star, c, c_star, params):
    """Interaction weight P = H(v, v*) K(c, c*).

    H is the strict bounded-confidence indicator |v - v*| < delta; K weights
    relative connectivity.
    """
    h = (np.abs(np.asarray(v, dtype=float) - v_star) < params.delta).astype(float)
    return h * connectivity_weight(c, c_star, params.p)


def sigmoid_rc(c, params: ContactControlParams):
    """Contact-side activation: 1/2 at c = c_min, decreasing in c."""
    return 1.0 / (1.0 + np.exp(-params.alpha_r * (params.c_min - np.asarray(c, dtype=float))))


def sigmoid_hc(rho, params: ContactControlParams):
    """Opinion-mass activation: 1/2 at rho = rho_star, increasing in rho."""
    return 1.0 / (1.0 + np.exp(-params.alpha_h * (np.asarray(rho, dtype=float) - params.rho_star)))


def eta_lower_bound(params: ContactParams) -> float:
    """Printed admissibility floor for the contact noise.

    Kept as a reference quantity only: at the default parameters the bound is
    positive, so the engine guarantees positivity of c by its resample/clamp
    safeguard instead of truncating the sampler here.
    """
    num = params.beta * params.theta * (4.0 - params.delta_phi ** 2) * (1.0 + params.mu) - 1.0
    return num / (1.0 + params.mu)


# ---------------------------------------------------------------------------
# Noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean noise: truncated Gaussian (default) or symmetric two-point.

    The Gaussian family is truncated symmetrically at +-6 std, which keeps the
    mean exactly zero and the realized std within 1% of the target.  An
    optional ``lower_bound`` floor rejects draws below it (this skews the mean
    and is only meant for experiments with the printed admissibility bound).
    """

    family: str = "truncated-gaussian"   # or "symmetric-two-point"
    std: float = 1.0
    lower_bound: float | None = None


def sample_noise(spec: NoiseSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    if spec.family == "symmetric-two-point":
        draws = np.where(rng.random(size) < 0.5, -spec.std, spec.std)
        if spec.lower_bound is not None and -spec.std < spec.lower_bound:
            raise ValueError("two-point noise support lies below the lower bound")
        return draws
    if spec.family != "truncated-gaussian":
        raise ValueError(f"unknown noise family {spec.family!r}")
    cut = 6.0 * spec.std
    draws = rng.normal(0.0, spec.std, size)
    bad = np.abs(draws) > cut
    if spec.lower_bound is not None:
        bad |= draws < spec.lower_bound
    while np.any(bad):
        redraw = rng.normal(0.0, spec.std, int(bad.sum()))
        draws[bad] = redraw
        bad = np.abs(draws) > cut
        if spec.lower_bound is not None:
            bad |= draws < spec.lower_bound
    return draws
