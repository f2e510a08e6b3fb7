"""Closed-form feedback controls for contacts and opinions."""

from __future__ import annotations

import numpy as np

from . import model
from .config import ActivationSpec, ContactControlParams, ContactParams, OpinionControlParams, OpinionParams


def rv_activation(spec: ActivationSpec, c):
    """Contact gate for the opinion control: constant 1 or decreasing sigmoid."""
    if spec.kind == "constant":
        return np.ones_like(np.asarray(c, dtype=float))
    return 1.0 / (1.0 + np.exp(-spec.steepness * (spec.threshold - np.asarray(c, dtype=float))))


def hv_activation(spec: ActivationSpec, rho):
    """Opinion-mass gate for the opinion control: constant 1 or increasing sigmoid."""
    if spec.kind == "constant":
        return np.ones_like(np.asarray(rho, dtype=float))
    return 1.0 / (1.0 + np.exp(-spec.steepness * (np.asarray(rho, dtype=float) - spec.threshold)))


def contact_control(c, rho, params: ContactControlParams,
                    contact_params: ContactParams, enabled=True):
    """Feedback law for the contact dynamics.

    kappa = lambda (beta / gamma_c) R_c(c) H_c(rho); always in
    [0, lambda beta / gamma_c], exactly 0 where disabled.
    """
    kappa = (params.lam * contact_params.beta / params.gamma_c
             * model.sigmoid_rc(c, params) * model.sigmoid_hc(rho, params))
    return np.where(enabled, kappa, 0.0)


def opinion_control_full(v, v_star, c, c_star, epsilon: float,
                         params: OpinionControlParams, op: OpinionParams,
                         rho=None, enabled=True):
    """Feedback law for the scaled binary opinion rule.

    u = -R_v H_v [v + eps*alpha*P(v,v*,c,c*)(v*-v) - v_target]
        / (gamma_v + eps*alpha*R_v H_v),
    i.e. the one-step minimizer with the interaction strength at its scaled
    value eps*alpha.  The sigmoid variant of H_v gates on the local opinion
    mass rho; with the constant variant rho is not read.
    """
    rv = rv_activation(params.rv_spec, c)
    if params.hv_spec.kind == "sigmoid" and rho is None:
        raise ValueError("the sigmoid H_v gates on the local opinion mass; pass rho")
    hv = hv_activation(params.hv_spec, rho if rho is not None else v)
    ea = epsilon * op.alpha
    p_term = ea * model.compromise(v, v_star, c, c_star, op) * (np.asarray(v_star, dtype=float) - v)
    u = -rv * hv * (np.asarray(v, dtype=float) + p_term - params.v_target) / (params.gamma_v + ea * rv * hv)
    return np.where(enabled, u, 0.0)


def opinion_control_limit(v, c, rho, params: OpinionControlParams, enabled=True):
    """Quasi-invariant limit of the opinion control:
    -R_v(c) H_v(rho) (v - v_target) / gamma_v."""
    rv = rv_activation(params.rv_spec, c)
    hv = hv_activation(params.hv_spec, rho)
    u = -rv * hv * (np.asarray(v, dtype=float) - params.v_target) / params.gamma_v
    return np.where(enabled, u, 0.0)
