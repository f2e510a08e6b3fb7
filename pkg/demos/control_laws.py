"""Closed-form feedback controls recovered by brute-force minimization.

The contact and opinion controls used by the engine are instantaneous
minimizers of one-step quadratic cost functionals.  Here both closed forms
are checked against direct Monte Carlo grid minimization of those costs at a
handful of states, and the limiting opinion control is shown converging to
the finite-epsilon one.
"""

import numpy as np

from kopsim import control
from kopsim.config import ContactControlParams, ContactParams, OpinionControlParams, OpinionParams
from kopsim.oracles import brute_force_contact_cost, brute_force_opinion_cost

cc, ct = ContactControlParams(), ContactParams()
oc, op = OpinionControlParams(), OpinionParams()

print("contact control: closed form vs brute-force grid minimizer")
kappa_grid = np.linspace(-0.5, 1.5, 201)
for c, rho in ((50.0, 0.8), (120.0, 0.5), (300.0, 0.2)):
    closed = float(control.contact_control(np.array([c]), np.array([rho]), cc, ct)[0])
    brute = brute_force_contact_cost(c, 0.3, rho, kappa_grid, cc, ct)
    print(f"  c={c:>5.0f} rho={rho:.1f}:  kappa*={closed:+.4f}  grid argmin={brute:+.4f}")

print("\nopinion control: closed form vs brute-force grid minimizer")
u_grid = np.linspace(-0.2, 0.2, 201)
eps = 1e-2
for v, v_star, c, c_star in ((-0.4, 0.1, 100.0, 150.0), (0.2, 0.3, 200.0, 50.0)):
    closed = float(control.opinion_control_full(
        np.array([v]), np.array([v_star]), np.array([c]), np.array([c_star]), eps, oc, op)[0])
    brute = brute_force_opinion_cost(v, v_star, c, c_star, u_grid, oc, op, epsilon=eps)
    print(f"  v={v:+.1f} v*={v_star:+.1f}:  u*={closed:+.5f}  grid argmin={brute:+.5f}")

print("\nfull opinion control -> limiting form as epsilon -> 0")
v = np.array([-0.4])
lim = float(control.opinion_control_limit(v, np.array([100.0]), 0.5, oc)[0])
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    full = float(control.opinion_control_full(
        v, np.array([0.1]), np.array([100.0]), np.array([150.0]), eps, oc, op, rho=0.5)[0])
    print(f"  eps={eps:<7.0e} u={full:+.6f}   (limit {lim:+.6f}, gap {abs(full - lim):.2e})")
