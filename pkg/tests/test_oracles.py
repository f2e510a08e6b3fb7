import numpy as np
import pytest

from kopsim import control, oracles
from kopsim.config import (ActivationSpec, ContactControlParams, ContactParams,
                           OpinionControlParams, OpinionParams)
from kopsim.stats import Ensemble


class TestSteadyStatePrediction:
    def test_vanishing_noise(self):
        p = ContactParams(mu=0.1, nu=1e-9)
        pred = oracles.predict_log_contact_steady_state(p, phi0=0.0, kappa0=0.0)
        assert pred.mean_log_c == pytest.approx(np.log(200.0), abs=1e-12)
        assert pred.var_log_c == pytest.approx(0.0, abs=1e-12)

    def test_reference_values(self):
        p = ContactParams(beta=1.0, mu=0.1, c_bar=200.0, nu=0.1)
        pred = oracles.predict_log_contact_steady_state(p)
        assert pred.var_log_c == pytest.approx(0.1)
        assert pred.mean_log_c == pytest.approx(np.log(200.0) - 0.1)

    def test_control_raises_mean(self):
        p = ContactParams(mu=0.1)
        base = oracles.predict_log_contact_steady_state(p, phi0=0.1, kappa0=0.1)
        pushed = oracles.predict_log_contact_steady_state(p, phi0=0.1, kappa0=0.3)
        assert pushed.mean_log_c > base.mean_log_c

    def test_requires_mean_reversion(self):
        with pytest.raises(ValueError):
            oracles.predict_log_contact_steady_state(ContactParams(mu=0.0))


class TestBruteForceContactCost:
    def test_no_incentive(self):
        cc = ContactControlParams(lam=0.0)
        ct = ContactParams()
        grid = np.linspace(0.0, 2.0, 101)
        k = oracles.brute_force_contact_cost(120.0, 0.1, 0.5, grid, cc, ct,
                                             noise_draws=20_000)
        assert k == 0.0

    def test_saturated_activations(self):
        cc = ContactControlParams(lam=1.0, gamma_c=1.0, alpha_r=50.0, alpha_h=50.0,
                                  c_min=100.0, rho_star=0.0)
        ct = ContactParams(beta=1.0)
        grid = np.linspace(0.0, 2.0, 201)
        k = oracles.brute_force_contact_cost(1.0, 0.0, 1.0, grid, cc, ct,
                                             noise_draws=50_000)
        assert abs(k - 1.0) <= grid[1] - grid[0]

    def test_heavy_penalty(self):
        cc = ContactControlParams(gamma_c=1e7)
        ct = ContactParams()
        grid = np.linspace(0.0, 2.0, 101)
        k = oracles.brute_force_contact_cost(50.0, 0.0, 0.9, grid, cc, ct,
                                             noise_draws=20_000)
        assert k == 0.0


class TestBruteForceOpinionCost:
    def test_gated_off(self):
        oc = OpinionControlParams(rv_spec=ActivationSpec("sigmoid", -30.0, 1.0))
        op = OpinionParams()
        grid = np.linspace(-0.2, 0.2, 201)
        u = oracles.brute_force_opinion_cost(0.0, 0.1, 50.0, 50.0, grid, oc, op,
                                             noise_draws=20_000)
        assert abs(u) <= grid[1] - grid[0]

    def test_zero_at_target(self):
        oc = OpinionControlParams(v_target=0.5)
        op = OpinionParams(sigma=0.0)
        grid = np.linspace(-0.2, 0.2, 201)
        # partner outside the confidence bound: interaction term vanishes
        u = oracles.brute_force_opinion_cost(0.5, -0.5, 100.0, 100.0, grid, oc, op,
                                             noise_draws=20_000)
        assert abs(u) <= grid[1] - grid[0]

    def test_matches_closed_form(self):
        oc = OpinionControlParams(gamma_v=10.0, v_target=0.5)
        op = OpinionParams()
        eps = 1e-3
        u_star = float(control.opinion_control_full(0.0, 0.9, 100.0, 100.0, eps, oc, op))
        grid = np.linspace(u_star - 0.1, u_star + 0.1, 201)
        u_hat = oracles.brute_force_opinion_cost(0.0, 0.9, 100.0, 100.0, grid, oc, op,
                                                 epsilon=eps, noise_draws=100_000)
        assert abs(u_hat - u_star) <= grid[1] - grid[0]


class TestBruteForceRho:
    def test_examples(self):
        e = Ensemble(np.array([-0.9, 0.0, 0.1, 0.9]), np.ones(4),
                     np.zeros(4, dtype=np.int64))
        rho = oracles.brute_force_rho(e, 0.2)
        assert rho[1] == pytest.approx(0.5)
        e1 = Ensemble(np.array([0.3]), np.ones(1), np.zeros(1, dtype=np.int64))
        assert oracles.brute_force_rho(e1, 0.5) == pytest.approx([1.0])


class TestScalingReport:
    def test_mu_zero_is_exact(self):
        ct = ContactParams(mu=0.0)
        report = oracles.scaling_consistency_report(
            np.geomspace(0.1, 10.0, 21), [1e-1, 1e-2, 1e-3], ct)
        assert np.all(report.psi_errors == 0.0)
        assert np.isnan(report.psi_order)

    def test_reference_point_is_exact(self):
        ct = ContactParams(mu=0.1)
        report = oracles.scaling_consistency_report([1.0], [1e-1, 1e-2], ct)
        assert np.all(report.psi_errors == 0.0)

    def test_first_order_halving(self):
        ct = ContactParams(mu=0.1)
        report = oracles.scaling_consistency_report(
            np.geomspace(0.1, 10.0, 21), [2e-2, 1e-2], ct)
        for errs in (report.psi_errors, report.control_errors):
            ratio = errs[0] / errs[1]
            assert 1.6 <= ratio <= 2.4

    def test_epsilons_sorted_descending_in_report(self):
        ct = ContactParams(mu=0.2)
        report = oracles.scaling_consistency_report(
            [0.5, 2.0], [1e-3, 1e-1, 1e-2], ct)
        assert list(report.epsilons) == [1e-1, 1e-2, 1e-3]
        assert report.psi_order == pytest.approx(1.0, abs=0.4)
        assert report.control_order == pytest.approx(1.0, abs=0.4)
