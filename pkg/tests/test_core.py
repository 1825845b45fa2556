import math

import numpy as np
import pytest

from conftest import draw_params_shock, rng_for
from zlbkit.core import (
    DegenerateChainError,
    InvalidParameterError,
    MarkovShock,
    ModelParams,
    SingularSystemError,
    StateOutcome,
    build_matrices,
    delta,
    ergodic_weight,
    nu,
)


class TestModelParams:
    def test_mu_defaults_to_minus_log_beta(self):
        p = ModelParams(beta=0.99, sigma=1.0, lam=0.02)
        assert p.mu == pytest.approx(-math.log(0.99), rel=1e-15)

    def test_psi_default_is_two(self):
        assert ModelParams(beta=0.99, sigma=1.0, lam=0.02).psi == 2.0

    def test_invalid_rejected(self):
        with pytest.raises(InvalidParameterError):
            ModelParams(beta=1.0, sigma=1.0, lam=0.02)
        with pytest.raises(InvalidParameterError):
            ModelParams(beta=0.99, sigma=-1.0, lam=0.02)
        with pytest.raises(InvalidParameterError):
            ModelParams(beta=0.99, sigma=1.0, lam=0.02, mu=-0.01)
        with pytest.raises(InvalidParameterError):
            ModelParams(beta=0.99, sigma=1.0, lam=0.02, M=1.2)

    def test_passive_taylor_allowed_but_flagged(self):
        p = ModelParams(beta=0.99, sigma=1.0, lam=0.02, psi=0.8)
        assert not p.taylor_active
        with pytest.raises(InvalidParameterError):
            p.require_taylor()


class TestMarkovShock:
    def test_bounds(self):
        with pytest.raises(InvalidParameterError):
            MarkovShock(eps1=0.0, eps2=0.0, p=0.0, q=0.5)
        with pytest.raises(InvalidParameterError):
            MarkovShock(eps1=0.0, eps2=0.0, p=0.5, q=1.1)

    def test_rho_range(self):
        s = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        assert -1.0 < s.rho <= 1.0
        assert s.rho == pytest.approx(0.83)

    def test_rows_sum_to_one(self):
        rng = rng_for(11)
        for _ in range(50):
            _, s = draw_params_shock(rng)
            assert np.allclose(s.K.sum(axis=1), 1.0, atol=1e-14)


class TestErgodicWeight:
    def test_direct_formula(self):
        s = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        assert ergodic_weight(s) == pytest.approx(0.15 / 0.17, abs=1e-12)

    def test_absorbing_high_state_gives_one(self):
        s = MarkovShock(eps1=-0.01, eps2=0.0, p=0.5, q=1.0)
        assert ergodic_weight(s) == 1.0

    def test_symmetric_chain(self):
        s = MarkovShock(eps1=0.0, eps2=0.0, p=0.5, q=0.5)
        assert ergodic_weight(s) == pytest.approx(0.5, abs=1e-15)

    def test_double_absorbing_raises(self):
        s = MarkovShock(eps1=0.0, eps2=0.0, p=1.0, q=1.0)
        with pytest.raises(DegenerateChainError):
            ergodic_weight(s)

    def test_is_stationary_distribution(self):
        rng = rng_for(12)
        for _ in range(50):
            _, s = draw_params_shock(rng)
            qbar = ergodic_weight(s)
            dist = np.array([1.0 - qbar, qbar])
            assert np.allclose(dist @ s.K, dist, atol=1e-12)


class TestNu:
    def test_unit_discount_value(self):
        # 1 + 0.02/(1 - 0.99*0.85), cross-checked by high-precision evaluation
        p = ModelParams(beta=0.99, sigma=1.0, lam=0.02)
        assert nu(p, 0.85) == pytest.approx(1.1261829652996846, abs=1e-12)

    def test_zero_persistence(self):
        p = ModelParams(beta=0.99, sigma=0.7, lam=0.05, M=0.9, Mf=0.8, N=0.95)
        assert nu(p, 0.0) == pytest.approx(p.M + p.N * p.a, rel=1e-14)

    def test_exceeds_one_at_unit_discounts(self):
        rng = rng_for(13)
        for _ in range(100):
            prm, _ = draw_params_shock(rng)
            pr = float(rng.uniform(1e-6, 1.0))
            assert nu(prm, pr) > 1.0

    def test_singularity_raises(self):
        p = ModelParams(beta=0.99, sigma=1.0, lam=0.02)
        with pytest.raises(SingularSystemError):
            nu(p, 1.0 / 0.99)

    def test_flexible_price_limit_is_demand_discount(self):
        p = ModelParams(beta=0.99, sigma=1.0, lam=1e-12, M=0.9, Mf=0.8, N=0.7)
        assert nu(p, 0.5) == pytest.approx(p.M, abs=1e-11)


class TestDelta:
    def test_gabaix_value(self, gabaix_params):
        assert delta(gabaix_params) == pytest.approx(-0.0092, abs=1e-12)

    def test_mckay_value(self, mckay_params):
        assert delta(mckay_params) == pytest.approx(0.0072, abs=1e-12)

    def test_unit_discounts_give_lam_sigma(self, baseline_params):
        assert delta(baseline_params) == pytest.approx(baseline_params.a, rel=1e-14)

    def test_never_exceeds_lam_sigma(self):
        rng = rng_for(14)
        for _ in range(200):
            prm, _ = draw_params_shock(rng, discounted=True)
            assert delta(prm) <= prm.a + 1e-15


class TestBuildMatrices:
    def test_floor_loading_at_baseline(self, baseline_params, trap_shock):
        m = build_matrices(baseline_params, trap_shock)
        assert np.allclose(m.A_Z, [[1.0, 1.0], [0.02, 1.01]], atol=1e-14)

    def test_slack_loading_at_unit_discounts(self, baseline_params, trap_shock):
        m = build_matrices(baseline_params, trap_shock)
        d = 1.0 + 0.02 * 2.0
        expected = [[1.0 / d, (1.0 - 0.99 * 2.0) / d],
                    [0.02 / d, (0.99 + 0.02) / d]]
        assert np.allclose(m.A_P, expected, atol=1e-14)

    def test_double_absorbing_gives_identity_transition(self):
        s = MarkovShock(eps1=0.0, eps2=0.0, p=1.0, q=1.0)
        p = ModelParams(beta=0.99, sigma=1.0, lam=0.02)
        assert np.allclose(build_matrices(p, s).K, np.eye(2))

    def test_q_reduces_at_unit_discounts(self, baseline_params, trap_shock):
        m = build_matrices(baseline_params, trap_shock)
        K = trap_shock.K
        expected = (np.eye(2) - (1.0 + 0.99 + 0.02) * K + 0.99 * (K @ K))
        assert np.allclose(m.Q, expected, atol=1e-14)

    def test_intercepts(self, baseline_params, trap_shock):
        m = build_matrices(baseline_params, trap_shock)
        assert np.allclose(m.b_slack(0.0), 0.0)
        mu = baseline_params.mu
        assert np.allclose(m.b_binding(0.0), [mu, 0.02 * mu], atol=1e-15)

    def test_taylor_block_invertible(self):
        rng = rng_for(15)
        for _ in range(100):
            prm, shk = draw_params_shock(rng)
            m = build_matrices(prm, shk)
            blk = m.Q + prm.a * prm.psi * np.eye(2)
            assert np.linalg.det(blk) > 1e-12 * np.linalg.norm(blk) ** 2


class TestConfigLoading:
    def test_flat_object_with_defaults(self):
        doc = {"beta": 0.99, "sigma": 1.0, "lambda": 0.02,
               "eps1": -0.04, "eps2": 0.0, "p": 0.85, "q": 0.98}
        prm = ModelParams.from_config(doc)
        shk = MarkovShock.from_config(doc)
        assert prm.lam == 0.02 and prm.M == prm.Mf == prm.N == 1.0
        assert prm.psi == 2.0 and prm.mu == pytest.approx(-math.log(0.99))
        assert shk.p == 0.85 and shk.eps1 == -0.04

    def test_unknown_key_rejected(self):
        with pytest.raises(InvalidParameterError):
            ModelParams.from_config({"beta": 0.99, "sigma": 1.0, "lambda": 0.02,
                                     "kappa": 0.1})


class TestStateOutcome:
    def test_policy_rule_enforced(self, baseline_params):
        out = StateOutcome.from_pi(x=0.1, pi=0.05, params=baseline_params)
        assert out.i == pytest.approx(0.1)
        out = StateOutcome.from_pi(x=-0.1, pi=-0.05, params=baseline_params)
        assert out.i == pytest.approx(-baseline_params.mu)
