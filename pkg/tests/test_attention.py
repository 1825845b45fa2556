import math

import numpy as np
import pytest

from oracles import central_difference
from zlbkit.attention import (
    AttentionParams,
    AttentionUndefinedError,
    calvo_theta,
    derivative_quantities,
    firm_discount,
    firm_price_low,
    firm_price_low_dmf1,
    high_state_block,
    low_state_block,
    optimal_attention,
    reset_slope,
    resolve_theta,
    solve_endogenous_bre,
    solve_endogenous_bre_multi,
    solve_state2_attention,
    x_composite,
)
from zlbkit.core import InvalidParameterError, MarkovShock, ModelParams
from zlbkit.equilibrium import Regime

ATTN = AttentionParams()


@pytest.fixture
def attn_params():
    return ModelParams(beta=0.99, sigma=1.0, lam=0.02, psi=2.0)


@pytest.fixture
def attn_shock():
    return MarkovShock(eps1=-0.005, eps2=0.0, p=0.9, q=1.0)


class TestCalvo:
    def test_plain_relation_root(self):
        theta = calvo_theta(0.02, 0.99)
        assert theta == pytest.approx(0.8722, abs=5e-5)
        assert reset_slope(theta, 0.99) == pytest.approx(0.02, abs=1e-12)

    def test_resolved_theta_includes_cost_slope(self, attn_params):
        # lam = reset_slope * (sigma + phi_labor) with phi_labor = 1
        theta = resolve_theta(attn_params, ATTN)
        assert theta == pytest.approx(10.0 / 11.0, abs=1e-12)
        assert reset_slope(theta, 0.99) * 2.0 == pytest.approx(0.02, abs=1e-12)

    def test_explicit_theta_wins(self, attn_params):
        attn = AttentionParams(theta=0.8)
        assert resolve_theta(attn_params, attn) == 0.8


class TestFirmDerivativeOracle:
    def test_matches_finite_differences(self, attn_params):
        bt = 0.99 * resolve_theta(attn_params, ATTN)
        rng = np.random.default_rng(71)
        for _ in range(50):
            mf1, mf2 = rng.uniform(0.3, 0.99, size=2)
            p = float(rng.uniform(0.5, 0.95))
            mc1, mc2, pi1, pi2 = rng.uniform(-0.1, 0.1, size=4)
            price = lambda m: firm_price_low(m, mf2, p, bt, mc1, mc2, pi1, pi2)
            fd = central_difference(price, mf1)
            an = firm_price_low_dmf1(mf1, mf2, p, bt, mc1, mc2, pi1, pi2)
            assert an == pytest.approx(fd, rel=1e-6, abs=1e-10)


class TestOptimalAttention:
    def test_interior(self):
        assert optimal_attention(0.7, 0.01, 1e-3) == pytest.approx(0.9)

    def test_default_floor(self):
        assert optimal_attention(0.7, 0.01, 1e-5) == 0.7

    def test_zero_sensitivity_is_default(self):
        assert optimal_attention(0.7, 0.01, 0.0) == 0.7

    def test_undefined_raises(self):
        with pytest.raises(AttentionUndefinedError):
            optimal_attention(0.7, 0.01, math.nan)


class TestHighStateFixedPoint:
    def test_reported_calibration(self, attn_params, attn_shock):
        m2, mf2 = solve_state2_attention(attn_params, attn_shock, ATTN)
        theta = resolve_theta(attn_params, ATTN)
        Mf2 = firm_discount(mf2, theta, 0.99)
        assert m2 == pytest.approx(0.8977, abs=5e-4)
        assert mf2 == pytest.approx(0.9808, abs=5e-4)
        assert Mf2 == pytest.approx(0.9677, abs=5e-4)

    def test_floor_binds_at_solution(self, attn_params, attn_shock):
        m2, mf2 = solve_state2_attention(attn_params, attn_shock, ATTN)
        theta = resolve_theta(attn_params, ATTN)
        blk = high_state_block(Regime.ZZ, attn_params, ATTN, m2,
                               firm_discount(mf2, theta, 0.99))
        assert attn_params.psi * blk.pi <= -attn_params.mu

    def test_domain_guards(self, attn_params):
        with pytest.raises(InvalidParameterError):
            solve_state2_attention(attn_params,
                                   MarkovShock(eps1=-0.01, eps2=0.0, p=0.9, q=0.9), ATTN)
        prm = ModelParams(beta=0.99, sigma=0.5, lam=0.02, psi=2.0)
        with pytest.raises(InvalidParameterError):
            solve_state2_attention(prm,
                                   MarkovShock(eps1=-0.01, eps2=0.0, p=0.9, q=1.0), ATTN)


class TestDerivativeQuantities:
    def test_high_state_undefined_for_zero_exposure(self, attn_params, attn_shock):
        high = high_state_block(Regime.ZP, attn_params, ATTN, 0.9, 0.9)
        low = low_state_block(Regime.ZP, attn_params, ATTN, 0.9, 0.9, high,
                              attn_shock.eps1, attn_shock.p)
        q = derivative_quantities(Regime.ZP, low, high, 0.9, 0.9,
                                  attn_params, attn_shock, ATTN)
        assert math.isnan(q.household_high) and math.isnan(q.firm_high)
        assert q.household_low > 0.0 and q.firm_low > 0.0

    def test_zero_shock_kills_low_state_quantities(self, attn_params):
        shock = MarkovShock(eps1=0.0, eps2=0.0, p=0.9, q=1.0)
        high = high_state_block(Regime.PP, attn_params, ATTN, 0.7, 0.7)
        low = low_state_block(Regime.PP, attn_params, ATTN, 0.7, 0.7, high, 0.0, 0.9)
        q = derivative_quantities(Regime.PP, low, high, 0.7, 0.7,
                                  attn_params, shock, ATTN)
        assert q.household_low == pytest.approx(0.0, abs=1e-30)
        assert q.firm_low == pytest.approx(0.0, abs=1e-30)

    def test_printed_household_low_form(self, attn_params, attn_shock):
        # (beta*p)^2 (X1(1-m2*beta) + m2(1-p)*beta*X2)^2 over
        # (1-beta*p*m_d1)^4 (1-m2*beta)^2
        m2b, mf2b = 0.89, 0.98
        theta = resolve_theta(attn_params, ATTN)
        high = high_state_block(Regime.ZZ, attn_params, ATTN, m2b,
                                firm_discount(mf2b, theta, 0.99))
        low = low_state_block(Regime.ZZ, attn_params, ATTN, 0.8, 0.8, high,
                              attn_shock.eps1, attn_shock.p)
        q = derivative_quantities(Regime.ZZ, low, high, m2b, mf2b,
                                  attn_params, attn_shock, ATTN)
        beta, p = 0.99, attn_shock.p
        X1 = x_composite(low, beta, attn_shock.eps1)
        X2 = x_composite(high, beta, 0.0)
        num = (beta * p) ** 2 * (X1 * (1 - m2b * beta) + m2b * (1 - p) * beta * X2) ** 2
        den = (1 - beta * p * ATTN.m_d1) ** 4 * (1 - m2b * beta) ** 2
        assert q.household_low == pytest.approx(num / den, rel=1e-12)


class TestEndogenousSolutions:
    def test_convention_applies_low_state_choice_to_high(self, attn_params, attn_shock):
        sol = solve_endogenous_bre(Regime.ZP, attn_params, attn_shock, ATTN)
        assert sol.m2 == sol.m1
        assert sol.mf2 == sol.mf1

    def test_exists_near_zero_shock(self, attn_params):
        shock = MarkovShock(eps1=-0.001, eps2=0.0, p=0.9, q=1.0)
        sols = solve_endogenous_bre_multi(Regime.PP, attn_params, shock, ATTN)
        assert any(s.exists for s in sols)

    def test_huge_cost_keeps_defaults(self, attn_params, attn_shock):
        lazy = AttentionParams(xi_c=1e6, xi_f=1e6)
        sol = solve_endogenous_bre(Regime.ZP, attn_params, attn_shock, lazy)
        assert sol.m1 == lazy.m_d1 and sol.mf1 == lazy.m_df1

    def test_fixed_point_residual_below_tolerance(self, attn_params, attn_shock):
        sol = solve_endogenous_bre(Regime.PP, attn_params, attn_shock, ATTN)
        theta = resolve_theta(attn_params, ATTN)
        bt = 0.99 * theta
        low = low_state_block(Regime.PP, attn_params, ATTN, sol.m1,
                              firm_discount(sol.mf1, theta, 0.99), sol.high,
                              attn_shock.eps1, attn_shock.p)
        X1 = x_composite(low, 0.99, attn_shock.eps1)
        hh = (0.99 * attn_shock.p * X1) ** 2 / (1 - 0.99 * attn_shock.p * ATTN.m_d1) ** 4
        m1_new = optimal_attention(ATTN.m_d1, ATTN.xi_c, hh)
        d1 = firm_price_low_dmf1(ATTN.m_df1, sol.mf1, attn_shock.p, bt,
                                 low.mc, 0.0, low.pi, 0.0)
        mf1_new = optimal_attention(ATTN.m_df1, ATTN.xi_f, d1 * d1)
        assert max(abs(m1_new - sol.m1), abs(mf1_new - sol.mf1)) < 1e-9

    def test_monotone_attention_in_shock_size(self, attn_params):
        # deeper recessions command weakly more attention
        m1s = []
        for e1 in np.linspace(-0.001, -0.011, 11):
            shock = MarkovShock(eps1=float(e1), eps2=0.0, p=0.9, q=1.0)
            sol = solve_endogenous_bre(Regime.PP, attn_params, shock, ATTN)
            m1s.append(sol.m1)
        assert all(b >= a - 1e-9 for a, b in zip(m1s, m1s[1:]))

    def test_existence_boundary_single_flip(self, attn_params):
        # scanning the shock grid: solutions exist near zero and die deeper in
        from zlbkit.attention import attention_exists
        flips = []
        prev = None
        for e1 in np.arange(-0.02, 0.0005, 5e-4):
            shock = MarkovShock(eps1=float(e1), eps2=0.0, p=0.9, q=1.0)
            ex = attention_exists([Regime.ZP, Regime.PP], attn_params, shock, ATTN)
            cur = ex[Regime.ZP] or ex[Regime.PP]
            if prev is not None and cur != prev:
                flips.append(e1)
            prev = cur
        assert len(flips) == 1
        assert -0.016 <= flips[0] <= -0.008

    @pytest.mark.xfail(reason="floor-in-high-state attention candidates never "
                              "satisfy their regime inequalities at the reported "
                              "calibration, so no finite existence boundary "
                              "emerges for PZ/ZZ in the scanned range",
                       strict=True)
    def test_pz_zz_boundary_near_reported_value(self, attn_params):
        from zlbkit.attention import attention_exists
        prev = None
        flips = []
        for e1 in np.arange(-0.3, 0.001, 5e-3):
            shock = MarkovShock(eps1=float(e1), eps2=0.0, p=0.9, q=1.0)
            ex = attention_exists([Regime.PZ, Regime.ZZ], attn_params, shock, ATTN)
            cur = ex[Regime.PZ] or ex[Regime.ZZ]
            if prev is not None and cur != prev:
                flips.append(e1)
            prev = cur
        assert len(flips) == 1 and -0.16 <= flips[0] <= -0.12
