import math

import numpy as np
import pytest

from conftest import draw_params_shock, rng_for
from oracles import bisect_existence_boundary, brute_force_set, lee_scalar_iteration
from zlbkit.core import InvalidParameterError, MarkovShock, ModelParams, delta, ergodic_weight
from zlbkit.equilibrium import (
    CandidateSolution,
    Concept,
    CutoffBranch,
    Degeneracy,
    Regime,
    cutoff_components,
    cutoff_ordering_check,
    effective_transition,
    enumerate_equilibria,
    lee_solution,
    solve_candidate,
    verify_ih_rpe_equivalence,
)

FINITE_CONCEPTS = [Concept.REE, Concept.RPE, Concept.BRE, Concept.BRRPE]


def residuals(cand: CandidateSolution, params: ModelParams, shock: MarkovShock):
    """IS and Phillips residuals under the candidate's own regime rates."""
    prm = params.with_unit_discounts() if cand.concept in (Concept.REE, Concept.RPE) \
        else params
    p_eff, q_eff = effective_transition(cand.concept, shock)
    K = np.array([[p_eff, 1 - p_eff], [1 - q_eff, q_eff]])
    x, pi = cand.x, cand.pi
    i = np.array([-prm.mu if b else prm.psi * pi[j]
                  for j, b in enumerate(cand.regime.binding)])
    eps = np.array([shock.eps1, shock.eps2])
    is_res = x - prm.M * (K @ x) + prm.sigma * (i - prm.N * (K @ pi)) - eps
    pc_res = pi - prm.lam * x - prm.Mf * prm.beta * (K @ pi)
    return is_res, pc_res


class TestSolveCandidate:
    def test_zero_shock_gives_zero_steady_state(self, baseline_params):
        shock = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        cand = solve_candidate(Concept.REE, Regime.PP, baseline_params, shock)
        assert cand.consistent
        assert cand.Y1.as_tuple() == pytest.approx((0.0, 0.0, 0.0), abs=1e-14)
        assert cand.Y2.as_tuple() == pytest.approx((0.0, 0.0, 0.0), abs=1e-14)
        listed = enumerate_equilibria(Concept.REE, baseline_params, shock)
        assert any(c.regime is Regime.PP and abs(c.Y1.x) < 1e-14 for c in listed)

    def test_mean_forecast_absorbing_floor_output(self, baseline_params):
        # zero-reversion beliefs with q = 1: floor output is sigma*mu + eps1
        # (the shock must be deep enough that the floor actually binds)
        shock = MarkovShock(eps1=-0.5, eps2=0.0, p=0.85, q=1.0)
        cand = solve_candidate(Concept.RPE, Regime.ZP, baseline_params, shock)
        assert cand.consistent
        expected = baseline_params.sigma * baseline_params.mu + shock.eps1
        assert cand.Y1.x == pytest.approx(expected, rel=1e-12)

    def test_matches_brute_force_at_trap_calibration(self, baseline_params):
        shock = MarkovShock(eps1=-0.04, eps2=0.0, p=0.85, q=0.98)
        oracle = brute_force_set(Concept.REE, baseline_params, shock)
        mine = {c.regime: c for c in enumerate_equilibria(Concept.REE, baseline_params, shock)}
        assert set(mine) == set(oracle)
        for regime, (x, pi) in oracle.items():
            assert mine[regime].x == pytest.approx(list(x), rel=1e-10)
            assert mine[regime].pi == pytest.approx(list(pi), rel=1e-10)

    def test_phillips_residual_small(self, baseline_params):
        rng = rng_for(21)
        for _ in range(50):
            prm, shk = draw_params_shock(rng)
            for concept in (Concept.REE, Concept.RPE):
                for cand in enumerate_equilibria(concept, prm, shk):
                    is_res, pc_res = residuals(cand, prm, shk)
                    assert np.max(np.abs(pc_res)) < 1e-10
                    assert np.max(np.abs(is_res)) < 1e-10

    def test_discounts_forced_for_rational_concepts(self, gabaix_params):
        shock = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        ree = solve_candidate(Concept.REE, Regime.PP, gabaix_params, shock)
        unit = solve_candidate(Concept.REE, Regime.PP,
                               gabaix_params.with_unit_discounts(), shock)
        assert ree.Y1 == unit.Y1 and ree.Y2 == unit.Y2

    def test_passive_taylor_rejected(self):
        prm = ModelParams(beta=0.99, sigma=1.0, lam=0.02, psi=0.9)
        shock = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        with pytest.raises(InvalidParameterError):
            solve_candidate(Concept.REE, Regime.PP, prm, shock)

    def test_pz_zero_responsiveness_flagged_nonexistent(self):
        # pick lam*sigma so that num1 = 1 - (a+1)q + beta*(q-1)*rho is exactly 0
        beta, p, q = 0.99, 0.85, 0.9
        rho = p + q - 1.0
        a = (1.0 - q + beta * (q - 1.0) * rho) / q
        prm = ModelParams(beta=beta, sigma=1.0, lam=a, psi=2.0)
        shock = MarkovShock(eps1=-0.01, eps2=0.0, p=p, q=q)
        cand = solve_candidate(Concept.REE, Regime.PZ, prm, shock)
        assert cand.degenerate is Degeneracy.NONEXISTENT_SINGULAR
        assert not cand.consistent


class TestEnumerate:
    def test_regime_set_matches_brute_force(self):
        rng = rng_for(22)
        checked = 0
        for _ in range(120):
            prm, shk = draw_params_shock(rng)
            for concept in (Concept.REE, Concept.RPE):
                oracle = brute_force_set(concept, prm, shk)
                mine = {c.regime for c in enumerate_equilibria(concept, prm, shk)}
                assert mine == set(oracle)
                checked += 1
        assert checked == 240

    def test_brute_force_discounted(self):
        rng = rng_for(23)
        for _ in range(80):
            prm, shk = draw_params_shock(rng, discounted=True)
            for concept in (Concept.BRE, Concept.BRRPE):
                oracle = brute_force_set(concept, prm, shk)
                mine = {c.regime for c in enumerate_equilibria(concept, prm, shk)}
                assert mine == set(oracle)

    def test_pp_exists_above_threshold(self, baseline_params, region_shock):
        rep = cutoff_components(Concept.REE, baseline_params, region_shock)
        shk = MarkovShock(eps1=rep.eps_pp + 1e-4, eps2=region_shock.eps2,
                          p=region_shock.p, q=region_shock.q)
        regimes = {c.regime for c in enumerate_equilibria(Concept.REE, baseline_params, shk)}
        assert Regime.PP in regimes
        shk = MarkovShock(eps1=rep.eps_pp - 1e-4, eps2=region_shock.eps2,
                          p=region_shock.p, q=region_shock.q)
        regimes = {c.regime for c in enumerate_equilibria(Concept.REE, baseline_params, shk)}
        assert Regime.PP not in regimes

    def test_unique_bre_under_negative_delta(self, gabaix_params):
        assert delta(gabaix_params) < 0.0
        for e1 in (-1e6, -10.0, -0.1, 0.0, 0.1):
            shock = MarkovShock(eps1=e1, eps2=0.01, p=0.85, q=0.98)
            sols = enumerate_equilibria(Concept.BRE, gabaix_params, shock)
            assert len(sols) == 1

    def test_pz_never_alone(self):
        rng = rng_for(24)
        seen_pz = 0
        for _ in range(400):
            prm, shk = draw_params_shock(rng)
            regimes = {c.regime for c in enumerate_equilibria(Concept.REE, prm, shk)}
            if Regime.PZ in regimes:
                seen_pz += 1
                assert Regime.PP in regimes or Regime.ZP in regimes
        assert seen_pz > 0, "sample never produced a PZ candidate"


class TestCutoffs:
    def test_rpe_minus_infinity_at_absorbing_high_state(self, baseline_params):
        shock = MarkovShock(eps1=-0.04, eps2=0.0, p=0.85, q=1.0)
        rep = cutoff_components(Concept.RPE, baseline_params, shock)
        assert rep.eps_bar == -math.inf
        assert rep.branch is CutoffBranch.MINUS_INFINITY_Q1

    def test_mean_forecast_q1_pp_threshold_mechanical(self, baseline_params):
        # the Taylor-branch solution flips exactly at the reported threshold,
        # and the floor branch takes over below it
        shock = MarkovShock(eps1=-0.04, eps2=0.005, p=0.85, q=1.0)
        rep = cutoff_components(Concept.RPE, baseline_params, shock)
        for off, want_pp in ((1e-6, True), (-1e-6, False)):
            shk = MarkovShock(eps1=rep.eps_pp + off, eps2=0.005, p=0.85, q=1.0)
            regimes = {c.regime for c in
                       enumerate_equilibria(Concept.RPE, baseline_params, shk)}
            assert (Regime.PP in regimes) is want_pp
            assert (Regime.ZP in regimes) is (not want_pp)

    def test_bre_minus_infinity_under_negative_delta(self, gabaix_params):
        shock = MarkovShock(eps1=-0.04, eps2=0.01, p=0.85, q=0.98)
        rep = cutoff_components(Concept.BRE, gabaix_params, shock)
        assert rep.eps_bar == -math.inf
        assert rep.branch is CutoffBranch.MINUS_INFINITY_DELTA
        assert rep.delta == pytest.approx(-0.0092, abs=1e-12)

    def test_matches_bisection_at_baseline(self, baseline_params):
        shock = MarkovShock(eps1=0.0, eps2=0.01, p=0.85, q=0.98)
        rep = cutoff_components(Concept.REE, baseline_params, shock)
        b = bisect_existence_boundary(Concept.REE, baseline_params, shock,
                                      rep.eps_bar - 1.0, rep.eps_bar + 1.0)
        assert b == pytest.approx(rep.eps_bar, abs=1e-8)

    @pytest.mark.parametrize("concept", FINITE_CONCEPTS)
    def test_matches_bisection_random(self, concept):
        rng = rng_for(25 + hash(concept.value) % 97)
        done = 0
        while done < 25:
            discounted = concept in (Concept.BRE, Concept.BRRPE)
            prm, shk = draw_params_shock(rng, discounted=discounted)
            rep = cutoff_components(concept, prm, shk)
            if not math.isfinite(rep.eps_bar):
                continue
            pad = max(1.0, 0.5 * abs(rep.eps_bar))
            b = bisect_existence_boundary(concept, prm, shk,
                                          rep.eps_bar - pad, rep.eps_bar + pad)
            assert b == pytest.approx(rep.eps_bar, abs=1e-6 * (1 + abs(rep.eps_bar)))
            done += 1

    def test_discriminant_knife_edge_uses_finite_branch(self):
        # (M-1)(1-Mf*beta) cancels lam*sigma*N exactly here; machine noise must
        # not select the always-exists branch while the floor-floor system is
        # numerically singular
        prm = ModelParams(beta=0.99, sigma=0.1, lam=1e-4, psi=2.0,
                          M=0.999, Mf=1.0, N=1.0)
        shock = MarkovShock(eps1=-100.0, eps2=0.0, p=0.5, q=0.99)
        for concept in (Concept.BRE, Concept.BRRPE):
            rep = cutoff_components(concept, prm, shock)
            assert rep.branch is CutoffBranch.FINITE
            sols = enumerate_equilibria(concept, prm, shock)
            assert (shock.eps1 >= rep.eps_bar) == bool(sols)

    def test_existence_at_minus_1e6(self, baseline_params, gabaix_params):
        # mean-forecast with absorbing high state
        shock = MarkovShock(eps1=-1e6, eps2=0.0, p=0.85, q=1.0)
        assert enumerate_equilibria(Concept.RPE, baseline_params, shock)
        # discounted with negative discriminant
        shock = MarkovShock(eps1=-1e6, eps2=0.01, p=0.85, q=0.98)
        assert len(enumerate_equilibria(Concept.BRE, gabaix_params, shock)) == 1

    def test_pp_threshold_at_absorbing_state_matches_explicit_form(self):
        # the two-state formula evaluated at q=1 equals the absorbing-state
        # expression mu*(a(p-psi) - p*a*theta)/(lam*psi) + spillover term
        from zlbkit.equilibrium import _eps_pp
        rng = rng_for(28)
        for _ in range(100):
            prm, _ = draw_params_shock(rng)
            p = float(rng.uniform(0.05, 0.999))
            e2 = float(rng.uniform(0.0, 0.05))
            a = prm.a
            theta = (1 - p) * (1 - p * prm.beta) / (a * p)
            explicit = (prm.mu * (a * (p - prm.psi) / (prm.lam * prm.psi)
                                  - p * a * theta / (prm.lam * prm.psi))
                        + prm.lam * e2 * (p - 1) * (a - prm.beta * p + 1)
                        / (a * prm.lam * (prm.psi - 1)))
            general = _eps_pp(prm, e2, p, 1.0)
            assert general == pytest.approx(explicit, rel=1e-10, abs=1e-12)

    def test_ree_q1_limit_branches(self, baseline_params):
        # substitution dominance (1-p)(1-beta*p)/(lam*sigma*p) > 1 keeps
        # existence unrestricted; persistent shocks cap it at eps_pp
        for p, expect_inf in ((0.2, True), (0.95, False)):
            shock = MarkovShock(eps1=-0.04, eps2=0.0, p=p, q=1.0)
            theta = (1 - p) * (1 - 0.99 * p) / (0.02 * p)
            rep = cutoff_components(Concept.REE, baseline_params, shock)
            assert (theta > 1.0) == expect_inf
            if expect_inf:
                assert rep.eps_bar == -math.inf
            else:
                assert math.isfinite(rep.eps_bar)
                # oracle: equilibria exist just above, none just below
                for off, want in ((1e-6, True), (-1e-6, False)):
                    shk = MarkovShock(eps1=rep.eps_bar + off, eps2=0.0, p=p, q=1.0)
                    assert bool(enumerate_equilibria(Concept.REE, baseline_params, shk)) is want


class TestThresholdShape:
    def test_persistence_knee_near_087(self, baseline_params):
        # with q=0.98, eps2=0 the admissible-shock region collapses to very
        # small magnitudes once persistence passes ~0.87, where the binding
        # component of the threshold takes over from the floor-exit component
        def ebar(p):
            shk = MarkovShock(eps1=-0.01, eps2=0.0, p=p, q=0.98)
            return cutoff_components(Concept.REE, baseline_params, shk)

        assert ebar(0.5).eps_bar < -0.1
        assert ebar(0.86).eps_bar < -0.012
        assert -0.012 < ebar(0.88).eps_bar < -0.005
        lo, hi = ebar(0.80), ebar(0.95)
        assert lo.eps_bar == pytest.approx(lo.eps_zp2)
        assert hi.eps_bar == pytest.approx(hi.eps_pp)

    def test_discounted_threshold_dominates_hybrid_when_persistent(self):
        # with a nonnegative discriminant and positively autocorrelated shocks
        # the mean-forecast variant of the discounted concept is easier to
        # support: eps_bar_BRE >= eps_bar_BRRPE
        rng = rng_for(29)
        n = 0
        while n < 100:
            prm, shk = draw_params_shock(rng, discounted=True)
            if delta(prm) < 0.0 or shk.rho < 0.0:
                continue
            bre = cutoff_components(Concept.BRE, prm, shk).eps_bar
            brrpe = cutoff_components(Concept.BRRPE, prm, shk).eps_bar
            assert bre >= brrpe - 1e-10 * (1 + abs(bre))
            n += 1


class TestOrdering:
    def test_positive_autocorrelation(self, baseline_params):
        shock = MarkovShock(eps1=0.0, eps2=0.01, p=0.85, q=0.98)
        ree = cutoff_components(Concept.REE, baseline_params, shock).eps_bar
        rpe = cutoff_components(Concept.RPE, baseline_params, shock).eps_bar
        assert ree >= rpe
        assert cutoff_ordering_check(baseline_params, shock)

    def test_iid_chain_equates_concepts(self, baseline_params):
        shock = MarkovShock(eps1=0.0, eps2=0.01, p=0.4, q=0.6)
        ree = cutoff_components(Concept.REE, baseline_params, shock).eps_bar
        rpe = cutoff_components(Concept.RPE, baseline_params, shock).eps_bar
        assert ree == pytest.approx(rpe, abs=1e-12)
        assert cutoff_ordering_check(baseline_params, shock)

    def test_random_draws(self):
        rng = rng_for(26)
        neg = 0
        for _ in range(300):
            prm, shk = draw_params_shock(rng)
            assert cutoff_ordering_check(prm, shk)
            if shk.rho < 0:
                neg += 1
        assert neg > 50


class TestLee:
    def test_zero_persistence_matches_mean_forecast_value(self, baseline_params):
        # deep shock so that the floor binds; p ~ 0 kills the forward term
        shock = MarkovShock(eps1=-0.5, eps2=0.0, p=1e-12, q=1.0)
        cand = lee_solution(baseline_params, shock)
        assert cand.consistent
        expected = baseline_params.sigma * baseline_params.mu + shock.eps1
        assert cand.Y1.x == pytest.approx(expected, rel=1e-9)

    def test_exists_where_rational_does_not(self, baseline_params):
        from zlbkit.core import nu
        p = 0.9
        assert p * p * nu(baseline_params, p * p) < 1.0 < p * nu(baseline_params, p)
        shock = MarkovShock(eps1=-0.5, eps2=0.0, p=p, q=1.0)
        cand = lee_solution(baseline_params, shock)
        assert cand.consistent and cand.regime is Regime.ZP
        assert not enumerate_equilibria(Concept.REE, baseline_params, shock)

    def test_matches_scalar_iteration(self, baseline_params):
        shock = MarkovShock(eps1=-0.05, eps2=0.0, p=0.9, q=1.0)
        cand = lee_solution(baseline_params, shock)
        oracle = lee_scalar_iteration(baseline_params, 0.9, -0.05)
        assert cand.Y1.x == pytest.approx(oracle, abs=1e-10)

    def test_domain_checks(self, baseline_params, gabaix_params):
        with pytest.raises(InvalidParameterError):
            lee_solution(baseline_params, MarkovShock(eps1=-0.05, eps2=0.0, p=0.9, q=0.98))
        with pytest.raises(InvalidParameterError):
            lee_solution(gabaix_params, MarkovShock(eps1=-0.05, eps2=0.0, p=0.9, q=1.0))


class TestIhEquivalence:
    def test_zero_shock(self, baseline_params):
        shock = MarkovShock(eps1=0.0, eps2=0.0, p=0.85, q=0.98)
        assert verify_ih_rpe_equivalence(baseline_params, shock)

    def test_absorbing_floor_case(self, baseline_params):
        shock = MarkovShock(eps1=-0.05, eps2=0.0, p=0.85, q=1.0)
        assert verify_ih_rpe_equivalence(baseline_params, shock)

    def test_trap_calibration_point(self, baseline_params, trap_shock):
        assert verify_ih_rpe_equivalence(baseline_params, trap_shock)

    def test_random_draws(self):
        rng = rng_for(27)
        for _ in range(50):
            prm, shk = draw_params_shock(rng)
            assert verify_ih_rpe_equivalence(prm, shk)
