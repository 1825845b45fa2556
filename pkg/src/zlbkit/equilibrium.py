"""Candidate regime solutions, existence cutoffs and equilibrium enumeration.

A candidate solution fixes, for each shock state, whether the policy rate is
on the Taylor rule (P) or at the floor (Z), solves the implied 2x2 linear
fixed point for state-contingent inflation, and then checks whether the rate
regime it assumed is the one the policy rule actually delivers.  The four
regimes are PP, ZP, PZ, ZZ (first letter = low state, second = high state).

Expectation concepts differ only in the effective transition matrix fed into
the fixed point and in whether cognitive discounts are active:

* REE / BRE   use the true transition rows (p, 1-p) and (1-q, q);
* RPE / BRRPE use the ergodic row (1-qbar, qbar) in both states, because
  agents forecast with the unconditional mean;
* REE / RPE   force unit cognitive discounts.

All existence thresholds are expressed as lower bounds on the low-state shock
``eps1``: a concept admits some equilibrium iff ``eps1 >= eps_bar``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DegenerateChainError,
    InvalidParameterError,
    MarkovShock,
    ModelParams,
    SingularSystemError,
    StateOutcome,
    delta,
    det_is_zero,
    ergodic_weight,
    nu,
)


class Regime(enum.Enum):
    PP = "PP"
    ZP = "ZP"
    PZ = "PZ"
    ZZ = "ZZ"

    @property
    def binding(self) -> tuple[bool, bool]:
        """(low state at floor?, high state at floor?)"""
        return (self.value[0] == "Z", self.value[1] == "Z")


class Concept(enum.Enum):
    REE = "REE"
    RPE = "RPE"
    BRE = "BRE"
    BRRPE = "BRRPE"
    LEE = "LEE"


class Degeneracy(enum.Enum):
    NONE = "none"
    CONTINUUM = "continuum"
    NONEXISTENT_SINGULAR = "nonexistent-singular"


class CutoffBranch(enum.Enum):
    FINITE = "finite"
    MINUS_INFINITY_Q1 = "minus-infinity-q1"
    MINUS_INFINITY_DELTA = "minus-infinity-delta"


@dataclass(frozen=True)
class CandidateSolution:
    regime: Regime
    concept: Concept
    Y1: StateOutcome
    Y2: StateOutcome
    consistent: bool
    degenerate: Degeneracy = Degeneracy.NONE

    @property
    def pi(self) -> np.ndarray:
        return np.array([self.Y1.pi, self.Y2.pi])

    @property
    def x(self) -> np.ndarray:
        return np.array([self.Y1.x, self.Y2.x])

    @property
    def i(self) -> np.ndarray:
        return np.array([self.Y1.i, self.Y2.i])


@dataclass(frozen=True)
class CutoffReport:
    concept: Concept
    eps_bar: float
    eps_pp: float
    eps_zp2: float
    delta: float
    branch: CutoffBranch


def effective_transition(concept: Concept, shock: MarkovShock) -> tuple[float, float]:
    """Map (p, q) to the transition actually used by a concept's fixed point."""
    if concept in (Concept.REE, Concept.BRE):
        return shock.p, shock.q
    if concept in (Concept.RPE, Concept.BRRPE):
        qbar = ergodic_weight(shock)
        return 1.0 - qbar, qbar
    raise InvalidParameterError(f"no transition mapping for concept {concept}")


def effective_params(concept: Concept, params: ModelParams) -> ModelParams:
    if concept in (Concept.REE, Concept.RPE):
        return params.with_unit_discounts()
    if concept in (Concept.BRE, Concept.BRRPE):
        return params
    raise InvalidParameterError(f"concept {concept} has no single-regime solver; "
                                "use lee_solution for LEE")


def _regime_system(regime: Regime, params: ModelParams, p_eff: float, q_eff: float,
                   eps1: float, eps2: float):
    """Left matrix and right side of the 2x2 inflation fixed point for a regime."""
    K = np.array([[p_eff, 1.0 - p_eff], [1.0 - q_eff, q_eff]])
    Q = (np.eye(2)
         - (params.M + params.Mf * params.beta + params.a * params.N) * K
         + params.beta * params.M * params.Mf * (K @ K))
    lhs = Q.copy()
    rhs = np.array([params.lam * eps1, params.lam * eps2])
    for j, is_binding in enumerate(regime.binding):
        if is_binding:
            rhs[j] += params.lam * params.sigma * params.mu
        else:
            lhs[j, j] += params.a * params.psi
    return lhs, rhs, K


def _pz_num1(params: ModelParams, p_eff: float, q_eff: float) -> float:
    """Responsiveness of low-state inflation to eps1 in the PZ fixed point.

    When it vanishes the PZ candidate cannot satisfy its regime inequalities
    for any eps1.
    """
    M, Mf, N, a, beta = params.M, params.Mf, params.N, params.a, params.beta
    p, q = p_eff, q_eff
    return params.lam * (1.0 - (M + a * N) * q
                         + Mf * beta * (M + M * p * (q - 1.0) - q + M * (q - 1.0) * q))


def solve_candidate(concept: Concept, regime: Regime, params: ModelParams,
                    shock: MarkovShock) -> CandidateSolution:
    """Solve one regime's fixed point under one concept and flag consistency.

    Consistency uses the convention that the slack regime requires strictly
    positive headroom (psi*pi > -mu) while the floor regime holds weakly
    (psi*pi <= -mu), so boundary points belong to the floor regime.  Singular
    systems are flagged ``continuum`` when the knife-edge threshold equality
    holds and ``nonexistent-singular`` otherwise; their outcomes are NaN.
    """
    prm = effective_params(concept, params)
    prm.require_taylor()
    p_eff, q_eff = effective_transition(concept, shock)
    lhs, rhs, K = _regime_system(regime, prm, p_eff, q_eff, shock.eps1, shock.eps2)

    det = lhs[0, 0] * lhs[1, 1] - lhs[0, 1] * lhs[1, 0]
    scale = float(np.linalg.norm(lhs)) ** 2
    if det_is_zero(det, scale):
        degen = _classify_singular(concept, regime, prm, shock, p_eff, q_eff)
        nan = StateOutcome(math.nan, math.nan, math.nan)
        return CandidateSolution(regime=regime, concept=concept, Y1=nan, Y2=nan,
                                 consistent=False, degenerate=degen)

    if regime is Regime.PZ and abs(_pz_num1(prm, p_eff, q_eff)) <= 1e-12 * prm.lam:
        nan = StateOutcome(math.nan, math.nan, math.nan)
        return CandidateSolution(regime=regime, concept=concept, Y1=nan, Y2=nan,
                                 consistent=False,
                                 degenerate=Degeneracy.NONEXISTENT_SINGULAR)

    pi = np.linalg.solve(lhs, rhs)
    x = (pi - prm.Mf * prm.beta * (K @ pi)) / prm.lam
    consistent = True
    for j, is_binding in enumerate(regime.binding):
        gap = prm.psi * pi[j] + prm.mu
        consistent &= (gap <= 0.0) if is_binding else (gap > 0.0)
    Y1 = StateOutcome.from_pi(x[0], pi[0], prm)
    Y2 = StateOutcome.from_pi(x[1], pi[1], prm)
    return CandidateSolution(regime=regime, concept=concept, Y1=Y1, Y2=Y2,
                             consistent=bool(consistent))


def _classify_singular(concept, regime, prm, shock, p_eff, q_eff) -> Degeneracy:
    """A singular regime system supports a continuum exactly at the knife edge."""
    try:
        rep = cutoff_components(concept, prm, shock)
    except (InvalidParameterError, DegenerateChainError):
        return Degeneracy.NONEXISTENT_SINGULAR
    knife = {Regime.ZP: rep.eps_pp, Regime.ZZ: rep.eps_zp2}.get(regime)
    if knife is not None and math.isfinite(knife):
        tol = 1e-9 * (1.0 + abs(knife))
        if abs(shock.eps1 - knife) <= tol:
            return Degeneracy.CONTINUUM
    return Degeneracy.NONEXISTENT_SINGULAR


def enumerate_equilibria(concept: Concept, params: ModelParams,
                         shock: MarkovShock) -> list[CandidateSolution]:
    """All regime candidates whose assumed rate regime is self-consistent.

    The list is empty when the model is incoherent at these parameters and has
    several entries when it is incomplete.
    """
    out = []
    for regime in Regime:
        cand = solve_candidate(concept, regime, params, shock)
        if cand.consistent and cand.degenerate is Degeneracy.NONE:
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# analytic existence cutoffs
# ---------------------------------------------------------------------------

def _eps_pp(params: ModelParams, eps2: float, p: float, q: float) -> float:
    """Threshold above which the PP candidate satisfies psi*pi_1 > -mu."""
    M, Mf, N = params.M, params.Mf, params.N
    a, beta, psi, mu, lam = params.a, params.beta, params.psi, params.mu, params.lam
    rho = p + q - 1.0
    num1 = lam * (a * psi + beta * M * Mf * (q * (p + q) - rho)
                  - M * q - q * (beta * Mf + a * N) + 1.0)
    den_pp = (((1.0 - M * rho) * (1.0 - Mf * beta * rho) + a * (psi - N * rho))
              * ((1.0 - M) * (1.0 - Mf * beta) + a * (psi - N)))
    eta1 = a * (psi - N) + (1.0 - M) * (1.0 - Mf * beta)
    eta2 = (a * (N + psi) - (p + q) * (a * N + beta * Mf)
            + M * rho * (beta * Mf * rho - 1.0) + beta * Mf + 1.0)
    eta3 = (lam * eps2 * (1.0 - p) * psi
            * (beta * Mf * (M * (p + q) - 1.0) - a * N - M) / den_pp) - mu
    return eta1 * eta2 * eta3 / (psi * num1)


def _eps_zp2(params: ModelParams, eps2: float, p: float, q: float) -> float:
    """Threshold below which the ZP candidate loses psi*pi_2 > -mu (q < 1 only)."""
    M, Mf, N = params.M, params.Mf, params.N
    a, beta, psi, mu, lam = params.a, params.beta, params.psi, params.mu, params.lam
    rho = p + q - 1.0
    eta1 = a * (psi - N) + (1.0 - M) * (1.0 - Mf * beta)
    common = a * N - beta * M * Mf * (p + q) + M + beta * Mf
    t1 = (mu * eta1 * (a * N - (p + q) * (a * N + beta * Mf)
                       + M * rho * (beta * Mf * rho - 1.0) + beta * Mf + 1.0)
          / (lam * (q - 1.0) * psi * common))
    t2 = (eps2 * lam * (a * N * p + beta * Mf * (M * (q - p * rho - 1.0) + p)
                        + M * p - 1.0)
          / (lam * (q - 1.0) * common))
    return t1 - t2


def _chi1(params: ModelParams, p: float) -> float:
    """Sign of the q = 1 limit of the ZP responsiveness under discounting."""
    M, Mf, N, a, beta = params.M, params.Mf, params.N, params.a, params.beta
    return (-delta(params)
            + (1.0 - p) * (a * N + M * (1.0 - Mf * beta * p) + Mf * beta * (1.0 - M)))


def cutoff_components(concept: Concept, params: ModelParams,
                      shock: MarkovShock) -> CutoffReport:
    """Analytic existence threshold eps_bar for a concept; eps1 is ignored.

    Finite branch: eps_bar = min(eps_pp, eps_zp2).  The threshold is -inf for
    the mean-forecast concepts when the high state is absorbing (q = 1), and
    for the discounted concepts when the discriminant ``delta`` is negative.
    """
    prm = effective_params(concept, params)
    prm.require_taylor()
    shock.require_nonnegative_high_state()
    d = delta(prm)
    # a discriminant that only cancels to zero at machine noise belongs to the
    # finite branch: the always-exists region rests on a ZZ system whose
    # determinant is proportional to the discriminant itself
    d_scale = abs((prm.M - 1.0) * (1.0 - prm.Mf * prm.beta)) + prm.a * prm.N

    if concept in (Concept.RPE, Concept.BRRPE) and shock.q == 1.0:
        return CutoffReport(concept=concept, eps_bar=-math.inf,
                            eps_pp=_eps_pp_q1_mean(prm, shock.eps2),
                            eps_zp2=-math.inf, delta=d,
                            branch=CutoffBranch.MINUS_INFINITY_Q1)

    if concept in (Concept.BRE, Concept.BRRPE) and d < -1e-12 * d_scale:
        p_eff, q_eff = effective_transition(concept, shock)
        eps_pp = _eps_pp(prm, shock.eps2, p_eff, q_eff)
        eps_zp2 = _eps_zp2(prm, shock.eps2, p_eff, q_eff) if q_eff < 1.0 else -math.inf
        return CutoffReport(concept=concept, eps_bar=-math.inf, eps_pp=eps_pp,
                            eps_zp2=eps_zp2, delta=d,
                            branch=CutoffBranch.MINUS_INFINITY_DELTA)

    p_eff, q_eff = effective_transition(concept, shock)
    if q_eff == 1.0:
        return _cutoff_q1(concept, prm, shock, p_eff, d)

    eps_pp = _eps_pp(prm, shock.eps2, p_eff, q_eff)
    eps_zp2 = _eps_zp2(prm, shock.eps2, p_eff, q_eff)
    return CutoffReport(concept=concept, eps_bar=min(eps_pp, eps_zp2),
                        eps_pp=eps_pp, eps_zp2=eps_zp2, delta=d,
                        branch=CutoffBranch.FINITE)


def _eps_pp_q1_mean(params: ModelParams, eps2: float) -> float:
    """PP threshold of the mean-forecast concepts at qbar = 1."""
    a, lam, psi, mu = params.a, params.lam, params.psi, params.mu
    M, Mf, N, beta = params.M, params.Mf, params.N, params.beta
    slope = ((M * (1.0 - Mf * beta) + Mf * beta + a * N)
             / ((M - 1.0) * (1.0 - Mf * beta) + a * (N - psi)))
    return -mu * (1.0 + a * psi) / (lam * psi) + slope * eps2


def _cutoff_q1(concept: Concept, prm: ModelParams, shock: MarkovShock,
               p_eff: float, d: float) -> CutoffReport:
    """Absorbing-high-state limits of the two-state thresholds (REE / BRE)."""
    eps_pp = _eps_pp(prm, shock.eps2, p_eff, 1.0)
    chi1 = _chi1(prm, p_eff)
    if chi1 > 0.0:
        eps_zp2 = -math.inf
        branch = CutoffBranch.MINUS_INFINITY_Q1
        eps_bar = -math.inf
    elif chi1 < 0.0:
        eps_zp2 = math.inf
        branch = CutoffBranch.FINITE
        eps_bar = eps_pp
    else:
        # knife edge chi1 = 0: the threshold stays weakly above eps_pp, so the
        # minimum is eps_pp; report the directional limit numerically
        eps_zp2 = _eps_zp2(prm, shock.eps2, p_eff, 1.0 - 1e-9)
        branch = CutoffBranch.FINITE
        eps_bar = eps_pp
    return CutoffReport(concept=concept, eps_bar=eps_bar, eps_pp=eps_pp,
                        eps_zp2=eps_zp2, delta=d, branch=branch)


def cutoff_ordering_check(params: ModelParams, shock: MarkovShock,
                          rtol: float = 1e-9) -> bool:
    """True iff (eps_bar_REE >= eps_bar_RPE) holds exactly when p + q >= 1."""
    if not params.unit_discounts:
        raise InvalidParameterError("ordering check is defined at unit discounts")
    if shock.q >= 1.0:
        raise InvalidParameterError("ordering check requires q < 1")
    ree = cutoff_components(Concept.REE, params, shock).eps_bar
    rpe = cutoff_components(Concept.RPE, params, shock).eps_bar
    tol = rtol * (1.0 + abs(ree) + abs(rpe))
    if shock.rho >= 0.0:
        return ree >= rpe - tol
    return ree < rpe + tol


# ---------------------------------------------------------------------------
# lagged-information equilibrium (absorbing high state only)
# ---------------------------------------------------------------------------

def lee_solution(params: ModelParams, shock: MarkovShock) -> CandidateSolution:
    """Temporary-state solution when agents see the shock with a one-period lag.

    Requires q = 1, eps2 = 0 and unit discounts.  Lagged information turns the
    perceived persistence into p^2, so the floor-branch output is
    ``(sigma*mu + eps1) / (1 - p^2 * nu(p^2))``; the candidate is labelled ZP
    when the floor branch is the consistent one and PP otherwise.
    """
    if not params.unit_discounts:
        raise InvalidParameterError("lagged-expectations solution assumes unit discounts")
    if shock.q != 1.0 or shock.eps2 != 0.0:
        raise InvalidParameterError("lagged-expectations solution requires q=1, eps2=0")
    params.require_taylor()
    p2 = shock.p ** 2
    nu2 = nu(params, p2)
    den_bind = 1.0 - p2 * nu2
    if abs(den_bind) < 1e-12:
        raise SingularSystemError("p^2 * nu(p^2) = 1: temporary state is singular")
    pc = params.lam / (1.0 - params.beta * p2)          # pi = pc * x in the temp state

    x_bind = (params.sigma * params.mu + shock.eps1) / den_bind
    if params.psi * pc * x_bind + params.mu <= 0.0:
        Y1 = StateOutcome.from_pi(x_bind, pc * x_bind, params)
        regime, consistent = Regime.ZP, True
    else:
        den_slack = den_bind + params.sigma * params.psi * params.lam / (1.0 - params.beta * p2)
        x_slack = shock.eps1 / den_slack
        ok = params.psi * pc * x_slack + params.mu > 0.0
        Y1 = StateOutcome.from_pi(x_slack, pc * x_slack, params)
        regime, consistent = Regime.PP, bool(ok)
    Y2 = StateOutcome(0.0, 0.0, 0.0)
    return CandidateSolution(regime=regime, concept=Concept.LEE, Y1=Y1, Y2=Y2,
                             consistent=consistent)


def verify_ih_rpe_equivalence(params: ModelParams, shock: MarkovShock,
                              tol: float = 1e-8) -> bool:
    """Check every mean-forecast equilibrium against the long-horizon fixed point.

    Planning over the infinite future with mean forecasts collapses to
    ``(I - (1+lam*sigma)*Ktilde) pi = -lam*sigma*i + lam*eps`` where Ktilde has
    the ergodic row in both positions; each enumerated solution must satisfy it
    to within ``tol``.
    """
    if not params.unit_discounts:
        raise InvalidParameterError("equivalence check is defined at unit discounts")
    qbar = ergodic_weight(shock)
    Kt = np.array([[1.0 - qbar, qbar], [1.0 - qbar, qbar]])
    eps = np.array([shock.eps1, shock.eps2])
    for cand in enumerate_equilibria(Concept.RPE, params, shock):
        lhs = (np.eye(2) - (1.0 + params.a) * Kt) @ cand.pi
        rhs = -params.a * cand.i + params.lam * eps
        if float(np.max(np.abs(lhs - rhs))) > tol:
            return False
    return True
