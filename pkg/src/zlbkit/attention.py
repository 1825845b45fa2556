"""Endogenous cognitive discounting: costly attention chosen by agents.

Households and firms pick attention levels ``m`` trading off the cost of
attention against the squared sensitivity of their decision to it, evaluated
at a default attention level:

    m_opt = max(m_default, 1 - cost^2 / E[(d decision / d m)^2])

The chosen ``m`` maps into the structural discounts (directly for households,
through the reset-price recursion for firms), which feed back into the
state-contingent outcomes the sensitivities are computed from.  An endogenous
equilibrium is a fixed point of that loop, restricted here to an absorbing
high state (q = 1, eps2 = 0) and sigma = 1.

The Calvo survival rate ``theta`` is recovered from the Phillips slope via
``lam = (1-theta)(1-beta*theta)/theta * (sigma + phi_labor)``, the slope of
inflation in the output gap when marginal cost is (sigma + phi_labor)*x.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import InvalidParameterError, MarkovShock, ModelParams, ZlbModelError
from .equilibrium import Regime


class AttentionUndefinedError(ZlbModelError):
    """High-state sensitivities vanish (X2 = 0), leaving attention undetermined."""


class NonConvergenceError(ZlbModelError):
    """The attention fixed-point iteration failed to settle."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class AttentionParams:
    xi_c: float = 0.01
    xi_f: float = 0.01
    m_d1: float = 0.7
    m_d2: float = 0.7
    m_df1: float = 0.7
    m_df2: float = 0.7
    phi_labor: float = 1.0
    theta: float | None = None         # derived from lam when omitted

    def __post_init__(self):
        if self.xi_c <= 0.0 or self.xi_f <= 0.0:
            raise InvalidParameterError("attention costs must be positive")
        for name in ("m_d1", "m_d2", "m_df1", "m_df2"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidParameterError(f"{name} must lie in [0,1], got {v}")
        if self.theta is not None and not (0.0 < self.theta < 1.0):
            raise InvalidParameterError(f"theta must lie in (0,1), got {self.theta}")


@dataclass(frozen=True)
class StateBlock:
    """One state's outcomes in the candidate solution."""

    x: float
    pi: float
    i: float
    r: float                           # ex-ante real rate
    mc: float                          # marginal cost (phi_labor + sigma) * x


@dataclass(frozen=True)
class AttentionSolution:
    regime: Regime
    m1: float
    m2: float
    mf1: float
    mf2: float
    M1: float
    M2: float
    Mf1: float
    Mf2: float
    low: StateBlock
    high: StateBlock
    exists: bool
    iterations: int


def calvo_theta(reset_slope: float, beta: float) -> float:
    """Root in (0,1) of (1-theta)(1-beta*theta)/theta = reset_slope."""
    if reset_slope <= 0.0:
        raise InvalidParameterError("reset slope must be positive")
    roots = np.roots([beta, -(1.0 + beta + reset_slope), 1.0])
    for r in roots:
        if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0:
            return float(r.real)
    raise InvalidParameterError(f"no Calvo root in (0,1) for slope {reset_slope}")


def reset_slope(theta: float, beta: float) -> float:
    """Inverse of :func:`calvo_theta`."""
    return (1.0 - theta) * (1.0 - beta * theta) / theta


def resolve_theta(params: ModelParams, attn: AttentionParams) -> float:
    if attn.theta is not None:
        return attn.theta
    return calvo_theta(params.lam / (params.sigma + attn.phi_labor), params.beta)


def firm_discount(mf: float, theta: float, beta: float) -> float:
    """Structural Phillips-curve discount implied by firm attention mf."""
    bt = beta * theta
    return mf * (theta + (1.0 - theta) * (1.0 - bt) / (1.0 - bt * mf))


def _require_domain(params: ModelParams, shock: MarkovShock) -> None:
    if shock.q != 1.0 or shock.eps2 != 0.0:
        raise InvalidParameterError("endogenous attention requires q = 1 and eps2 = 0")
    if shock.p >= 1.0:
        raise InvalidParameterError("endogenous attention requires p < 1")
    if params.sigma != 1.0:
        raise InvalidParameterError("endogenous attention is derived for sigma = 1")
    params.require_taylor()


# ---------------------------------------------------------------------------
# candidate outcomes for state-dependent discounts (absorbing high state)
# ---------------------------------------------------------------------------

def high_state_block(regime: Regime, params: ModelParams, attn: AttentionParams,
                     M2: float, Mf2: float) -> StateBlock:
    s, l, b, mu = params.sigma, params.lam, params.beta, params.mu
    phi = attn.phi_labor
    if regime in (Regime.PP, Regime.ZP):
        return StateBlock(x=0.0, pi=0.0, i=0.0, r=0.0, mc=0.0)
    den = 1.0 - M2 - s * l / (1.0 - b * Mf2)
    if abs(den) < 1e-14:
        raise InvalidParameterError("degenerate high-state system")
    x2 = s * mu / den
    pi2 = l * x2 / (1.0 - b * Mf2)
    return StateBlock(x=x2, pi=pi2, i=-mu, r=-mu - pi2, mc=(phi + s) * x2)


def low_state_block(regime: Regime, params: ModelParams, attn: AttentionParams,
                    M1: float, Mf1: float, high: StateBlock, eps1: float,
                    p: float) -> StateBlock:
    s, l, b, psi, mu = params.sigma, params.lam, params.beta, params.psi, params.mu
    phi = attn.phi_labor
    pbm = 1.0 - p * b * Mf1
    x2, pi2 = high.x, high.pi
    if regime is Regime.PP:
        den = 1.0 - p * M1 + (psi - p) * s * l / pbm
        x1 = eps1 / den
        pi1 = l * x1 / pbm
        return StateBlock(x=x1, pi=pi1, i=psi * pi1, r=(psi - p) * pi1, mc=(phi + s) * x1)
    if regime is Regime.ZP:
        den = 1.0 - p * M1 - p * s * l / pbm
        if abs(den) < 1e-14:
            raise InvalidParameterError("degenerate low-state system")
        x1 = (s * mu + eps1) / den
        pi1 = l * x1 / pbm
        return StateBlock(x=x1, pi=pi1, i=-mu, r=-mu - p * pi1, mc=(phi + s) * x1)
    if regime is Regime.PZ:
        den = 1.0 - p * M1 + (psi - p) * s * l / pbm
        rhs = (1.0 - p) * (M1 * x2 + ((p - psi) * s * Mf1 * b / pbm + s) * pi2) + eps1
        x1 = rhs / den
        pi1 = (l * x1 + Mf1 * b * (1.0 - p) * pi2) / pbm
        return StateBlock(x=x1, pi=pi1, i=psi * pi1,
                          r=psi * pi1 - p * pi1 - (1.0 - p) * pi2, mc=(phi + s) * x1)
    den = 1.0 - p * M1 - p * s * l / pbm
    if abs(den) < 1e-14:
        raise InvalidParameterError("degenerate low-state system")
    rhs = (1.0 - p) * (M1 * x2 + (p * s * Mf1 * b / pbm + s) * pi2) + eps1 + s * mu
    x1 = rhs / den
    pi1 = (l * x1 + Mf1 * b * (1.0 - p) * pi2) / pbm
    return StateBlock(x=x1, pi=pi1, i=-mu,
                      r=-mu - p * pi1 - (1.0 - p) * pi2, mc=(phi + s) * x1)


# ---------------------------------------------------------------------------
# sensitivity quantities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivativeQuantities:
    """Squared decision sensitivities E[(d./dm)^2] for the four attention choices."""

    household_high: float              # d consumption / d m2
    household_low: float               # d consumption / d m1
    firm_high: float                   # d reset price / d mf2
    firm_low: float                    # d reset price / d mf1


def x_composite(block: StateBlock, beta: float, eps: float) -> float:
    """Per-period payoff-relevant flow X = (1-beta)x - beta*(r - eps)."""
    return (1.0 - beta) * block.x - beta * (block.r - eps)


def firm_price_low(mf1: float, mf2: float, p: float, bt: float,
                   mc1: float, mc2: float, pi1: float, pi2: float) -> float:
    """Closed-form low-state reset price as a function of the attention pair."""
    D1 = 1.0 - p * bt * mf1
    D2 = 1.0 - bt * mf2
    one_m_bt = 1.0 - bt
    return (one_m_bt / D1 * mc1
            + one_m_bt * (1.0 - p) * bt * mf2 / (D2 * D1) * mc2
            + (one_m_bt * p * bt * mf1 / D1 ** 2) * (1.0 + (1.0 - p) * bt * mf2 / D2) * pi1
            + one_m_bt * (1.0 - p) * bt * mf2 / (D1 * D2 ** 2) * pi2)


def firm_price_low_dmf1(mf1: float, mf2: float, p: float, bt: float,
                        mc1: float, mc2: float, pi1: float, pi2: float) -> float:
    """Analytic d(reset price)/d mf1 of :func:`firm_price_low`."""
    D1 = 1.0 - p * bt * mf1
    D2 = 1.0 - bt * mf2
    C = 1.0 + (1.0 - p) * bt * mf2 / D2
    return (1.0 - bt) * p * bt * (mc1 / D1 ** 2
                                  + (1.0 - p) * bt * mf2 * mc2 / (D2 * D1 ** 2)
                                  + C * (1.0 + p * bt * mf1) * pi1 / D1 ** 3
                                  + (1.0 - p) * bt * mf2 * pi2 / (D1 ** 2 * D2 ** 2))


def derivative_quantities(regime: Regime, low: StateBlock, high: StateBlock,
                          m2_bar: float, mf2_bar: float,
                          params: ModelParams, shock: MarkovShock,
                          attn: AttentionParams) -> DerivativeQuantities:
    """Squared sensitivities, each evaluated at the default attention level.

    The high-state pair is undefined when the high state sits at the zero
    steady state (X2 = 0 in PP/ZP); callers then apply the convention of
    reusing the low-state choices.
    """
    beta, p = params.beta, shock.p
    bt = params.beta * resolve_theta(params, attn)
    X2 = x_composite(high, beta, 0.0)
    X1 = x_composite(low, beta, shock.eps1)

    if regime in (Regime.PP, Regime.ZP):
        # the high state sits at the zero steady state: decisions there do not
        # respond to attention at all, so the choice is undefined (NaN)
        hh_high = math.nan
        fm_high = math.nan
    else:
        hh_high = (beta * X2) ** 2 / (1.0 - beta * attn.m_d2) ** 4
        d2 = (bt * (1.0 - bt)
              * (high.mc * (1.0 - bt * attn.m_df2) + high.pi * (1.0 + attn.m_df2 * bt))
              / (1.0 - bt * attn.m_df2) ** 3)
        fm_high = d2 * d2

    num = (beta * p) ** 2 * (X1 * (1.0 - m2_bar * beta)
                             + m2_bar * (1.0 - p) * beta * X2) ** 2
    hh_low = num / ((1.0 - beta * p * attn.m_d1) ** 4 * (1.0 - m2_bar * beta) ** 2)

    d1 = firm_price_low_dmf1(attn.m_df1, mf2_bar, p, bt,
                             low.mc, high.mc, low.pi, high.pi)
    fm_low = d1 * d1
    return DerivativeQuantities(household_high=hh_high, household_low=hh_low,
                                firm_high=fm_high, firm_low=fm_low)


def optimal_attention(default: float, cost: float, sensitivity: float) -> float:
    """max(default, 1 - cost^2 / sensitivity).

    A vanishing sensitivity resolves to the default (the limit of the rule),
    while an undefined (NaN) sensitivity raises: attention to a state that
    never matters is indeterminate and must be fixed by convention.
    """
    if math.isnan(sensitivity):
        raise AttentionUndefinedError("attention is undetermined at zero exposure")
    if sensitivity <= 0.0:
        return default
    return max(default, 1.0 - cost * cost / sensitivity)


_optimal = optimal_attention


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

DAMPING = 0.5
MAX_ITER = 20000
FP_TOL = 1e-10


def _iterate(update, start: tuple[float, ...]):
    """Damped fixed-point iteration with a plain-iteration fallback."""
    for damping in (DAMPING, 1.0):
        m = np.array(start)
        trace = []
        for it in range(MAX_ITER):
            new = np.array(update(m))
            step = float(np.max(np.abs(new - m)))
            trace.append(step)
            m = (1.0 - damping) * m + damping * new
            if step < FP_TOL:
                return tuple(m), it + 1
    raise NonConvergenceError("attention fixed point did not converge", trace[-50:])


def solve_state2_attention(params: ModelParams, shock: MarkovShock,
                           attn: AttentionParams) -> tuple[float, float]:
    """High-state attention pair (m2, mf2) for the floor-in-high-state regimes."""
    _require_domain(params, shock)
    theta = resolve_theta(params, attn)
    bt = params.beta * theta

    def update(m):
        m2, mf2 = float(m[0]), float(m[1])
        high = high_state_block(Regime.ZZ, params, attn, m2,
                                firm_discount(mf2, theta, params.beta))
        X2 = x_composite(high, params.beta, 0.0)
        hh = (params.beta * X2) ** 2 / (1.0 - params.beta * attn.m_d2) ** 4
        d2 = (bt * (1.0 - bt)
              * (high.mc * (1.0 - bt * attn.m_df2) + high.pi * (1.0 + attn.m_df2 * bt))
              / (1.0 - bt * attn.m_df2) ** 3)
        return (_optimal(attn.m_d2, attn.xi_c, hh),
                _optimal(attn.m_df2, attn.xi_f, d2 * d2))

    (m2, mf2), _ = _iterate(update, (attn.m_d2, attn.m_df2))
    return m2, mf2


def solve_endogenous_bre(regime: Regime, params: ModelParams, shock: MarkovShock,
                         attn: AttentionParams,
                         init: tuple[float, float] | None = None) -> AttentionSolution:
    """Endogenous-attention candidate for one regime, with existence flag.

    High-state attention is solved first (or tied to the low-state choice in
    PP/ZP, where the high state carries no information).  The low-state pair
    then iterates: outcomes -> sensitivities -> optima.  ``exists`` requires
    convergence and the converged candidate to satisfy its rate-regime
    inequalities.
    """
    _require_domain(params, shock)
    theta = resolve_theta(params, attn)
    beta, p = params.beta, shock.p

    zero_high = regime in (Regime.PP, Regime.ZP)
    if zero_high:
        m2_bar = mf2_bar = math.nan          # tied to low-state choices below
        high = high_state_block(regime, params, attn, 1.0, 1.0)
        X2 = 0.0
    else:
        m2_bar, mf2_bar = solve_state2_attention(params, shock, attn)
        high = high_state_block(regime, params, attn, m2_bar,
                                firm_discount(mf2_bar, theta, beta))
        X2 = x_composite(high, beta, 0.0)
    bt = beta * theta

    def update(m):
        m1, mf1 = float(m[0]), float(m[1])
        Mf1 = firm_discount(mf1, theta, beta)
        low = low_state_block(regime, params, attn, m1, Mf1, high, shock.eps1, p)
        X1 = x_composite(low, beta, shock.eps1)
        if zero_high:
            hh = (beta * p * X1) ** 2 / (1.0 - beta * p * attn.m_d1) ** 4
            d1 = firm_price_low_dmf1(attn.m_df1, mf1, p, bt, low.mc, 0.0, low.pi, 0.0)
        else:
            num = (beta * p) ** 2 * (X1 * (1.0 - m2_bar * beta)
                                     + m2_bar * (1.0 - p) * beta * X2) ** 2
            hh = num / ((1.0 - beta * p * attn.m_d1) ** 4 * (1.0 - m2_bar * beta) ** 2)
            d1 = firm_price_low_dmf1(attn.m_df1, mf2_bar, p, bt,
                                     low.mc, high.mc, low.pi, high.pi)
        return (_optimal(attn.m_d1, attn.xi_c, hh),
                _optimal(attn.m_df1, attn.xi_f, d1 * d1))

    start = init if init is not None else (attn.m_d1, attn.m_df1)
    try:
        (m1, mf1), iters = _iterate(update, start)
        converged = True
    except NonConvergenceError:
        m1, mf1, iters = math.nan, math.nan, MAX_ITER
        converged = False

    if converged:
        Mf1 = firm_discount(mf1, theta, beta)
        low = low_state_block(regime, params, attn, m1, Mf1, high, shock.eps1, p)
        if zero_high:
            m2, mf2 = m1, mf1
        else:
            m2, mf2 = m2_bar, mf2_bar
        Mf2 = firm_discount(mf2, theta, beta)
        bind1, bind2 = regime.binding
        ok1 = (params.psi * low.pi + params.mu <= 0.0) if bind1 \
            else (params.psi * low.pi + params.mu > 0.0)
        ok2 = (params.psi * high.pi + params.mu <= 0.0) if bind2 \
            else (params.psi * high.pi + params.mu > 0.0)
        exists = bool(ok1 and ok2)
    else:
        nanb = StateBlock(*([math.nan] * 5))
        low = nanb
        m2 = mf2 = Mf1 = Mf2 = math.nan
        exists = False

    return AttentionSolution(regime=regime, m1=m1, m2=m2, mf1=mf1, mf2=mf2,
                             M1=m1, M2=m2, Mf1=Mf1, Mf2=Mf2,
                             low=low, high=high, exists=exists, iterations=iters)


def solve_endogenous_bre_multi(regime: Regime, params: ModelParams, shock: MarkovShock,
                               attn: AttentionParams) -> list[AttentionSolution]:
    """Fixed points reached from the default and the full-attention starts.

    Distinct converged points are all returned; no selection among them.
    """
    sols = []
    for init in ((attn.m_d1, attn.m_df1), (1.0, 1.0)):
        sol = solve_endogenous_bre(regime, params, shock, attn, init=init)
        if not any(_same_solution(sol, other) for other in sols):
            sols.append(sol)
    return sols


def _same_solution(a: AttentionSolution, b: AttentionSolution, tol: float = 1e-7) -> bool:
    if math.isnan(a.m1) or math.isnan(b.m1):
        return math.isnan(a.m1) and math.isnan(b.m1)
    return abs(a.m1 - b.m1) < tol and abs(a.mf1 - b.mf1) < tol


def attention_exists(regimes: list[Regime], params: ModelParams, shock: MarkovShock,
                     attn: AttentionParams) -> dict[Regime, bool]:
    """Per-regime existence of an endogenous-attention candidate."""
    out = {}
    for regime in regimes:
        out[regime] = any(s.exists for s in
                          solve_endogenous_bre_multi(regime, params, shock, attn))
    return out


ATTENTION_SCAN_HEADER = ["eps1", "regime", "exists", "m1", "m2", "mf1", "mf2",
                         "M1", "M2", "Mf1", "Mf2", "x1", "pi1"]


def attention_existence_scan(regimes: list[Regime], params: ModelParams,
                             shock: MarkovShock, attn: AttentionParams,
                             eps1_values) -> tuple[list[list], float | None]:
    """Existence and converged attentions per grid point, plus the boundary.

    The boundary is the midpoint of the last sign change of the any-regime
    existence flag along the grid, or None when the flag never flips.
    """
    rows: list[list] = []
    flags: list[tuple[float, bool]] = []
    for v in eps1_values:
        shk = MarkovShock(eps1=float(v), eps2=shock.eps2, p=shock.p, q=shock.q)
        any_exists = False
        for regime in regimes:
            try:
                sols = solve_endogenous_bre_multi(regime, params, shk, attn)
            except AttentionUndefinedError:
                rows.append([float(v), regime.value] + [math.nan] * 11)
                continue
            sol = next((s for s in sols if s.exists), sols[0])
            any_exists |= sol.exists
            rows.append([float(v), regime.value, 1.0 if sol.exists else 0.0,
                         sol.m1, sol.m2, sol.mf1, sol.mf2,
                         sol.M1, sol.M2, sol.Mf1, sol.Mf2,
                         sol.low.x, sol.low.pi])
        flags.append((float(v), any_exists))
    boundary = None
    for (v0, f0), (v1, f1) in zip(flags, flags[1:]):
        if f0 != f1:
            boundary = 0.5 * (v0 + v1)
    return rows, boundary
