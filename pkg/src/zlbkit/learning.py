"""Temporary equilibria under predetermined beliefs and recursive learning.

With beliefs formed before markets clear, the period outcome solves a
two-branch piecewise-linear system: try the Taylor branch, and fall back to
the floor branch when the implied rate violates the bound.  The product of
the two branch determinants is ``1 + sigma*lam*psi > 0``, so exactly one
branch is consistent for any beliefs and any shock (lagged information).

Two learner types are supported:

* ``rpe-mean``: one belief vector, the recursive mean of past outcomes;
  forecasts equal the belief itself.
* ``msv``: state-contingent belief vectors updated only on visits to their
  state, with occupancy-share scaling; forecasts mix the beliefs with the
  transition row of the observed current state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    InvalidParameterError,
    MarkovShock,
    ModelParams,
    StateOutcome,
    ZlbModelError,
    _temp_eq_coeffs,
    ergodic_weight,
    regime_loadings,
)
from .equilibrium import Concept, Regime, enumerate_equilibria

TIE_TO_FLOOR = True  # psi*pi = -mu resolves to the floor branch


class CounterZeroError(ZlbModelError):
    """A state-contingent belief was updated before its state was ever weighted."""


class BeliefKind(enum.Enum):
    RPE_MEAN = "rpe-mean"
    MSV = "msv"


@dataclass(frozen=True)
class GainSpec:
    """Learning gain: 1/t when decreasing, a fixed value otherwise."""

    kind: str = "decreasing"          # "decreasing" | "constant"
    value: float = 1e-5

    def __post_init__(self):
        if self.kind not in ("decreasing", "constant"):
            raise InvalidParameterError(f"unknown gain kind {self.kind!r}")
        if self.kind == "constant" and not (0.0 < self.value <= 1.0):
            raise InvalidParameterError("constant gain must lie in (0,1]")

    def at(self, t: int) -> float:
        if self.kind == "decreasing":
            return 1.0 / max(t, 1)
        return self.value


@dataclass(frozen=True)
class BeliefState:
    """Learner state: belief vector(s), occupancy shares, clock and info lag."""

    kind: BeliefKind
    Ye: np.ndarray                    # (2,) for rpe-mean, (2,2) rows=states for msv
    nu_counters: np.ndarray           # (2,) occupancy shares, sum to one
    t: int
    gain: GainSpec
    info_lag: int = 1

    def __post_init__(self):
        if self.info_lag not in (0, 1):
            raise InvalidParameterError("info_lag must be 0 or 1")
        want = (2, 2) if self.kind is BeliefKind.MSV else (2,)
        if self.Ye.shape != want:
            raise InvalidParameterError(f"belief shape {self.Ye.shape}, expected {want}")


class SimEvent(enum.Enum):
    NO_SOLUTION = "no-solution"
    MULTIPLE_SOLUTIONS = "multiple-solutions"


@dataclass
class SimPath:
    """One simulated learning path; arrays all have length T_len."""

    seed: int
    T_len: int
    shocks: np.ndarray                # int state indices
    outcomes: np.ndarray              # (T_len, 3) columns x, pi, i
    beliefs: np.ndarray               # (T_len, 2) or (T_len, 4)
    diverged_at: int | None = None
    events: list[tuple[int, SimEvent]] = field(default_factory=list)

    def outcome(self, t: int) -> StateOutcome:
        x, pi, i = self.outcomes[t]
        return StateOutcome(x=float(x), pi=float(pi), i=float(i))


def temp_equilibrium(Ye, eps_t: float, params: ModelParams) -> StateOutcome:
    """Market-clearing outcome for predetermined expectations (x_e, pi_e).

    Solves the Taylor branch first and keeps it when psi*pi > -mu strictly;
    otherwise the floor branch applies (the tie goes to the floor).  Existence
    and uniqueness hold for all sigma, lam, psi > 0.
    """
    (p00, p01, p10, p11, z00, z01, z10, z11,
     d, psi, mu, lam, sigma) = _temp_eq_coeffs(params)
    xe, pie = float(Ye[0]), float(Ye[1])
    pi_s = p10 * xe + p11 * pie + lam * eps_t / d
    if psi * pi_s + mu > 0.0:
        x_s = p00 * xe + p01 * pie + eps_t / d
        return StateOutcome(x=x_s, pi=pi_s, i=psi * pi_s)
    e = eps_t + sigma * mu
    x_b = z00 * xe + z01 * pie + e
    pi_b = z10 * xe + z11 * pie + lam * e
    return StateOutcome(x=x_b, pi=pi_b, i=-mu)


def _branch_candidates(Ye, eps_t: float, params: ModelParams) -> list[StateOutcome]:
    """Both branch solutions that satisfy their own rate check (oracle helper)."""
    (p00, p01, p10, p11, z00, z01, z10, z11,
     d, psi, mu, lam, sigma) = _temp_eq_coeffs(params)
    xe, pie = float(Ye[0]), float(Ye[1])
    out = []
    pi_s = p10 * xe + p11 * pie + lam * eps_t / d
    if psi * pi_s + mu > 0.0:
        out.append(StateOutcome(x=p00 * xe + p01 * pie + eps_t / d, pi=pi_s, i=psi * pi_s))
    e = eps_t + sigma * mu
    pi_b = z10 * xe + z11 * pie + lam * e
    if psi * pi_b + mu <= 0.0:
        out.append(StateOutcome(x=z00 * xe + z01 * pie + e, pi=pi_b, i=-mu))
    return out


def step_learning(state: BeliefState, observed: StateOutcome,
                  observed_shock_state: int, next_shock_state_for_forecast: int,
                  shock: MarkovShock) -> tuple[BeliefState, tuple[float, float]]:
    """One belief revision followed by the forecast used in the current period.

    ``observed`` is the outcome dated by the information lag, and
    ``observed_shock_state`` is the state that prevailed then.  The msv update
    scales the gain by the inverse occupancy share of the observed state; its
    forecast then mixes the state-contingent beliefs with the transition row
    of the current state.  The rpe-mean forecast is the updated belief itself.
    """
    t = state.t
    g = state.gain.at(t)
    obs = np.array([observed.x, observed.pi])
    if state.kind is BeliefKind.RPE_MEAN:
        Ye = state.Ye + g * (obs - state.Ye)
        new = replace(state, Ye=Ye, t=t + 1)
        return new, (float(Ye[0]), float(Ye[1]))

    j = observed_shock_state
    share = state.nu_counters[j]
    if share <= 0.0:
        raise CounterZeroError(f"state {j} has zero occupancy weight at t={t}")
    Ye = state.Ye.copy()
    Ye[j] = Ye[j] + (g / share) * (obs - Ye[j])
    indic = np.array([1.0 - j, float(j)])
    nus = state.nu_counters + g * (indic - state.nu_counters)
    new = replace(state, Ye=Ye, nu_counters=nus, t=t + 1)
    row = shock.K[next_shock_state_for_forecast]
    f = row[0] * Ye[0] + row[1] * Ye[1]
    return new, (float(f[0]), float(f[1]))


def _forecast(state: BeliefState, current_state: int, shock: MarkovShock) -> tuple[float, float]:
    if state.kind is BeliefKind.RPE_MEAN:
        return float(state.Ye[0]), float(state.Ye[1])
    row = shock.K[current_state]
    f = row[0] * state.Ye[0] + row[1] * state.Ye[1]
    return float(f[0]), float(f[1])


def rpe_reference(params: ModelParams, shock: MarkovShock):
    """Mean-forecast equilibrium used for initialization and divergence scaling.

    Returns (state-contingent outcome matrix (2,2), unconditional mean (2,)).
    Prefers the floor-in-low-state solution when several exist.
    """
    cands = enumerate_equilibria(Concept.RPE, params.with_unit_discounts(), shock)
    if not cands:
        raise InvalidParameterError("no mean-forecast equilibrium at these parameters")
    order = {Regime.ZP: 0, Regime.PP: 1, Regime.PZ: 2, Regime.ZZ: 3}
    cand = min(cands, key=lambda c: order[c.regime])
    qbar = ergodic_weight(shock)
    Y = np.array([[cand.Y1.x, cand.Y1.pi], [cand.Y2.x, cand.Y2.pi]])
    mean = (1.0 - qbar) * Y[0] + qbar * Y[1]
    return Y, mean


def default_beliefs(kind: BeliefKind, params: ModelParams, shock: MarkovShock,
                    gain: GainSpec, info_lag: int = 1,
                    prior_weight: int = 2) -> BeliefState:
    """Beliefs initialized at the mean-forecast equilibrium values.

    ``prior_weight`` is the clock value the path starts from: it plays the
    role of a pre-sample during which agents watched the equilibrium, so a
    decreasing gain does not wipe the initialization on the first update (a
    start of 1 would) and the occupancy shares stay interior.
    """
    if prior_weight < 1:
        raise InvalidParameterError("prior_weight must be >= 1")
    Y, mean = rpe_reference(params, shock)
    qbar = ergodic_weight(shock)
    nus = np.array([1.0 - qbar, qbar])
    Ye = Y.copy() if kind is BeliefKind.MSV else mean.copy()
    return BeliefState(kind=kind, Ye=Ye, nu_counters=nus, t=prior_weight,
                       gain=gain, info_lag=info_lag)


def simulate(belief_kind: BeliefKind, params: ModelParams, shock: MarkovShock,
             gain_spec: GainSpec, T_len: int, seed: int,
             init: BeliefState | None = None,
             divergence_bound: float | None = None) -> SimPath:
    """Simulate shocks, forecasts, market clearing and belief updates.

    The shock path is drawn from a counter-based generator keyed by ``seed``
    (bit-reproducible).  ``diverged_at`` records the first period at which any
    inflation belief exceeds the divergence bound, which defaults to
    ``1e3 * max(1, |mean-forecast equilibrium inflation|)``.  With
    contemporaneous information (info_lag = 0) a period can lack a solution or
    admit two; these are recorded as events, not errors.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    if init is None:
        init = default_beliefs(belief_kind, params, shock, gain_spec)
    if init.kind is not belief_kind:
        raise InvalidParameterError("init belief kind does not match belief_kind")
    if divergence_bound is None:
        try:
            _, mean = rpe_reference(params, shock)
            divergence_bound = 1e3 * max(1.0, abs(mean[1]))
        except InvalidParameterError:
            divergence_bound = 1e3

    qbar = ergodic_weight(shock)
    s0 = 0 if rng.random() >= qbar else 1
    u = rng.random(T_len)

    if init.info_lag == 1:
        return _simulate_lagged(belief_kind, params, shock, init, T_len, seed,
                                s0, u, divergence_bound)
    return _simulate_contemporaneous(belief_kind, params, shock, init, T_len, seed,
                                     s0, u, divergence_bound)


def _simulate_lagged(belief_kind, params, shock, init, T_len, seed, s0, u, bound):
    """Scalar hot loop for the lagged-information case."""
    (p00, p01, p10, p11, z00, z01, z10, z11,
     d, psi, mu, lam, sigma) = _temp_eq_coeffs(params)
    p, q, e1, e2 = shock.p, shock.q, shock.eps1, shock.eps2
    msv = belief_kind is BeliefKind.MSV
    constant_gain = init.gain.kind == "constant"
    gval = init.gain.value

    states = np.empty(T_len, dtype=np.int64)
    outcomes = np.empty((T_len, 3))
    beliefs = np.empty((T_len, 4 if msv else 2))
    diverged_at = None

    if msv:
        xe = [float(init.Ye[0, 0]), float(init.Ye[1, 0])]
        pe = [float(init.Ye[0, 1]), float(init.Ye[1, 1])]
        nus = [float(init.nu_counters[0]), float(init.nu_counters[1])]
    else:
        xe1, pe1 = float(init.Ye[0]), float(init.Ye[1])
    tclock = init.t
    s = s0
    prev_x = prev_pi = 0.0
    prev_s = -1

    for t in range(T_len):
        if t > 0:
            stay = p if s == 0 else q
            if u[t] >= stay:
                s = 1 - s
        states[t] = s
        eps_t = e1 if s == 0 else e2

        g = gval if constant_gain else 1.0 / max(tclock, 1)
        if prev_s >= 0:
            if msv:
                share = nus[prev_s]
                if share <= 0.0:
                    raise CounterZeroError(
                        f"state {prev_s} has zero occupancy weight at t={tclock}")
                ge = g / share
                xe[prev_s] += ge * (prev_x - xe[prev_s])
                pe[prev_s] += ge * (prev_pi - pe[prev_s])
                nus[0] += g * ((1.0 if prev_s == 0 else 0.0) - nus[0])
                nus[1] += g * ((1.0 if prev_s == 1 else 0.0) - nus[1])
            else:
                xe1 += g * (prev_x - xe1)
                pe1 += g * (prev_pi - pe1)
            tclock += 1

        if msv:
            w = p if s == 0 else 1.0 - q
            fx = w * xe[0] + (1.0 - w) * xe[1]
            fp = w * pe[0] + (1.0 - w) * pe[1]
        else:
            fx, fp = xe1, pe1

        pi_s = p10 * fx + p11 * fp + lam * eps_t / d
        if psi * pi_s + mu > 0.0:
            ox = p00 * fx + p01 * fp + eps_t / d
            opi, oi = pi_s, psi * pi_s
        else:
            e = eps_t + sigma * mu
            ox = z00 * fx + z01 * fp + e
            opi = z10 * fx + z11 * fp + lam * e
            oi = -mu
        outcomes[t, 0], outcomes[t, 1], outcomes[t, 2] = ox, opi, oi
        if msv:
            beliefs[t, 0], beliefs[t, 1] = xe[0], pe[0]
            beliefs[t, 2], beliefs[t, 3] = xe[1], pe[1]
            big = max(abs(pe[0]), abs(pe[1]))
        else:
            beliefs[t, 0], beliefs[t, 1] = xe1, pe1
            big = abs(pe1)
        if diverged_at is None and big > bound:
            diverged_at = t
        prev_x, prev_pi, prev_s = ox, opi, s

    return SimPath(seed=seed, T_len=T_len, shocks=states, outcomes=outcomes,
                   beliefs=beliefs, diverged_at=diverged_at, events=[])


def _simulate_contemporaneous(belief_kind, params, shock, init, T_len, seed,
                              s0, u, bound):
    states = np.empty(T_len, dtype=np.int64)
    outcomes = np.empty((T_len, 3))
    width = 4 if belief_kind is BeliefKind.MSV else 2
    beliefs = np.empty((T_len, width))
    events: list[tuple[int, SimEvent]] = []
    diverged_at = None
    state = init
    s = s0
    for t in range(T_len):
        if t > 0:
            stay = shock.p if s == 0 else shock.q
            if u[t] >= stay:
                s = 1 - s
        states[t] = s
        out, state, ev = _contemporaneous_step(state, s, shock.eps(s), params, shock)
        if ev is not None:
            events.append((t, ev))
        if out is None:
            out = StateOutcome(math.nan, math.nan, math.nan)
        outcomes[t] = out.as_tuple()
        beliefs[t] = state.Ye.reshape(-1)
        pi_beliefs = state.Ye[..., 1] if belief_kind is BeliefKind.MSV else state.Ye[1]
        if diverged_at is None and np.max(np.abs(pi_beliefs)) > bound:
            diverged_at = t
    return SimPath(seed=seed, T_len=T_len, shocks=states, outcomes=outcomes,
                   beliefs=beliefs, diverged_at=diverged_at, events=events)


def _contemporaneous_step(state: BeliefState, s: int, eps_t: float,
                          params: ModelParams, shock: MarkovShock):
    """Within-period fixed point when the current outcome enters the update.

    For each branch, the updated belief and the branch outcome solve a small
    linear system; a branch counts when its own rate check holds at the
    solution.  Zero consistent branches is a no-solution event (beliefs kept);
    two is a multiplicity event resolved toward the floor branch.
    """
    g = state.gain.at(state.t)
    A_P, A_Z = regime_loadings(params)
    sols = []
    for branch, A in (("slack", A_P), ("floor", A_Z)):
        b = (np.array([eps_t, params.lam * eps_t]) / (1.0 + params.a * params.psi)
             if branch == "slack"
             else np.array([eps_t + params.sigma * params.mu,
                            params.lam * (eps_t + params.sigma * params.mu)]))
        if state.kind is BeliefKind.RPE_MEAN:
            # Y = A((1-g) Ye + g Y) + b
            lhs = np.eye(2) - g * A
            Y = np.linalg.solve(lhs, A @ ((1.0 - g) * state.Ye) + b)
        else:
            share = state.nu_counters[s]
            if share <= 0.0:
                raise CounterZeroError(f"state {s} has zero occupancy weight")
            ge = g / share
            row = shock.K[s]
            const = row[0] * state.Ye[0] + row[1] * state.Ye[1]
            lhs = np.eye(2) - row[s] * ge * A
            Y = np.linalg.solve(lhs, A @ (const - row[s] * ge * state.Ye[s]) + b)
        ok = (params.psi * Y[1] + params.mu > 0.0) if branch == "slack" \
            else (params.psi * Y[1] + params.mu <= 0.0)
        if ok:
            sols.append((branch, Y))

    if not sols:
        return None, replace(state, t=state.t + 1), SimEvent.NO_SOLUTION
    event = SimEvent.MULTIPLE_SOLUTIONS if len(sols) > 1 else None
    branch, Y = sols[-1] if TIE_TO_FLOOR else sols[0]
    out = StateOutcome.from_pi(float(Y[0]), float(Y[1]), params)
    new_state, _ = step_learning(state, out, s, s, shock)
    return out, new_state, event
