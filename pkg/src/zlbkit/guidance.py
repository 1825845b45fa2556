"""Forward-guidance experiments: announced future rate cuts and their impact.

The experiment pegs the rate at zero through period T-1, cuts it to
``i_bar < 0`` at T, and reverts to the Taylor rule afterwards.  Solving
backwards from the post-announcement equilibrium, outcomes compound through
``A_brz``, whose spectral radius is below one exactly when the coherence
discriminant ``delta`` is negative; only then do long-horizon announcements
lose their bite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import InvalidParameterError, ModelParams, delta

#: switch to log-magnitude tracking once the recursion state exceeds this
OVERFLOW_GUARD = 1e150


class LearningKind(enum.Enum):
    EULER = "euler-learning"
    IH_CREDIBLE = "ih-credible"
    IH_NOT_CREDIBLE = "ih-not-credible"


@dataclass(frozen=True)
class FGConfig:
    T: int
    i_bar: float

    def __post_init__(self):
        if self.T < 0:
            raise InvalidParameterError("announcement horizon T must be >= 0")
        if self.i_bar >= 0.0:
            raise InvalidParameterError("the announced rate must be a cut, i_bar < 0")


@dataclass(frozen=True)
class FGPath:
    outcomes: np.ndarray               # (T+1, 2) rows (x_t, pi_t), t = 0..T
    impact_derivatives: tuple[float, float]   # (dx0/di_T, dpi0/di_T)
    overflowed: bool = False


def transition_matrix(params: ModelParams) -> np.ndarray:
    """Backward-recursion matrix A_brz = [[M, sigma*N], [M*lam, Mf*beta + lam*sigma*N]]."""
    M, Mf, N = params.M, params.Mf, params.N
    s, l, b = params.sigma, params.lam, params.beta
    return np.array([[M, s * N], [M * l, Mf * b + l * s * N]])


def fg_path_bre(params: ModelParams, cfg: FGConfig) -> FGPath:
    """Exact path Y_t = A_brz^(T-t) * Gamma with Gamma = (-sigma, -lam*sigma)' * i_bar.

    Impact derivatives follow by linearity: Y_0 / i_bar.  Past the overflow
    guard the recursion tracks magnitudes in logs and reports signed infinities
    for the derivatives.
    """
    A = transition_matrix(params)
    gamma = np.array([-params.sigma * cfg.i_bar, -params.lam * params.sigma * cfg.i_bar])
    path = np.empty((cfg.T + 1, 2))
    path[cfg.T] = gamma
    y = gamma.copy()
    overflowed = False
    for t in range(cfg.T - 1, -1, -1):
        y = A @ y
        if not overflowed and np.max(np.abs(y)) > OVERFLOW_GUARD:
            overflowed = True
        if overflowed:
            # renormalize to keep direction; magnitudes are reported as inf
            y = y / np.max(np.abs(y)) * OVERFLOW_GUARD
        path[t] = y
    if overflowed:
        dx0 = math.copysign(math.inf, path[0, 0] / cfg.i_bar)
        dpi0 = math.copysign(math.inf, path[0, 1] / cfg.i_bar)
    else:
        dx0 = path[0, 0] / cfg.i_bar
        dpi0 = path[0, 1] / cfg.i_bar
    return FGPath(outcomes=path, impact_derivatives=(dx0, dpi0), overflowed=overflowed)


def puzzle_predicate(params: ModelParams) -> bool:
    """True when announcement effects grow with the horizon (delta >= 0).

    Cross-checked against the spectral radius of A_brz, which crosses one
    exactly at delta = 0.
    """
    return delta(params) >= 0.0


def spectral_radius(params: ModelParams) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(transition_matrix(params)))))


def fg_effect_learning(kind: LearningKind, params: ModelParams,
                       cfg: FGConfig) -> tuple[float, float]:
    """Impact of the announced cut on date-0 outcomes under adaptive learning.

    Backward-looking forecasts make the announcement inert until it happens,
    so the Euler-equation learner and the non-credible long-horizon learner
    both show zero impact; a credible announcement discounts through the
    planning horizon, giving (-sigma*beta^T, -lam*sigma*beta^T).
    """
    if kind in (LearningKind.EULER, LearningKind.IH_NOT_CREDIBLE):
        return (0.0, 0.0)
    if kind is LearningKind.IH_CREDIBLE:
        f = params.beta ** cfg.T
        return (-params.sigma * f, -params.lam * params.sigma * f)
    raise InvalidParameterError(f"unknown learning kind {kind}")
