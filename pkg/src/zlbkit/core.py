"""Structural primitives for a piecewise-linear New Keynesian model with a ZLB.

The model is three equations in the output gap ``x``, inflation ``pi`` and the
nominal rate ``i``::

    x_t  = M*E[x_{t+1}] - sigma*(i_t - N*E[pi_{t+1}]) + eps_t
    pi_t = lam*x_t + Mf*beta*E[pi_{t+1}]
    i_t  = max(psi*pi_t, -mu)

with a two-state Markov demand shock ``eps_t in {eps1, eps2}``.  The cognitive
discounts ``M, Mf, N`` equal one in the fully rational variant and are below
one under bounded rationality.  Everything in this module is immutable and
side-effect free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class ZlbModelError(Exception):
    """Base class for structural-model errors."""


class InvalidParameterError(ZlbModelError):
    """A parameter violates the admissible region of an operation."""


class DegenerateChainError(ZlbModelError):
    """The Markov chain has no ergodic distribution (p = q = 1)."""


class SingularSystemError(ZlbModelError):
    """A linear fixed point is singular at the requested parameters."""


#: relative tolerance for "determinant is nonzero" decisions, scaled by the
#: norm of the matrix being inverted
DET_RTOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Structural parameters.

    ``mu`` defaults to ``-ln(beta)``, the steady-state net rate implied by a
    zero-inflation steady state.  ``psi <= 1`` is accepted at construction
    (``taylor_active`` is then False) but rejected by the solver operations
    that require the Taylor principle.
    """

    beta: float
    sigma: float
    lam: float
    psi: float = 2.0
    mu: float | None = None
    M: float = 1.0
    Mf: float = 1.0
    N: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise InvalidParameterError(f"beta must lie in (0,1), got {self.beta}")
        if self.sigma <= 0.0 or self.lam <= 0.0:
            raise InvalidParameterError("sigma and lam must be positive")
        if self.mu is None:
            object.__setattr__(self, "mu", -math.log(self.beta))
        if self.mu <= 0.0:
            raise InvalidParameterError(f"mu must be positive, got {self.mu}")
        for name in ("M", "Mf", "N"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise InvalidParameterError(f"{name} must lie in (0,1], got {v}")

    @property
    def a(self) -> float:
        """Composite slope lam*sigma that shows up throughout the algebra."""
        return self.lam * self.sigma

    @property
    def taylor_active(self) -> bool:
        return self.psi > 1.0

    @property
    def unit_discounts(self) -> bool:
        return self.M == 1.0 and self.Mf == 1.0 and self.N == 1.0

    def with_unit_discounts(self) -> "ModelParams":
        if self.unit_discounts:
            return self
        return ModelParams(beta=self.beta, sigma=self.sigma, lam=self.lam,
                           psi=self.psi, mu=self.mu, M=1.0, Mf=1.0, N=1.0)

    def require_taylor(self) -> None:
        if not self.taylor_active:
            raise InvalidParameterError(f"operation requires psi > 1, got psi={self.psi}")

    @classmethod
    def from_config(cls, doc: dict) -> "ModelParams":
        """Build from a flat JSON object; cognitive discounts default to 1.

        Accepted keys: beta, sigma, lambda, psi, mu, M, Mf, N (shock keys
        eps1, eps2, p, q may ride along); anything else is an error.
        """
        _check_config_keys(doc)
        return cls(beta=doc["beta"], sigma=doc["sigma"], lam=doc["lambda"],
                   psi=doc.get("psi", 2.0), mu=doc.get("mu"),
                   M=doc.get("M", 1.0), Mf=doc.get("Mf", 1.0), N=doc.get("N", 1.0))


@dataclass(frozen=True)
class MarkovShock:
    """Two-state demand shock: ``p = Pr(stay in state 1)``, ``q = Pr(stay in 2)``."""

    eps1: float
    eps2: float
    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0 and 0.0 < self.q <= 1.0):
            raise InvalidParameterError(f"p, q must lie in (0,1], got p={self.p}, q={self.q}")

    @property
    def rho(self) -> float:
        """Autocorrelation of the chain, p + q - 1."""
        return self.p + self.q - 1.0

    @property
    def K(self) -> np.ndarray:
        return np.array([[self.p, 1.0 - self.p], [1.0 - self.q, self.q]])

    def eps(self, state: int) -> float:
        return self.eps1 if state == 0 else self.eps2

    def require_nonnegative_high_state(self) -> None:
        if self.eps2 < 0.0:
            raise InvalidParameterError(f"operation assumes eps2 >= 0, got {self.eps2}")

    @classmethod
    def from_config(cls, doc: dict) -> "MarkovShock":
        _check_config_keys(doc)
        return cls(eps1=doc["eps1"], eps2=doc["eps2"], p=doc["p"], q=doc["q"])


CONFIG_KEYS = ("beta", "sigma", "lambda", "psi", "mu", "M", "Mf", "N",
               "eps1", "eps2", "p", "q")


def _check_config_keys(doc: dict) -> None:
    unknown = set(doc) - set(CONFIG_KEYS)
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")


def ergodic_weight(shock: MarkovShock) -> float:
    """Long-run probability of the high-demand state, (1-p)/(2-p-q).

    Returns exactly 1.0 when ``q = 1`` (state 2 absorbing).  Raises
    :class:`DegenerateChainError` when both states are absorbing.
    """
    if shock.q == 1.0:
        if shock.p == 1.0:
            raise DegenerateChainError("p = q = 1 leaves no ergodic distribution")
        return 1.0
    return (1.0 - shock.p) / (2.0 - shock.p - shock.q)


def nu(params: ModelParams, pr: float) -> float:
    """Expectation loading M + N*lam*sigma/(1 - beta*Mf*pr) on future output.

    At unit discounts this is 1 + lam*sigma/(1 - beta*pr) > 1 for pr in (0,1].
    The product ``pr*nu(pr) > 1`` is the income-dominance condition that
    destroys existence of deep-recession solutions.
    """
    den = 1.0 - params.beta * params.Mf * pr
    if abs(den) < 1e-14:
        raise SingularSystemError(f"nu undefined: beta*Mf*pr = 1 at pr={pr}")
    return params.M + params.N * params.a / den


def delta(params: ModelParams) -> float:
    """Coherence/completeness discriminant (M-1)(1-Mf*beta) + lam*sigma*N.

    Negative values guarantee a unique bounded-rationality solution for any
    shock and rule out the forward-guidance puzzle.
    """
    return (params.M - 1.0) * (1.0 - params.Mf * params.beta) + params.a * params.N


def regime_loadings(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-state expectation loadings (A_P, A_Z) of the temporary-equilibrium map.

    ``Y_t = A * E_t[Y_{t+1}] + intercept`` with A = A_P when the policy rate is
    on the Taylor rule and A = A_Z at the floor.  The matrices carry the
    cognitive discounts and collapse to the familiar rational forms at
    M = Mf = N = 1.
    """
    b, s, l, psi = params.beta, params.sigma, params.lam, params.psi
    M, Mf, N = params.M, params.Mf, params.N
    d = 1.0 + l * s * psi
    A_P = np.array([[M / d, (N * s - Mf * b * s * psi) / d],
                    [M * l / d, (Mf * b + N * l * s) / d]])
    A_Z = np.array([[M, N * s],
                    [M * l, Mf * b + N * l * s]])
    return A_P, A_Z


def intercept_slack(params: ModelParams, eps: float) -> np.ndarray:
    """Intercept of the temporary-equilibrium map in the slack regime."""
    d = 1.0 + params.a * params.psi
    return np.array([eps / d, params.lam * eps / d])


def intercept_binding(params: ModelParams, eps: float) -> np.ndarray:
    """Intercept of the temporary-equilibrium map at the floor, i = -mu."""
    e = eps + params.sigma * params.mu
    return np.array([e, params.lam * e])


@dataclass(frozen=True)
class StateOutcome:
    """Realized (x, pi, i) in one shock state; i always obeys the policy rule."""

    x: float
    pi: float
    i: float

    @classmethod
    def from_pi(cls, x: float, pi: float, params: ModelParams) -> "StateOutcome":
        return cls(x=x, pi=pi, i=max(params.psi * pi, -params.mu))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.pi, self.i)


@dataclass(frozen=True)
class StructuralMatrices:
    """Bundle of the matrices every solver consumes, for one (params, shock)."""

    params: ModelParams
    K: np.ndarray
    Q: np.ndarray
    A_P: np.ndarray
    A_Z: np.ndarray

    def b_slack(self, eps: float) -> np.ndarray:
        return intercept_slack(self.params, eps)

    def b_binding(self, eps: float) -> np.ndarray:
        return intercept_binding(self.params, eps)


def build_matrices(params: ModelParams, shock: MarkovShock) -> StructuralMatrices:
    """Assemble K, Q = I - (M + Mf*beta + lam*sigma*N)K + beta*M*Mf*K^2 and loadings."""
    K = shock.K
    Q = (np.eye(2)
         - (params.M + params.Mf * params.beta + params.a * params.N) * K
         + params.beta * params.M * params.Mf * (K @ K))
    A_P, A_Z = regime_loadings(params)
    return StructuralMatrices(params=params, K=K, Q=Q, A_P=A_P, A_Z=A_Z)


def det_is_zero(det: float, scale: float) -> bool:
    """Relative singularity test: |det| below DET_RTOL times a norm scale."""
    return abs(det) <= DET_RTOL * max(scale, 1e-300)


@lru_cache(maxsize=64)
def _temp_eq_coeffs(params: ModelParams):
    A_P, A_Z = regime_loadings(params)
    d = 1.0 + params.a * params.psi
    return (A_P[0, 0], A_P[0, 1], A_P[1, 0], A_P[1, 1],
            A_Z[0, 0], A_Z[0, 1], A_Z[1, 0], A_Z[1, 1],
            d, params.psi, params.mu, params.lam, params.sigma)
