"""Mean-forecast fixed points when the demand shock is Gaussian AR(1).

With forecasts pinned at a constant ``a_pi`` (and the implied output forecast),
inflation follows a two-branch law of motion in the current shock; its
unconditional mean ``h(a_pi)`` involves the standard-normal cdf of the
threshold ``L(a_pi)`` separating the floor from the Taylor branch.  Fixed
points of ``h`` are the self-confirming mean forecasts.  Under an active
Taylor rule ``h(a) - a`` is single-peaked, so there are either no fixed points
or exactly two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtri

from .core import InvalidParameterError, ModelParams, ZlbModelError

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class BracketExpansionError(ZlbModelError):
    """Root bracketing failed to find a sign change within the doubling budget."""


def norm_cdf(z: float) -> float:
    """Standard-normal cdf via the C library's erfc (accurate in both tails)."""
    return 0.5 * math.erfc(-z / SQRT2)


def norm_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) * INV_SQRT_2PI


@dataclass(frozen=True)
class ContinuousShock:
    """AR(1) demand shock eps_t = rho_c * eps_{t-1} + v_t, v ~ N(0, sigma_v^2)."""

    rho_c: float
    sigma_v: float

    def __post_init__(self):
        if not (0.0 <= self.rho_c < 1.0):
            raise InvalidParameterError(f"rho_c must lie in [0,1), got {self.rho_c}")
        if self.sigma_v <= 0.0:
            raise InvalidParameterError(f"sigma_v must be positive, got {self.sigma_v}")

    @property
    def sigma_eps(self) -> float:
        """Unconditional standard deviation sigma_v / sqrt(1 - rho_c^2)."""
        return self.sigma_v / math.sqrt(1.0 - self.rho_c ** 2)


@dataclass(frozen=True)
class ContinuousRpeResult:
    a_star: float
    gap_at_star: float                 # h(a_star) - a_star
    fixed_points: tuple[float, ...]    # () or (low, high)
    regime_probabilities: tuple[float, ...]  # Pr(floor binds) at each fixed point


def L(a_pi: float, params: ModelParams, cshock: ContinuousShock) -> float:
    """Floor threshold in shock units: the rate is at the floor iff eps <= sigma_eps*L."""
    a = params.a
    return (-params.mu / params.psi - (1.0 + a) * a_pi - a * params.mu) \
        / (cshock.sigma_eps * params.lam)


def h(a_pi: float, params: ModelParams, cshock: ContinuousShock) -> float:
    """Unconditional mean of inflation as a function of the mean forecast."""
    a, psi, mu, lam = params.a, params.psi, params.mu, params.lam
    z = L(a_pi, params, cshock)
    d = 1.0 + a * psi
    return ((1.0 + a) / d * a_pi
            + norm_cdf(z) * ((1.0 + a) * a * psi / d * a_pi + a * mu)
            - norm_pdf(z) * lam * lam * cshock.sigma_eps * params.sigma * psi / d)


def h_prime_minus_one(a_pi: float, params: ModelParams, cshock: ContinuousShock) -> float:
    """Closed-form h'(a) - 1; the density terms cancel exactly."""
    a, psi = params.a, params.psi
    d = 1.0 + a * psi
    return a * (1.0 - psi) / d + norm_cdf(L(a_pi, params, cshock)) * a * psi * (1.0 + a) / d


def a_star(params: ModelParams, cshock: ContinuousShock) -> float:
    """Unique maximizer of h(a) - a: where the cdf term balances the Taylor pull."""
    params.require_taylor()
    target = ndtri((params.psi - 1.0) / ((1.0 + params.a) * params.psi))
    # invert the affine threshold: L(a) = target
    a = params.a
    return (-params.mu / params.psi - a * params.mu
            - target * cshock.sigma_eps * params.lam) / (1.0 + a)


def find_rpe_continuous(params: ModelParams, cshock: ContinuousShock,
                        xtol: float = 1e-12, max_doublings: int = 200) -> ContinuousRpeResult:
    """Locate the zero or two fixed points of the mean map by bracketed bisection.

    ``h(a) - a`` is single-peaked at ``a_star``; when the peak is positive one
    root lies on each side, found by geometric bracket expansion followed by
    bisection to ``xtol`` (residual verified below 1e-10).
    """
    params.require_taylor()
    ast = a_star(params, cshock)
    g = lambda x: h(x, params, cshock) - x
    gap = g(ast)
    if gap < 0.0:
        return ContinuousRpeResult(a_star=ast, gap_at_star=gap, fixed_points=(),
                                   regime_probabilities=())

    roots = []
    for direction in (-1.0, 1.0):
        step = max(1e-3, abs(ast) * 0.5)
        inner = ast
        outer = ast + direction * step
        n = 0
        while g(outer) > 0.0:
            inner = outer
            step *= 2.0
            outer = ast + direction * step
            n += 1
            if n > max_doublings:
                raise BracketExpansionError(
                    f"no sign change after {max_doublings} doublings toward "
                    f"{'-inf' if direction < 0 else '+inf'}")
        lo, hi = (outer, inner) if direction < 0 else (inner, outer)
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            # keep the positive-gap side toward a_star
            if g(mid) > 0.0:
                if direction < 0:
                    hi = mid
                else:
                    lo = mid
            else:
                if direction < 0:
                    lo = mid
                else:
                    hi = mid
        root = 0.5 * (lo + hi)
        if abs(g(root)) > 1e-10:
            raise BracketExpansionError(f"bisection residual {g(root):.2e} too large")
        roots.append(root)

    probs = tuple(norm_cdf(L(r, params, cshock)) for r in roots)
    return ContinuousRpeResult(a_star=ast, gap_at_star=gap,
                               fixed_points=tuple(roots),
                               regime_probabilities=probs)
