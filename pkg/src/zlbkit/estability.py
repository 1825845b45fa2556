"""Learning-ODE Jacobians and E-stability classification.

An equilibrium is learnable when the differential equation governing belief
revisions is locally stable there, i.e. when every eigenvalue of the Jacobian
``DT`` has negative real part.  For state-contingent beliefs the Jacobian is
4x4 and mixes the regime loadings with the transition probabilities; for
mean-forecast beliefs it is the 2x2 ergodic mixture of the loadings minus the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidParameterError, MarkovShock, ModelParams, ergodic_weight, regime_loadings
from .equilibrium import (
    CandidateSolution,
    Concept,
    Regime,
    effective_params,
    enumerate_equilibria,
)

#: eigenvalues with real part above this margin are treated as unstable;
#: real parts within the margin of zero are boundary cases, not E-stable
STABILITY_MARGIN = 1e-10


@dataclass(frozen=True)
class EStabilityVerdict:
    regime: Regime
    concept: Concept
    jacobian: np.ndarray
    max_real_part: float
    estable: bool
    boundary: bool
    solution: CandidateSolution | None = None


def jacobian_ree(regime: Regime, params: ModelParams, shock: MarkovShock) -> np.ndarray:
    """4x4 belief-ODE Jacobian for state-contingent learning of a regime.

    Row blocks are the responses of the two state-contingent outcomes to the
    two state-contingent beliefs: the low-state row mixes its regime loading
    with weights (p, 1-p), the high-state row with (1-q, q); subtracting the
    identity gives the ODE Jacobian.
    """
    prm = effective_params(Concept.REE, params)
    A_P, A_Z = regime_loadings(prm)
    bind1, bind2 = regime.binding
    A1 = A_Z if bind1 else A_P
    A2 = A_Z if bind2 else A_P
    p, q = shock.p, shock.q
    top = np.hstack([p * A1, (1.0 - p) * A1])
    bot = np.hstack([(1.0 - q) * A2, q * A2])
    return np.vstack([top, bot]) - np.eye(4)


def jacobian_rpe(regime: Regime, params: ModelParams, qbar: float) -> np.ndarray:
    """2x2 belief-ODE Jacobian for mean-forecast learning of a regime.

    The unconditional mean of outcomes responds to the mean belief through the
    ergodic mixture of the regime loadings; discounted loadings are used as-is,
    so the same code covers the boundedly rational variant.
    """
    if not (0.0 < qbar <= 1.0):
        raise InvalidParameterError(f"qbar must lie in (0,1], got {qbar}")
    A_P, A_Z = regime_loadings(params)
    bind1, bind2 = regime.binding
    A1 = A_Z if bind1 else A_P
    A2 = A_Z if bind2 else A_P
    return (1.0 - qbar) * A1 + qbar * A2 - np.eye(2)


def eigvals_general(mat: np.ndarray) -> np.ndarray:
    """Eigenvalues via the library QR-type solver."""
    return np.linalg.eigvals(mat)


def eigvals_charpoly(mat: np.ndarray) -> np.ndarray:
    """Eigenvalues via explicitly assembled characteristic polynomials.

    2x2 matrices use the closed-form quadratic; larger ones build the
    characteristic coefficients by the Faddeev-LeVerrier recursion and root
    them.  Serves as an independent cross-check of :func:`eigvals_general`.
    """
    n = mat.shape[0]
    if n == 2:
        tr = mat[0, 0] + mat[1, 1]
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        disc = complex(tr * tr - 4.0 * det) ** 0.5
        return np.array([(tr + disc) / 2.0, (tr - disc) / 2.0])
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    Mk = np.eye(n)
    for k in range(1, n + 1):
        Mk = mat @ Mk
        ck = -np.trace(Mk) / k
        Mk += ck * np.eye(n)
        coeffs[k] = ck
    return np.roots(coeffs)


def block_diagonal_eigvals(mat: np.ndarray, atol: float = 0.0) -> np.ndarray | None:
    """Closed-form eigenvalues when the 4x4 is block triangular.

    Either off-diagonal block vanishing (absorbing state, p = 1 or q = 1)
    makes the spectrum the union of the diagonal blocks' quadratic roots;
    returns None when no reduction applies.
    """
    if mat.shape != (4, 4):
        return None
    if np.max(np.abs(mat[:2, 2:])) > atol and np.max(np.abs(mat[2:, :2])) > atol:
        return None
    return np.concatenate([eigvals_charpoly(mat[:2, :2]),
                           eigvals_charpoly(mat[2:, 2:])])


def _verdict(regime: Regime, concept: Concept, jac: np.ndarray,
             solution: CandidateSolution | None = None) -> EStabilityVerdict:
    eig = block_diagonal_eigvals(jac) if jac.shape == (4, 4) else None
    if eig is None:
        eig = eigvals_general(jac)
    max_re = float(np.max(eig.real))
    return EStabilityVerdict(regime=regime, concept=concept, jacobian=jac,
                             max_real_part=max_re,
                             estable=max_re < -STABILITY_MARGIN,
                             boundary=abs(max_re) <= STABILITY_MARGIN,
                             solution=solution)


def assess(concept: Concept, regime: Regime, params: ModelParams,
           shock: MarkovShock) -> EStabilityVerdict:
    """E-stability verdict for one regime, without solving for the equilibrium."""
    if concept is Concept.REE:
        return _verdict(regime, concept, jacobian_ree(regime, params, shock))
    if concept in (Concept.RPE, Concept.BRRPE):
        prm = effective_params(concept, params)
        return _verdict(regime, concept, jacobian_rpe(regime, prm, ergodic_weight(shock)))
    raise InvalidParameterError(f"E-stability is not defined here for concept {concept}")


def classify(concept: Concept, params: ModelParams,
             shock: MarkovShock) -> EStabilityVerdict | None:
    """The unique consistent candidate that is also E-stable, or None.

    Inside the existence region exactly one candidate should qualify (and only
    PP or ZP for the mean-forecast concepts); finding two indicates parameters
    outside the theory's scope and raises.
    """
    winners = []
    for cand in enumerate_equilibria(concept, params, shock):
        v = assess(concept, cand.regime, params, shock)
        if v.estable:
            winners.append(EStabilityVerdict(regime=v.regime, concept=concept,
                                             jacobian=v.jacobian,
                                             max_real_part=v.max_real_part,
                                             estable=True, boundary=v.boundary,
                                             solution=cand))
    if not winners:
        return None
    if len(winners) > 1:
        raise InvalidParameterError(
            f"multiple E-stable {concept.value} candidates: "
            f"{[w.regime.value for w in winners]}")
    return winners[0]
