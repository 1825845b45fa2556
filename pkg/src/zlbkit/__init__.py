"""Solver and simulator toolkit for a New Keynesian model with a zero lower bound.

Equilibria under rational, mean-forecast, discounted and hybrid expectations;
analytic existence thresholds; E-stability selection; adaptive-learning
simulation; continuous-shock fixed points; forward-guidance experiments; and
endogenous attention.  A FastAPI service wraps the library and the CLI is a
thin client over the same request models.
"""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    DegenerateChainError,
    InvalidParameterError,
    MarkovShock,
    ModelParams,
    SingularSystemError,
    StateOutcome,
    StructuralMatrices,
    ZlbModelError,
    build_matrices,
    delta,
    ergodic_weight,
    nu,
)
from .equilibrium import (  # noqa: F401
    CandidateSolution,
    Concept,
    CutoffReport,
    Regime,
    cutoff_components,
    cutoff_ordering_check,
    enumerate_equilibria,
    lee_solution,
    solve_candidate,
    verify_ih_rpe_equivalence,
)
from .estability import EStabilityVerdict, classify, jacobian_ree, jacobian_rpe  # noqa: F401
