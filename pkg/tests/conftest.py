import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zlbkit.core import MarkovShock, ModelParams


@pytest.fixture
def baseline_params():
    """beta=0.99, sigma=1, lam=0.02, psi=2, mu=-ln(beta)."""
    return ModelParams(beta=0.99, sigma=1.0, lam=0.02, psi=2.0)


@pytest.fixture
def trap_shock():
    return MarkovShock(eps1=-0.04, eps2=0.0, p=0.85, q=0.98)


@pytest.fixture
def region_shock():
    """Persistent recurring shock with a small positive high state."""
    return MarkovShock(eps1=-0.01, eps2=0.01, p=0.85, q=0.98)


@pytest.fixture
def gabaix_params():
    return ModelParams(beta=0.99, sigma=0.2, lam=0.11, psi=2.0,
                       M=0.85, Mf=0.8, N=1.0)


@pytest.fixture
def mckay_params():
    return ModelParams(beta=0.99, sigma=0.375, lam=0.02, psi=2.0,
                       M=0.97, Mf=1.0, N=1.0)


def draw_params_shock(rng: np.random.Generator, *, discounted: bool = False,
                      q_max: float = 0.99) -> tuple[ModelParams, MarkovShock]:
    """Random admissible calibration; q < 1 and eps2 >= 0 throughout."""
    kw = {}
    if discounted:
        kw = {"M": float(rng.uniform(0.6, 1.0)),
              "Mf": float(rng.uniform(0.6, 1.0)),
              "N": float(rng.uniform(0.6, 1.0))}
    params = ModelParams(beta=float(rng.uniform(0.9, 0.995)),
                         sigma=float(rng.uniform(0.25, 2.0)),
                         lam=float(rng.uniform(0.01, 0.2)),
                         psi=float(rng.uniform(1.05, 3.0)), **kw)
    shock = MarkovShock(eps1=float(rng.uniform(-0.1, 0.05)),
                        eps2=float(rng.uniform(0.0, 0.02)),
                        p=float(rng.uniform(0.1, 0.99)),
                        q=float(rng.uniform(0.1, q_max)))
    return params, shock


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))
