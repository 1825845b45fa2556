"""Grid scans over parameter space: existence regions and ZLB-duration limits.

Every cell is pure in its inputs, so scans fan out over a process pool and the
results are merged back in deterministic grid order.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidParameterError, MarkovShock, ModelParams
from .equilibrium import Concept, Regime, cutoff_components, enumerate_equilibria, solve_candidate

SHOCK_FIELDS = ("eps1", "eps2", "p", "q")
PARAM_FIELDS = ("beta", "sigma", "lambda", "psi", "mu", "M", "Mf", "N")
CSHOCK_FIELDS = ("rho_c", "sigma_v")
JOINT_FIELDS = {"M_Mf": ("M", "Mf")}    # move M and Mf together (common in scans)


@dataclass(frozen=True)
class GridAxis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        known = (set(SHOCK_FIELDS) | set(PARAM_FIELDS) | set(CSHOCK_FIELDS)
                 | set(JOINT_FIELDS))
        if self.name not in known:
            raise InvalidParameterError(f"unknown grid variable {self.name!r}; "
                                        f"choose from {sorted(known)}")
        if self.steps < 2 and self.lo != self.hi:
            raise InvalidParameterError("grid axes need steps >= 2")

    @property
    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass
class ScanResult:
    header: list[str]
    rows: list[list[float]]
    meta: dict = field(default_factory=dict)


def apply_point(params: ModelParams, shock: MarkovShock,
                assignment: dict[str, float]) -> tuple[ModelParams, MarkovShock]:
    """Re-build params/shock with some fields replaced; joint names fan out."""
    flat: dict[str, float] = {}
    for name, value in assignment.items():
        for f in JOINT_FIELDS.get(name, (name,)):
            flat[f] = value
    pkw = {f: flat.get(f, getattr(params, "lam" if f == "lambda" else f))
           for f in PARAM_FIELDS}
    pkw["lam"] = pkw.pop("lambda")
    skw = {f: flat.get(f, getattr(shock, f)) for f in SHOCK_FIELDS}
    return ModelParams(**pkw), MarkovShock(**skw)


def _region_cell(args):
    params, shock, assignment, concepts = args
    prm, shk = apply_point(params, shock, assignment)
    row = [assignment[k] for k in sorted(assignment)]
    for cname in concepts:
        concept = Concept(cname)
        try:
            rep = cutoff_components(concept, prm, shk)
            analytic = 1.0 if shk.eps1 >= rep.eps_bar else 0.0
            eps_bar = rep.eps_bar
        except InvalidParameterError:
            analytic, eps_bar = math.nan, math.nan
        oracle = 1.0 if enumerate_equilibria(concept, prm, shk) else 0.0
        row.extend([eps_bar, analytic, oracle])
    return row


def region_scan(params: ModelParams, shock: MarkovShock, axes: list[GridAxis],
                concepts: list[str], workers: int = 1) -> ScanResult:
    """Existence flags per concept over a grid, analytic threshold and oracle side by side."""
    if not 1 <= len(axes) <= 2:
        raise InvalidParameterError("region scans take one or two grid axes")
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise InvalidParameterError("grid axes must be distinct")
    points = [{names[0]: float(v)} for v in axes[0].values]
    if len(axes) == 2:
        points = [dict(pt, **{names[1]: float(w)})
                  for pt in points for w in axes[1].values]
    jobs = [(params, shock, pt, concepts) for pt in points]
    rows = _run(jobs, _region_cell, workers)
    header = sorted(points[0])
    for cname in concepts:
        header += [f"eps_bar_{cname}", f"exists_analytic_{cname}", f"exists_oracle_{cname}"]
    return ScanResult(header=header, rows=rows,
                      meta={"kind": "region-scan", "concepts": concepts})


def _zp_exists(concept: Concept, params: ModelParams, shock: MarkovShock) -> bool:
    cand = solve_candidate(concept, Regime.ZP, params, shock)
    return cand.consistent


def max_duration_p(concept: Concept, params: ModelParams, shock: MarkovShock,
                   p_tol: float = 1e-6, coarse: int = 64) -> float:
    """Largest low-state persistence supporting a floor-in-low-state solution.

    Scans p from above to bracket the highest existence point, then bisects to
    ``p_tol``; NaN when no p in (0,1) supports the solution.
    """
    grid = np.linspace(1.0 - 1e-9, 1e-6, coarse)
    hi = None    # smallest scanned p with no solution above the bracket
    lo = None    # largest scanned p with a solution
    prev = 1.0
    for p in grid:
        shk = MarkovShock(eps1=shock.eps1, eps2=shock.eps2, p=float(p), q=shock.q)
        if _zp_exists(concept, params, shk):
            lo, hi = float(p), prev
            break
        prev = float(p)
    if lo is None:
        return math.nan
    while hi - lo > p_tol:
        mid = 0.5 * (lo + hi)
        shk = MarkovShock(eps1=shock.eps1, eps2=shock.eps2, p=mid, q=shock.q)
        if _zp_exists(concept, params, shk):
            lo = mid
        else:
            hi = mid
    return lo


def _duration_cell(args):
    params, shock, eps1, concepts = args
    shk = MarkovShock(eps1=float(eps1), eps2=shock.eps2, p=shock.p, q=shock.q)
    row = [float(eps1)]
    for cname in concepts:
        p_max = max_duration_p(Concept(cname), params, shk)
        dur = 1.0 / (1.0 - p_max) if not math.isnan(p_max) and p_max < 1.0 else math.nan
        row.extend([p_max, dur])
    return row


def duration_scan(params: ModelParams, shock: MarkovShock, eps1_axis: GridAxis,
                  concepts: list[str], workers: int = 1) -> ScanResult:
    """Per eps1: the maximum expected floor duration 1/(1-p_max) per concept."""
    if eps1_axis.name != "eps1":
        raise InvalidParameterError("duration scans run over the eps1 axis")
    jobs = [(params, shock, v, concepts) for v in eps1_axis.values]
    rows = _run(jobs, _duration_cell, workers)
    header = ["eps1"]
    for cname in concepts:
        header += [f"p_max_{cname}", f"duration_{cname}"]
    return ScanResult(header=header, rows=rows,
                      meta={"kind": "duration-scan", "concepts": concepts})


def _run(jobs, fn, workers: int) -> list[list[float]]:
    if workers <= 1 or len(jobs) < 4:
        return [fn(j) for j in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=chunk))
