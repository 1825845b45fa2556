"""Command handlers shared by the HTTP service and the CLI."""

from __future__ import annotations

import math

import numpy as np

from ..attention import ATTENTION_SCAN_HEADER, attention_existence_scan
from ..continuous import ContinuousShock, find_rpe_continuous
from ..core import InvalidParameterError, MarkovShock, ModelParams
from ..equilibrium import (
    Concept,
    Regime,
    cutoff_components,
    enumerate_equilibria,
    verify_ih_rpe_equivalence,
)
from ..estability import classify
from ..guidance import FGConfig, LearningKind, fg_effect_learning, fg_path_bre
from ..learning import BeliefKind, simulate
from ..scans import ScanResult, duration_scan, region_scan
from . import schemas as S


def _json_float(v: float):
    """NaN -> null, infinities -> the CSV convention strings.

    Keeps responses strict JSON and makes the CLI's server mode byte-identical
    to in-process runs when thresholds are infinite.
    """
    if isinstance(v, float):
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
    return v


def handle_solve(req: S.SolveRequest) -> S.SolveResponse:
    params = req.params.build()
    shock = req.shock.build()
    report: dict = {"params": req.params.model_dump(by_alias=True),
                    "shock": req.shock.model_dump(), "concepts": {}}
    for cname in req.concepts:
        concept = Concept(cname)
        entry: dict = {}
        rep = cutoff_components(concept, params, shock)
        entry["eps_bar"] = _json_float(rep.eps_bar)
        entry["eps_pp"] = _json_float(rep.eps_pp)
        entry["eps_zp2"] = _json_float(rep.eps_zp2)
        entry["delta"] = rep.delta
        entry["branch"] = rep.branch.value
        entry["equilibria"] = [
            {"regime": c.regime.value,
             "Y1": c.Y1.as_tuple(), "Y2": c.Y2.as_tuple()}
            for c in enumerate_equilibria(concept, params, shock)]
        if concept in (Concept.REE, Concept.RPE, Concept.BRRPE):
            v = classify(concept, params, shock)
            entry["estable"] = None if v is None else {
                "regime": v.regime.value, "max_real_part": v.max_real_part}
        report["concepts"][cname] = entry
    return S.SolveResponse(report=report)


def _scan_response(res: ScanResult) -> S.ScanResponse:
    rows = [[_json_float(v) for v in row] for row in res.rows]
    return S.ScanResponse(header=res.header, rows=rows, meta=res.meta)


def handle_region_scan(req: S.RegionScanRequest) -> S.ScanResponse:
    res = region_scan(req.params.build(), req.shock.build(),
                      [ax.build() for ax in req.grid],
                      list(req.concepts), workers=req.workers)
    return _scan_response(res)


def handle_duration_scan(req: S.DurationScanRequest) -> S.ScanResponse:
    res = duration_scan(req.params.build(), req.shock.build(),
                        req.eps1_grid.build(), list(req.concepts),
                        workers=req.workers)
    return _scan_response(res)


def handle_simulate(req: S.SimulateRequest) -> S.ScanResponse:
    params = req.params.build()
    shock = req.shock.build()
    kind = req.belief_kind()
    path = simulate(kind, params, shock, req.gain.build(), req.T, req.seed,
                    divergence_bound=req.divergence_bound)
    if kind is BeliefKind.MSV:
        belief_cols = ["xe1", "pie1", "xe2", "pie2"]
        order = [0, 1, 2, 3]
    else:
        belief_cols = ["xe", "pie"]
        order = [0, 1]
    header = ["t", "state", "x", "pi", "i"] + belief_cols + ["diverged"]
    rows = []
    for t in range(path.T_len):
        x, pi, i = path.outcomes[t]
        div = 1.0 if path.diverged_at is not None and t >= path.diverged_at else 0.0
        rows.append([float(t), float(path.shocks[t]), float(x), float(pi), float(i)]
                    + [float(path.beliefs[t][j]) for j in order] + [div])
    meta = {"kind": "simulate", "seed": req.seed,
            "diverged_at": path.diverged_at,
            "events": [[t, e.value] for t, e in path.events]}
    return _scan_response(ScanResult(header=header, rows=rows, meta=meta))


_CAXIS = {"sigma_v", "rho_c", "lambda", "psi"}


def handle_continuous(req: S.ContinuousRpeRequest) -> S.ScanResponse:
    params = req.params.build()
    base = req.cshock.build()
    if req.axis is None:
        values = [None]
        axis_name = None
    else:
        if req.axis.name not in _CAXIS:
            raise InvalidParameterError(
                f"continuous scans vary one of {sorted(_CAXIS)}")
        values = list(req.axis.build().values)
        axis_name = req.axis.name
    rows = []
    for v in values:
        prm, shk = params, base
        if axis_name == "sigma_v":
            shk = ContinuousShock(rho_c=base.rho_c, sigma_v=float(v))
        elif axis_name == "rho_c":
            shk = ContinuousShock(rho_c=float(v), sigma_v=base.sigma_v)
        elif axis_name == "lambda":
            prm = ModelParams(beta=params.beta, sigma=params.sigma, lam=float(v),
                              psi=params.psi, mu=params.mu)
        elif axis_name == "psi":
            prm = ModelParams(beta=params.beta, sigma=params.sigma, lam=params.lam,
                              psi=float(v), mu=params.mu)
        res = find_rpe_continuous(prm, shk)
        fp = list(res.fixed_points) + [math.nan] * (2 - len(res.fixed_points))
        pr = list(res.regime_probabilities) + [math.nan] * (2 - len(res.regime_probabilities))
        rows.append([float(v) if v is not None else math.nan,
                     res.a_star, res.gap_at_star,
                     1.0 if res.fixed_points else 0.0,
                     fp[0], fp[1], pr[0], pr[1]])
    header = [axis_name or "value", "a_star", "gap_at_star", "exists",
              "a_low", "a_high", "pr_bind_low", "pr_bind_high"]
    return _scan_response(ScanResult(header=header, rows=rows,
                                     meta={"kind": "continuous-rpe"}))


def handle_forward_guidance(req: S.ForwardGuidanceRequest) -> S.ScanResponse:
    params = req.params.build()
    rows = []
    for T in range(req.T_max + 1):
        cfg = FGConfig(T=T, i_bar=req.i_bar)
        for kname in req.kinds:
            if kname == "bre":
                dx, dpi = fg_path_bre(params, cfg).impact_derivatives
            else:
                dx, dpi = fg_effect_learning(LearningKind(kname), params, cfg)
            rows.append([float(T), kname, dpi, dx])
    header = ["T", "kind", "dpi0_diT", "dx0_diT"]
    return _scan_response(ScanResult(header=header, rows=rows,
                                     meta={"kind": "forward-guidance"}))


def handle_attention_scan(req: S.AttentionScanRequest) -> S.ScanResponse:
    rows, boundary = attention_existence_scan(
        [Regime(r) for r in req.regimes], req.params.build(), req.shock.build(),
        req.attention.build(), req.eps1_grid.build().values)
    return _scan_response(ScanResult(
        header=list(ATTENTION_SCAN_HEADER), rows=rows,
        meta={"kind": "attention-scan",
              "existence_boundary": _json_float(boundary) if boundary is not None else None}))


def draw_unit_calibration(rng: np.random.Generator) -> tuple[ModelParams, MarkovShock]:
    """Random admissible calibration at unit discounts with q < 1."""
    params = ModelParams(beta=float(rng.uniform(0.9, 0.995)),
                         sigma=float(rng.uniform(0.25, 2.0)),
                         lam=float(rng.uniform(0.01, 0.2)),
                         psi=float(rng.uniform(1.05, 3.0)))
    shock = MarkovShock(eps1=float(rng.uniform(-0.1, 0.05)),
                        eps2=float(rng.uniform(0.0, 0.02)),
                        p=float(rng.uniform(0.1, 0.99)),
                        q=float(rng.uniform(0.1, 0.99)))
    return params, shock


def handle_ih_check(req: S.IhCheckRequest) -> S.ScanResponse:
    rng = np.random.Generator(np.random.Philox(req.seed))
    rows = []
    for i in range(req.n_draws):
        params, shock = draw_unit_calibration(rng)
        n_rpe = len(enumerate_equilibria(Concept.RPE, params, shock))
        ok = verify_ih_rpe_equivalence(params, shock)
        rows.append([float(i), float(n_rpe), 1.0 if ok else 0.0])
    header = ["draw", "n_rpe", "equivalent"]
    all_ok = all(r[2] == 1.0 for r in rows)
    return _scan_response(ScanResult(header=header, rows=rows,
                                     meta={"kind": "ih-check", "all_equivalent": all_ok,
                                           "seed": req.seed}))
