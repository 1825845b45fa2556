"""FastAPI service exposing the toolkit's commands."""

from __future__ import annotations

import logging
import os

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..core import ZlbModelError
from . import handlers
from . import schemas as S

logger = logging.getLogger("zlbkit.service")

app = FastAPI(title="zlbkit", version=__version__,
              description="Equilibria, learning dynamics and policy experiments "
                          "for a New Keynesian model with a zero lower bound.")


def _guard(fn, req):
    try:
        return fn(req)
    except ZlbModelError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health", response_model=S.HealthResponse)
def health() -> S.HealthResponse:
    return S.HealthResponse(status="ok", version=__version__)


@app.post("/solve", response_model=S.SolveResponse)
def solve(req: S.SolveRequest) -> S.SolveResponse:
    return _guard(handlers.handle_solve, req)


@app.post("/region-scan", response_model=S.ScanResponse)
def region_scan(req: S.RegionScanRequest) -> S.ScanResponse:
    return _guard(handlers.handle_region_scan, req)


@app.post("/duration-scan", response_model=S.ScanResponse)
def duration_scan(req: S.DurationScanRequest) -> S.ScanResponse:
    return _guard(handlers.handle_duration_scan, req)


@app.post("/simulate", response_model=S.ScanResponse)
def simulate(req: S.SimulateRequest) -> S.ScanResponse:
    return _guard(handlers.handle_simulate, req)


@app.post("/continuous-rpe", response_model=S.ScanResponse)
def continuous_rpe(req: S.ContinuousRpeRequest) -> S.ScanResponse:
    return _guard(handlers.handle_continuous, req)


@app.post("/forward-guidance", response_model=S.ScanResponse)
def forward_guidance(req: S.ForwardGuidanceRequest) -> S.ScanResponse:
    return _guard(handlers.handle_forward_guidance, req)


@app.post("/attention-scan", response_model=S.ScanResponse)
def attention_scan(req: S.AttentionScanRequest) -> S.ScanResponse:
    return _guard(handlers.handle_attention_scan, req)


@app.post("/ih-check", response_model=S.ScanResponse)
def ih_check(req: S.IhCheckRequest) -> S.ScanResponse:
    return _guard(handlers.handle_ih_check, req)


def configure_logging() -> None:
    level = os.environ.get("ZLB_LOG", "warn").upper()
    level = {"WARN": "WARNING"}.get(level, level)
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


configure_logging()
