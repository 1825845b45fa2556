"""Pydantic request/response models; the CLI validates config files against these."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..core import MarkovShock, ModelParams
from ..continuous import ContinuousShock
from ..attention import AttentionParams
from ..learning import BeliefKind, GainSpec
from ..scans import GridAxis


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ParamsModel(StrictModel):
    beta: float
    sigma: float
    lam: float = Field(alias="lambda")
    psi: float = 2.0
    mu: float | None = None
    M: float = 1.0
    Mf: float = 1.0
    N: float = 1.0

    def build(self) -> ModelParams:
        return ModelParams(beta=self.beta, sigma=self.sigma, lam=self.lam,
                           psi=self.psi, mu=self.mu, M=self.M, Mf=self.Mf, N=self.N)


class ShockModel(StrictModel):
    eps1: float
    eps2: float = 0.0
    p: float = 0.85
    q: float = 0.98

    def build(self) -> MarkovShock:
        return MarkovShock(eps1=self.eps1, eps2=self.eps2, p=self.p, q=self.q)


class ContinuousShockModel(StrictModel):
    rho_c: float
    sigma_v: float

    def build(self) -> ContinuousShock:
        return ContinuousShock(rho_c=self.rho_c, sigma_v=self.sigma_v)


class AxisModel(StrictModel):
    name: str
    min: float
    max: float
    steps: int

    def build(self) -> GridAxis:
        return GridAxis(name=self.name, lo=self.min, hi=self.max, steps=self.steps)


class GainModel(StrictModel):
    kind: Literal["decreasing", "constant"] = "decreasing"
    value: float = 1e-5

    def build(self) -> GainSpec:
        return GainSpec(kind=self.kind, value=self.value)


class AttentionModel(StrictModel):
    xi_c: float = 0.01
    xi_f: float = 0.01
    m_d1: float = 0.7
    m_d2: float = 0.7
    m_df1: float = 0.7
    m_df2: float = 0.7
    phi_labor: float = 1.0
    theta: float | None = None

    def build(self) -> AttentionParams:
        return AttentionParams(xi_c=self.xi_c, xi_f=self.xi_f, m_d1=self.m_d1,
                               m_d2=self.m_d2, m_df1=self.m_df1, m_df2=self.m_df2,
                               phi_labor=self.phi_labor, theta=self.theta)


CONCEPTS = Literal["REE", "RPE", "BRE", "BRRPE"]


class BaseRequest(StrictModel):
    command: str | None = None
    output_path: str | None = None


class SolveRequest(BaseRequest):
    params: ParamsModel
    shock: ShockModel
    concepts: list[CONCEPTS] = ["REE", "RPE", "BRE", "BRRPE"]


class RegionScanRequest(BaseRequest):
    params: ParamsModel
    shock: ShockModel
    grid: list[AxisModel]
    concepts: list[CONCEPTS] = ["REE", "RPE"]
    workers: int = 1


class DurationScanRequest(BaseRequest):
    params: ParamsModel
    shock: ShockModel
    eps1_grid: AxisModel
    concepts: list[CONCEPTS] = ["REE", "RPE"]
    workers: int = 1


class SimulateRequest(BaseRequest):
    params: ParamsModel
    shock: ShockModel
    kind: Literal["rpe-mean", "msv"] = "rpe-mean"
    gain: GainModel = GainModel()
    T: int = 200_000
    seed: int = 0
    info_lag: Literal[0, 1] = 1
    divergence_bound: float | None = None

    def belief_kind(self) -> BeliefKind:
        return BeliefKind(self.kind)


class ContinuousRpeRequest(BaseRequest):
    params: ParamsModel
    cshock: ContinuousShockModel
    axis: AxisModel | None = None      # over sigma_v, rho_c, lambda or psi


class ForwardGuidanceRequest(BaseRequest):
    params: ParamsModel
    i_bar: float = -0.01
    T_max: int = 200
    kinds: list[Literal["bre", "euler-learning", "ih-credible", "ih-not-credible"]] = \
        ["bre", "euler-learning", "ih-credible", "ih-not-credible"]


class AttentionScanRequest(BaseRequest):
    params: ParamsModel
    shock: ShockModel
    attention: AttentionModel = AttentionModel()
    regimes: list[Literal["PP", "ZP", "PZ", "ZZ"]] = ["ZP", "PP"]
    eps1_grid: AxisModel = AxisModel(name="eps1", min=-0.05, max=0.0, steps=51)


class IhCheckRequest(BaseRequest):
    n_draws: int = 50
    seed: int = 0


class ScanResponse(BaseModel):
    header: list[str]
    rows: list[list[float | str | None]]
    meta: dict = {}


class SolveResponse(BaseModel):
    report: dict


class HealthResponse(BaseModel):
    status: str
    version: str
