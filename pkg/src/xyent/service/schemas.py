"""Request/response models for the HTTP service.

These models are deliberately structural: they pin field names, types and
JSON aliases, while value-level validation (gamma range, positive block
sizes, ...) stays in the core package so the CLI and the service cannot
drift apart.  ``lambda`` is a Python keyword, hence the alias on ``lam``.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

DEFAULT_N_LIST = [32, 64, 128, 256, 512]
ORACLE_N_LIST = [1, 2, 3, 4, 5]


class ParamsModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    beta_L: float
    beta_R: float
    gamma: float
    lam: float = Field(alias="lambda")


class QuadratureModel(BaseModel):
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    max_fourier_index: int = 4096


class SymbolRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    points: int = 256


class CoeffsRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    x_max: int = 16


class MatrixRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    n: int = 8


class LadderRequest(BaseModel):
    """Shared shape for the commands that walk a list of block sizes."""

    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    n_list: list[int] = Field(default_factory=lambda: list(DEFAULT_N_LIST))


class LimitRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()


class CompareEqRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    deltas: list[float] | None = None


class OracleRequest(BaseModel):
    params: ParamsModel
    quadrature: QuadratureModel = QuadratureModel()
    n_list: list[int] = Field(default_factory=lambda: list(ORACLE_N_LIST))
    seed: int = 0


class FigureHRequest(BaseModel):
    points: int = 401


class ReportResponse(BaseModel):
    """Envelope shared by every endpoint: versioned, self-describing."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(1, alias="schema")
    command: str
    config: dict
    results: dict
