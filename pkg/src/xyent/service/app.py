"""HTTP front end over the core computations.

One process holds one :class:`CoefficientCache` (``app.state.cache``), so a
sequence of requests at the same parameters -- growing block sizes, repeated
ladders, the oracle suite after a converge run -- never recomputes a Fourier
coefficient.  That shared warm cache is the reason the CLI talks to this app
(in-process by default) instead of calling the core directly.

Every response carries the same envelope: ``schema`` version, the command
name, the fully resolved configuration, and a ``results`` object whose
``columns``/``rows`` pair is directly dumpable as CSV.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..entropy import (
    binary_entropy,
    block_entropy,
    convergence_report,
    entropy_density_limit,
    equilibrium_entropy_density,
)
from ..errors import ConfigError, ConvergenceError, InvariantViolation
from ..fock import run_oracle_suite
from ..model import TWO_PI, ChainParams, dispersion, spectral_bound
from ..quadrature import CoefficientCache, QuadratureSpec
from ..spectrum import skew_eigenvalues
from ..symbol import symbol_values
from ..toeplitz import assemble
from .schemas import (
    CoeffsRequest,
    CompareEqRequest,
    FigureHRequest,
    LadderRequest,
    LimitRequest,
    MatrixRequest,
    OracleRequest,
    ParamsModel,
    QuadratureModel,
    ReportResponse,
    SymbolRequest,
)

MAX_GRID_POINTS = 100_000


def _chain_params(model: ParamsModel) -> ChainParams:
    return ChainParams(
        beta_L=model.beta_L, beta_R=model.beta_R, gamma=model.gamma, lam=model.lam
    )


def _quadrature(model: QuadratureModel) -> QuadratureSpec:
    return QuadratureSpec(
        abs_tol=model.abs_tol,
        rel_tol=model.rel_tol,
        max_subdivisions=model.max_subdivisions,
        max_fourier_index=model.max_fourier_index,
    )


def _resolved(params: ChainParams | None, spec: QuadratureSpec | None, **extra) -> dict:
    config: dict = {}
    if params is not None:
        config["params"] = {
            "beta_L": params.beta_L,
            "beta_R": params.beta_R,
            "gamma": params.gamma,
            "lambda": params.lam,
            "beta": params.beta,
            "delta": params.delta,
            "theorem_domain": params.theorem_domain,
        }
    if spec is not None:
        config["quadrature"] = {
            "abs_tol": spec.abs_tol,
            "rel_tol": spec.rel_tol,
            "max_subdivisions": spec.max_subdivisions,
            "max_fourier_index": spec.max_fourier_index,
        }
    config.update(extra)
    return config


def _n_list(values) -> tuple[int, ...]:
    ns = sorted({int(v) for v in values})
    if not ns:
        raise ConfigError("n_list must not be empty")
    if ns[0] < 1:
        raise ConfigError(f"block sizes must be positive, got {ns[0]}")
    return tuple(ns)


def _grid_points(points: int, minimum: int = 2) -> int:
    points = int(points)
    if not minimum <= points <= MAX_GRID_POINTS:
        raise ConfigError(
            f"points must lie in [{minimum}, {MAX_GRID_POINTS}], got {points}"
        )
    return points


def _error_payload(exc: Exception, exit_code: int) -> dict:
    return {
        "error": {
            "exit_code": exit_code,
            "kind": type(exc).__name__,
            "message": str(exc),
        }
    }


def create_app() -> FastAPI:
    app = FastAPI(title="xyent", version=__version__)
    app.state.cache = CoefficientCache()

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError) -> JSONResponse:
        return JSONResponse(status_code=400, content=_error_payload(exc, 2))

    @app.exception_handler(ConvergenceError)
    async def _convergence_error(request: Request, exc: ConvergenceError) -> JSONResponse:
        return JSONResponse(status_code=500, content=_error_payload(exc, 3))

    @app.exception_handler(InvariantViolation)
    async def _invariant_error(request: Request, exc: InvariantViolation) -> JSONResponse:
        return JSONResponse(status_code=500, content=_error_payload(exc, 4))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        payload = _error_payload(ValueError(detail), 2)
        payload["error"]["kind"] = "RequestValidationError"
        return JSONResponse(status_code=422, content=payload)

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok", "version": __version__, "cache_size": len(app.state.cache)}

    @app.post("/symbol", response_model=ReportResponse)
    async def symbol(req: SymbolRequest) -> ReportResponse:
        params = _chain_params(req.params)
        points = _grid_points(req.points)
        xi = np.linspace(0.0, TWO_PI, points, endpoint=False)
        values = symbol_values(params, xi)
        mu = dispersion(params, xi)
        g = values[:, 0, 0].imag
        c = -1j * values[:, 0, 1]
        norm = np.abs(g) + np.abs(c)
        rows = [
            [float(a), float(b), float(d), float(e), float(f), float(h)]
            for a, b, d, e, f, h in zip(xi, mu, g, c.real, c.imag, norm)
        ]
        return ReportResponse(
            command="symbol",
            config=_resolved(params, None, points=points),
            results={
                "columns": ["xi", "mu", "g", "c_re", "c_im", "norm"],
                "rows": rows,
                "spectral_bound": spectral_bound(params),
            },
        )

    @app.post("/coeffs", response_model=ReportResponse)
    async def coeffs(req: CoeffsRequest, request: Request) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        x_max = int(req.x_max)
        if x_max < 0:
            raise ConfigError(f"x_max must be >= 0, got {x_max}")
        cache: CoefficientCache = request.app.state.cache
        rows = []
        for x in range(-x_max, x_max + 1):
            matrix, err = cache.coefficient(params, x, spec)
            rows.append(
                [
                    x,
                    float(matrix[0, 0].real),
                    float(matrix[0, 1].real),
                    float(matrix[1, 0].real),
                    float(matrix[1, 1].real),
                    float(err),
                    float(np.abs(matrix.imag).max()),
                ]
            )
        return ReportResponse(
            command="coeffs",
            config=_resolved(params, spec, x_max=x_max),
            results={
                "columns": ["x", "b11", "b12", "b21", "b22", "quad_error", "imag_residual"],
                "rows": rows,
            },
        )

    @app.post("/matrix", response_model=ReportResponse)
    async def matrix(req: MatrixRequest, request: Request) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        block = assemble(params, int(req.n), spec=spec, cache=request.app.state.cache)
        entries = block.entries.tolist()
        return ReportResponse(
            command="matrix",
            config=_resolved(params, spec, n=block.n),
            results={
                "columns": [f"c{j + 1}" for j in range(2 * block.n)],
                "rows": entries,
                "n": block.n,
                "imag_residual": block.imag_residual,
                "skew_residual": block.skew_residual,
            },
        )

    @app.post("/spectrum", response_model=ReportResponse)
    async def spectrum(req: LadderRequest, request: Request) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        ns = _n_list(req.n_list)
        cache = request.app.state.cache
        rows = []
        residuals = {}
        for n in ns:
            block = assemble(params, n, spec=spec, cache=cache)
            spect = skew_eigenvalues(block)
            residuals[str(n)] = spect.pairing_residual
            for i, lam in enumerate(spect.lambdas, start=1):
                rows.append([n, i, float(lam)])
        return ReportResponse(
            command="spectrum",
            config=_resolved(params, spec, n_list=list(ns)),
            results={
                "columns": ["n", "i", "lambda_i"],
                "rows": rows,
                "pairing_residuals": residuals,
                "spectral_bound": spectral_bound(params),
            },
        )

    @app.post("/entropy", response_model=ReportResponse)
    async def entropy(req: LadderRequest, request: Request) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        ns = _n_list(req.n_list)
        report = convergence_report(params, ns, spec=spec, cache=request.app.state.cache)
        rows = [
            [n, float(s), float(d), float(e)]
            for n, s, d, e in zip(report.ns, report.entropies, report.densities, report.deviations)
        ]
        return ReportResponse(
            command="entropy",
            config=_resolved(params, spec, n_list=list(ns)),
            results={
                "columns": ["n", "entropy", "density", "deviation"],
                "rows": rows,
                "limit": report.limit,
            },
        )

    @app.post("/limit", response_model=ReportResponse)
    async def limit(req: LimitRequest) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        value = entropy_density_limit(params, spec=spec)
        eq_left = equilibrium_entropy_density(params.beta_L, params.gamma, params.lam, spec=spec)
        eq_right = equilibrium_entropy_density(params.beta_R, params.gamma, params.lam, spec=spec)
        eq_mean = equilibrium_entropy_density(params.beta, params.gamma, params.lam, spec=spec)
        bound = spectral_bound(params)
        h_bound = float(binary_entropy(bound))
        results = {
            "columns": [
                "C", "C_eq_mean", "C_eq_left", "C_eq_right",
                "split_residual", "rho_bound", "h_rho", "log2",
            ],
            "rows": [[
                value, eq_mean, eq_left, eq_right,
                abs(value - 0.5 * (eq_left + eq_right)),
                bound, h_bound, float(np.log(2.0)),
            ]],
        }
        return ReportResponse(
            command="limit", config=_resolved(params, spec), results=results
        )

    @app.post("/converge", response_model=ReportResponse)
    async def converge(req: LadderRequest, request: Request) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        ns = _n_list(req.n_list)
        report = convergence_report(params, ns, spec=spec, cache=request.app.state.cache)
        rows = [
            [n, float(s), float(d), float(e)]
            for n, s, d, e in zip(report.ns, report.entropies, report.densities, report.deviations)
        ]
        return ReportResponse(
            command="converge",
            config=_resolved(params, spec, n_list=list(ns)),
            results={
                "columns": ["n", "entropy", "density", "deviation"],
                "rows": rows,
                "limit": report.limit,
                "limit_eq_mean": report.limit_eq_mean,
                "limit_eq_left": report.limit_eq_left,
                "limit_eq_right": report.limit_eq_right,
                "split_residual": report.split_residual,
                "rho_bound": report.rho_bound,
                "h_rho": report.h_rho,
                "fit_log_coeff": report.fit_log_coeff,
                "fit_const_coeff": report.fit_const_coeff,
                "fit_residual": report.fit_residual,
            },
        )

    @app.post("/compare-eq", response_model=ReportResponse)
    async def compare_eq(req: CompareEqRequest) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        base_delta = abs(params.delta)
        if req.deltas is None:
            deltas = sorted({round(base_delta * k / 4.0, 15) for k in range(5)})
        else:
            deltas = sorted({float(d) for d in req.deltas})
            if deltas and deltas[0] < 0.0:
                raise ConfigError(f"deltas must be >= 0, got {deltas[0]}")
        if not deltas:
            raise ConfigError("deltas must not be empty")
        if deltas[-1] > params.beta:
            raise ConfigError(
                f"delta may not exceed the mean inverse temperature {params.beta}"
            )
        eq = equilibrium_entropy_density(params.beta, params.gamma, params.lam, spec=spec)
        rows = []
        for delta in deltas:
            p = ChainParams(
                beta_L=params.beta - delta,
                beta_R=params.beta + delta,
                gamma=params.gamma,
                lam=params.lam,
            )
            value = entropy_density_limit(p, spec=spec)
            rows.append(
                [float(delta), p.beta_L, p.beta_R, value, eq, value - eq]
            )
        return ReportResponse(
            command="compare-eq",
            config=_resolved(params, spec, deltas=[float(d) for d in deltas]),
            results={
                "columns": ["delta", "beta_L", "beta_R", "C", "C_eq", "excess"],
                "rows": rows,
            },
        )

    @app.post("/oracle-check", response_model=ReportResponse)
    async def oracle_check(req: OracleRequest) -> ReportResponse:
        params = _chain_params(req.params)
        spec = _quadrature(req.quadrature)
        ns = _n_list(req.n_list)
        report = run_oracle_suite(params, n_values=ns, spec=spec, seed=int(req.seed))
        rows = [
            [c["name"], c["residual"], c["tolerance"], c["passed"]]
            for c in report["checks"]
        ]
        return ReportResponse(
            command="oracle-check",
            config=_resolved(params, spec, n_list=list(ns), seed=int(req.seed)),
            results={
                "columns": ["check", "residual", "tolerance", "passed"],
                "rows": rows,
                "passed": report["passed"],
            },
        )

    @app.post("/figure-h", response_model=ReportResponse)
    async def figure_h(req: FigureHRequest) -> ReportResponse:
        points = _grid_points(req.points)
        x = np.linspace(-1.0, 1.0, points)
        h = np.atleast_1d(binary_entropy(x))
        rows = [[float(a), float(b)] for a, b in zip(x, h)]
        return ReportResponse(
            command="figure-h",
            config=_resolved(None, None, points=points),
            results={"columns": ["x", "h"], "rows": rows, "max_value": float(h.max())},
        )

    return app
