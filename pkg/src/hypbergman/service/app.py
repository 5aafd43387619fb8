"""FastAPI service wrapping the sweep/verify harness.

Every endpoint is a stateless wrapper over the harness functions; results
travel as CSV text in the response body so clients own their files.  Config
and precondition problems map to 422, resource caps to 507.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import ConfigurationError, PreconditionError, ResourceLimitError
from ..halfplane import HalfPlanePoint
from ..harness import (
    SweepConfig,
    build_model,
    run_count_study,
    run_diag_study,
    run_sweep,
    verify_csv,
)
from .schemas import (
    CountResponse,
    DiagResponse,
    HealthResponse,
    ModelInfo,
    PlanRequest,
    RegimeSummary,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)

_MODEL_CACHE: dict = {}


def _model(name: str):
    # gamma2 construction re-estimates its injectivity radius; build once
    if name not in _MODEL_CACHE:
        _MODEL_CACHE[name] = build_model(name)
    return _MODEL_CACHE[name]


def _config_from_request(req: PlanRequest) -> SweepConfig:
    base_points = None
    if req.base_points is not None:
        base_points = [HalfPlanePoint(x, y) for x, y in req.base_points]
    return SweepConfig(
        model=req.model,
        k_values=list(req.k),
        base_points=base_points,
        deltas=list(req.deltas),
        count=req.count,
        radius=req.radius,
        tail_tolerance=req.tail_tolerance,
        seed=req.seed,
        cap=req.cap,
        cache=req.cache,
        cache_dir=req.cache_dir,
        v_cap=req.v_cap,
        n_samples=req.n_samples,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="hypbergman",
        version=__version__,
        description="Bergman-kernel bound verification on hyperbolic surfaces",
    )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.get("/models", response_model=list[ModelInfo])
    def models():
        out = []
        for name in ("trivial", "parabolic", "modular", "bolza", "gamma2"):
            m = _model(name)
            out.append(
                ModelInfo(
                    label=m.label,
                    kind=m.kind,
                    injectivity_radius=m.injectivity_radius,
                    cusp_width=m.cusp_width,
                )
            )
        return out

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: PlanRequest):
        config = _config_from_request(req)
        try:
            result = run_sweep(config, model=_model(config.model))
        except (ConfigurationError, PreconditionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        regimes: dict = {}
        errors = 0
        resource = 0
        for row in result.rows:
            if row.error:
                errors += 1
                if "cap" in row.error:
                    resource += 1
                continue
            summary = regimes.get(row.regime)
            if summary is None:
                regimes[row.regime] = RegimeSummary(rows=1, min_margin=row.margin)
            else:
                regimes[row.regime] = RegimeSummary(
                    rows=summary.rows + 1,
                    min_margin=min(summary.min_margin, row.margin),
                )
        return SweepResponse(
            csv=result.csv,
            row_count=len(result.rows),
            error_rows=errors,
            resource_rows=resource,
            min_margin=result.min_margin,
            regimes=regimes,
        )

    @app.post("/count", response_model=CountResponse)
    def count(req: PlanRequest):
        config = _config_from_request(req)
        try:
            csv_text, min_slack = run_count_study(config, model=_model(config.model))
        except (ConfigurationError, PreconditionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except ResourceLimitError as exc:
            raise HTTPException(status_code=507, detail=str(exc))
        return CountResponse(csv=csv_text, min_slack=min_slack)

    @app.post("/diag", response_model=DiagResponse)
    def diag(req: PlanRequest):
        config = _config_from_request(req)
        try:
            csv_text = run_diag_study(config, model=_model(config.model))
        except (ConfigurationError, PreconditionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except ResourceLimitError as exc:
            raise HTTPException(status_code=507, detail=str(exc))
        return DiagResponse(csv=csv_text)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        try:
            report = verify_csv(req.sweep_csv, req.count_csv, req.diag_csv)
        except ConfigurationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        min_margins = {
            regime: margin
            for regime, (count_, margin) in report.regimes.items()
            if math.isfinite(margin)
        }
        return VerifyResponse(
            passed=report.passed,
            exit_code=report.exit_code,
            report=report.lines(),
            min_margins=min_margins,
            counting_min_slack=report.counting_min_slack,
        )

    return app


app = create_app()
