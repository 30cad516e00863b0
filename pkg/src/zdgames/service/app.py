"""FastAPI application exposing the analysis operations."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    DegenerateControllerError,
    DegeneratePayoffError,
    InfeasibleParametersError,
    InvalidGameError,
    InvalidInputError,
    NonConvergenceError,
    ResourceLimitError,
    SearchBoundExceededError,
    SingularMonitoringError,
    ZdError,
)
from . import models, ops

_STATUS = {
    InvalidGameError: 422,
    InvalidInputError: 422,
    InfeasibleParametersError: 400,
    DegeneratePayoffError: 400,
    DegenerateControllerError: 400,
    SingularMonitoringError: 400,
    ResourceLimitError: 413,
    SearchBoundExceededError: 413,
    NonConvergenceError: 413,
}


def create_app() -> FastAPI:
    app = FastAPI(title="zdgames", version=__version__)

    @app.exception_handler(ZdError)
    async def _zd_error(_, exc: ZdError):
        body = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, InfeasibleParametersError):
            body["violations"] = list(exc.violations)
        return JSONResponse(status_code=_STATUS.get(type(exc), 422), content=body)

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/version", response_model=models.VersionResponse)
    async def version():
        return ops.version()

    @app.post("/analyze", response_model=models.AnalyzeResponse)
    async def analyze(req: models.AnalyzeRequest):
        return ops.analyze(req)

    @app.post("/check", response_model=models.CheckResponse)
    async def check(req: models.CheckRequest):
        return ops.check(req)

    @app.post("/construct", response_model=models.ConstructResponse)
    async def construct(req: models.ConstructRequest):
        return ops.construct(req)

    @app.post("/simulate", response_model=models.SimulateResponse)
    async def simulate(req: models.SimulateRequest):
        return ops.simulate(req)

    @app.post("/search", response_model=models.SearchResponse)
    async def search(req: models.SearchRequest):
        return ops.search(req)

    return app


app = create_app()
