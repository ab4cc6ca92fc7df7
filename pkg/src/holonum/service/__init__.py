"""FastAPI service wrapping the experiment runner.

The CLI talks to this app in-process; it can also be served standalone
(e.g. `uvicorn holonum.service:app`).  Error mapping: invalid configuration
is HTTP 400, tolerance/convergence failures are HTTP 409.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (ConvergenceError, DomainError, InconclusiveError,
                      ToleranceNotMet)
from ..experiments import EXPERIMENTS, run_experiment
from .models import ExperimentList, RunRequest, RunResponse


def create_app() -> FastAPI:
    app = FastAPI(title="holonum", version=__version__)

    @app.exception_handler(DomainError)
    async def _domain_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ToleranceNotMet)
    async def _tolerance_error(request, exc):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(ConvergenceError)
    async def _convergence_error(request, exc):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(InconclusiveError)
    async def _inconclusive_error(request, exc):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.get("/experiments", response_model=ExperimentList)
    async def experiments():
        return ExperimentList(experiments=sorted(EXPERIMENTS), version=__version__)

    @app.post("/run/{name}", response_model=RunResponse)
    async def run(name: str, request: RunRequest):
        return RunResponse(**run_experiment(name, request.params))

    return app


app = create_app()
