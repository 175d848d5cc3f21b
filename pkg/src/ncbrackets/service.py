"""HTTP service exposing the check suites over presentation files."""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI
from pydantic import BaseModel, Field

from .runner import COMMANDS, RunResult, run_command


class RunRequest(BaseModel):
    presentation: str = Field(description="presentation file text")
    seed: int | None = None
    samples: int | None = None
    n: int | None = Field(default=None, ge=1, description="matrix size for rep")
    convention: Literal["paper", "vdb"] | None = None


class ReportEntryModel(BaseModel):
    check_id: str
    tag: str
    status: str
    witness: str
    residual: str


class ReportModel(BaseModel):
    suite: str
    entries: list[ReportEntryModel]
    summary: dict[str, int]


class RunResponse(BaseModel):
    exit_code: int
    error: str | None = None
    report: ReportModel | None = None
    presentation: str | None = None
    induced: dict | None = None


def _to_response(result: RunResult) -> RunResponse:
    report = None
    if result.report is not None:
        obj = result.report.to_json_obj()
        report = ReportModel(
            suite=obj["suite"],
            entries=[ReportEntryModel(**e) for e in obj["entries"]],
            summary=obj["summary"],
        )
    return RunResponse(
        exit_code=result.exit_code,
        error=result.error,
        report=report,
        presentation=result.presentation_out,
        induced=result.induced,
    )


def handle(command: str, request: RunRequest) -> RunResponse:
    result = run_command(
        command,
        request.presentation,
        seed=request.seed,
        samples=request.samples,
        n=request.n,
        convention=request.convention,
    )
    return _to_response(result)


def create_app() -> FastAPI:
    app = FastAPI(title="ncbrackets", description="bracket-structure verification service")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    def _make_endpoint(cmd: str):
        def endpoint(request: RunRequest) -> RunResponse:
            return handle(cmd, request)

        endpoint.__name__ = f"run_{cmd}"
        return endpoint

    for cmd in COMMANDS:
        app.post(f"/v1/{cmd}", response_model=RunResponse)(_make_endpoint(cmd))
    return app


app = create_app()
