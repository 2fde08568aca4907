"""FastAPI service exposing the pipeline.

Each endpoint takes a ComputeRequest (the problem plus per-command options)
and returns the same Report model the CLI renders.  Domain errors map to a
structured error body carrying the machine-readable kind.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import reports
from .errors import MetaplecticError, ObstructionPresent
from .problem import SCHEMA_VERSION, ProblemSpec, build_model

app = FastAPI(title="metaplectic covering-group invariants", version="0.1.0")


class ComputeRequest(BaseModel):
    problem: ProblemSpec
    word: Optional[str] = None


_STATUS = {"parse": 400, "validation": 400, "obstruction": 409}


@app.exception_handler(MetaplecticError)
async def domain_error_handler(_request: Request, err: MetaplecticError):
    return JSONResponse(status_code=_STATUS.get(err.kind, 400),
                        content={"error": err.payload()})


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "schema_version": SCHEMA_VERSION}


def handle_lattices(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    return reports.Report(command="lattices", problem=req.problem,
                          lattices=reports.lattice_section(model))


def handle_dual(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    return reports.Report(command="dual", problem=req.problem,
                          lattices=reports.lattice_section(model),
                          dual=reports.dual_section(model))


def handle_distinguished(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    obstructions = reports.obstruction_section(model)
    if not obstructions.passed:
        raise ObstructionPresent(
            "obstruction to distinguished characters",
            obs1=obstructions.obs1_failures, obs2=obstructions.obs2_failures)
    return reports.Report(command="distinguished", problem=req.problem,
                          lattices=reports.lattice_section(model),
                          obstructions=obstructions,
                          character=reports.character_section(model))


def handle_gk(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    return reports.Report(command="gk", problem=req.problem,
                          gk=reports.gk_section(model, req.word))


def handle_constant_term(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    return reports.Report(command="constant-term", problem=req.problem,
                          constant_term=reports.constant_term_section(model))


def handle_check(req: ComputeRequest) -> reports.Report:
    model = build_model(req.problem)
    return reports.Report(command="check", problem=req.problem,
                          checks=reports.check_section(model))


HANDLERS = {
    "lattices": handle_lattices,
    "dual": handle_dual,
    "distinguished": handle_distinguished,
    "gk": handle_gk,
    "constant-term": handle_constant_term,
    "check": handle_check,
}


@app.post("/v1/lattices", response_model=reports.Report, response_model_exclude_none=True)
def lattices(req: ComputeRequest):
    return handle_lattices(req)


@app.post("/v1/dual", response_model=reports.Report, response_model_exclude_none=True)
def dual(req: ComputeRequest):
    return handle_dual(req)


@app.post("/v1/distinguished", response_model=reports.Report, response_model_exclude_none=True)
def distinguished(req: ComputeRequest):
    return handle_distinguished(req)


@app.post("/v1/gk", response_model=reports.Report, response_model_exclude_none=True)
def gk(req: ComputeRequest):
    return handle_gk(req)


@app.post("/v1/constant-term", response_model=reports.Report, response_model_exclude_none=True)
def constant_term(req: ComputeRequest):
    return handle_constant_term(req)


@app.post("/v1/check", response_model=reports.Report, response_model_exclude_none=True)
def check(req: ComputeRequest):
    return handle_check(req)
