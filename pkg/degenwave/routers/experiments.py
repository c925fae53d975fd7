"""Scenario runner endpoints. Each returns the report the CLI writes; nothing is written to disk."""

from collections.abc import Callable
from typing import TypeVar

from fastapi import APIRouter, HTTPException, Query
from starlette.concurrency import run_in_threadpool

from degenwave.core.config import build_scenario
from degenwave.core.errors import ConfigError, DegenwaveError, ResolutionError, UnsupportedRegimeError
from degenwave.core.logging import logger
from degenwave.models.schemas import (
    ControlResponse,
    CounterexampleReport,
    EigenReport,
    ObserveResponse,
    Scenario,
    SolveReport,
)
from degenwave.services import scenarios

router = APIRouter(prefix="/api/v1", tags=["experiments"])

R = TypeVar("R")


async def _run(func: Callable[..., R], scenario: Scenario, *args) -> R:
    try:
        # re-validated so DEGENWAVE_SEED applies to API runs as well
        resolved = build_scenario(scenario.model_dump())
        return await run_in_threadpool(func, resolved, *args)
    except (UnsupportedRegimeError, ConfigError, ResolutionError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except DegenwaveError as e:
        logger.error(f"{func.__name__} failed: {e}")
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/eigen", response_model=EigenReport)
async def eigen(scenario: Scenario):
    """Eigenvalue table for the scenario's alpha and L."""
    return await _run(scenarios.run_eigen, scenario)


@router.post("/solve", response_model=SolveReport)
async def solve(scenario: Scenario, engine: str = Query("modal", pattern="^(modal|fd)$")):
    return (await _run(scenarios.run_solve, scenario, engine)).report


@router.post("/observe", response_model=ObserveResponse)
async def observe(scenario: Scenario):
    report, sweep = await _run(scenarios.run_observe, scenario)
    return ObserveResponse(report=report, sweep=sweep)


@router.post("/control", response_model=ControlResponse)
async def control(scenario: Scenario):
    """Null control samples with the FD decay report."""
    signal, report = await _run(scenarios.run_control, scenario)
    return ControlResponse(report=report, times=signal.times.tolist(), theta=signal.theta.tolist())


@router.post("/counterexample", response_model=CounterexampleReport)
async def counterexample(scenario: Scenario):
    return await _run(scenarios.run_counterexample, scenario)
