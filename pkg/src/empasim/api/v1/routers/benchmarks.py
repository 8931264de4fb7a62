"""FastAPI router for benchmark tables and sweeps."""

import logging

from fastapi import APIRouter, HTTPException, Request

from empasim.api.v1.models import BenchmarkTableResponse, SweepRequest, SweepResponse
from empasim.core import ServiceSettings, SimulationFault

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/benchmarks",
    tags=["benchmarks"],
)


@router.get("/table", response_model=BenchmarkTableResponse)
def get_table(app_request: Request) -> BenchmarkTableResponse:
    """
    Reproduce the efficiency table and compare it with the reference values.

    Returns:
        BenchmarkTableResponse: The twelve rows and any differences
    """
    try:
        simulator = app_request.app.state.simulator
        rows = simulator.bench()
        return BenchmarkTableResponse(rows=rows, deltas=simulator.check_against_golden(rows))
    except SimulationFault as e:
        logger.error(f"Benchmark failed: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected benchmark failure: {e}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/sweep", response_model=SweepResponse)
def run_sweep(request: SweepRequest, app_request: Request) -> SweepResponse:
    """
    Benchmark rows for every requested length and mode.

    Args:
        request: Lengths and modes to sweep
        app_request: FastAPI request object to access application state

    Returns:
        SweepResponse: Rows ordered by length, then mode

    Raises:
        HTTPException: 400 if a length exceeds the service limit
    """
    limit = ServiceSettings().max_sweep_length
    if max(request.lengths) > limit:
        raise HTTPException(status_code=400, detail=f"vector lengths are limited to {limit}")
    try:
        simulator = app_request.app.state.simulator
        return SweepResponse(rows=simulator.sweep(request.lengths, request.modes))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except SimulationFault as e:
        logger.error(f"Sweep failed: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected sweep failure: {e}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
