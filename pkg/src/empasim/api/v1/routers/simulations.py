"""FastAPI router for simulation runs."""

import logging

from fastapi import APIRouter, HTTPException, Request

from empasim.api.v1.models import RunRequest, RunResponse
from empasim.core import ClockBudgetExceededError, ServiceSettings, SimulationFault

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/simulations",
    tags=["simulations"],
)


@router.post("/run", response_model=RunResponse)
def run_simulation(request: RunRequest, app_request: Request) -> RunResponse:
    """
    Run a program, or a shipped sum-up program, to completion.

    Args:
        request: The program or sample selection and machine options
        app_request: FastAPI request object to access application state

    Returns:
        RunResponse: Totals, the root registers and optionally the trace

    Raises:
        HTTPException: 400 on invalid programs or over-long vectors, 422 on
            simulation faults
    """
    if request.mode is not None:
        limit = ServiceSettings().max_sweep_length
        length = len(request.values) if request.values is not None else request.veclen
        if length > limit:
            raise HTTPException(status_code=400, detail=f"vector lengths are limited to {limit}")
    try:
        simulator = app_request.app.state.simulator
        if request.mode is not None:
            report = simulator.run_sample(
                request.mode,
                values=request.values,
                veclen=request.veclen,
                pool_size=request.pool_size,
                record_trace=request.include_trace,
            )
        else:
            image = simulator.load_program(request.source)
            report = simulator.run(image, pool_size=request.pool_size, record_trace=request.include_trace)

        return RunResponse(
            total_clocks=report.total_clocks,
            peak_cores=report.peak_cores,
            result=report.result,
            registers=report.registers,
            condition_codes=report.condition_codes,
            trace=[event.to_line() for event in report.trace],
        )
    except ValueError as e:
        logger.error(f"Run request rejected: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except (SimulationFault, ClockBudgetExceededError) as e:
        logger.error(f"Run failed: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected run failure: {e}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
