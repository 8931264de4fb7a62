"""FastAPI router for program assembly."""

import logging

from fastapi import APIRouter, HTTPException, Request

from empasim.api.v1.models import AssembleRequest, AssembleResponse
from empasim.core import disassemble, write_object

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/programs",
    tags=["programs"],
)


@router.post("/assemble", response_model=AssembleResponse)
def assemble_program(request: AssembleRequest, app_request: Request) -> AssembleResponse:
    """
    Assemble a program.

    Args:
        request: The assembly source
        app_request: FastAPI request object to access application state

    Returns:
        AssembleResponse: Object text, entry point, symbols and disassembly

    Raises:
        HTTPException: 400 on assembly errors
    """
    try:
        simulator = app_request.app.state.simulator
        image = simulator.assemble(request.source)
        return AssembleResponse(
            object_text=write_object(image),
            entry=image.entry,
            symbols=image.symbols,
            disassembly=disassemble(image),
        )
    except ValueError as e:
        logger.error(f"Assembly request failed: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected assembly failure: {e}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
