"""FastAPI application for the empasim simulator service."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from empasim import __version__
from empasim.api.v1.api import api_router
from empasim.core import ServiceSettings, Simulator

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Manage the application lifespan.

    Creates the Simulator at startup; it holds no resources to release.

    Args:
        app: The FastAPI application instance

    Yields:
        None: Control back to FastAPI during application runtime
    """
    logger.info(f"Starting {app.title}")
    app.state.simulator = Simulator()

    yield

    logger.info(f"Shutting down {app.title}")


settings = ServiceSettings()
uri_prefix = settings.base_router_path

app = FastAPI(
    title="empasim API",
    description="Cycle-level simulator of an explicitly many-processor machine",
    openapi_url=f"{uri_prefix}/openapi.json",
    docs_url=f"{uri_prefix}/docs",
    redoc_url=None,
    version=__version__,
    lifespan=lifespan,
)

app.include_router(api_router, prefix=uri_prefix)


@app.get("/")
def read_root():
    """
    Root endpoint providing basic API information.

    Returns:
        dict: Basic API information and status
    """
    return {
        "message": "empasim API",
        "version": __version__,
        "status": "running",
    }


@app.get("/health")
def health_check():
    """
    Health check endpoint for monitoring and load balancers.

    Returns:
        dict: Health status information
    """
    return {"status": "healthy"}


app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)
