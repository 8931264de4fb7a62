"""Main API router for empasim v1 endpoints."""

from fastapi import APIRouter

from empasim.api.v1.routers import benchmarks, programs, simulations

# Create the main API router
api_router = APIRouter()

api_router.include_router(
    programs.router,
)

api_router.include_router(
    simulations.router,
)

api_router.include_router(
    benchmarks.router,
)
