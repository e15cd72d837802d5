import logging

from fastapi import FastAPI

from .config import settings

# Import routers
from .routers import bound as bound_router
from .routers import filtration as filtration_router
from .routers import scenarios as scenarios_router
from .routers import zeros as zeros_router

logging.basicConfig(level=settings.LOG_LEVEL)

# Create FastAPI app instance
app = FastAPI(
    title="Truncated Second Main Theorem Toolkit API",
    description="Exact filtration algebra, truncation levels and Nevanlinna checks for holomorphic curves.",
    version="0.1.0",
)

# Include routers
app.include_router(bound_router.router, prefix="/api/bound", tags=["Truncation Bounds"])
app.include_router(filtration_router.router, prefix="/api/filtration", tags=["Filtration"])
app.include_router(zeros_router.router, prefix="/api/zeros", tags=["Zeros"])
app.include_router(scenarios_router.router, prefix="/api/scenarios", tags=["Scenarios"])


# Root endpoint
@app.get("/", tags=["Root"])
async def read_root():
    """
    Root endpoint providing a welcome message.
    """
    return {"message": "Welcome to the Truncated Second Main Theorem Toolkit API"}
