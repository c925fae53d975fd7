"""FastAPI application entry point."""

from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from degenwave import __version__
from degenwave.core.config import settings
from degenwave.core.logging import logger, setup_logging
from degenwave.routers import experiments, health


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan: startup and shutdown."""
    setup_logging()
    logger.info(f"Starting degenwave API {__version__} (jobs={settings.DEGENWAVE_JOBS})")
    yield
    logger.info("Application shutdown complete")


app = FastAPI(
    title="Degenerate Wave Control API",
    version=__version__,
    lifespan=lifespan,
)

# CORS
origins = settings.ALLOWED_ORIGINS.split(",") if settings.ALLOWED_ORIGINS != "*" else ["*"]
app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Routers
app.include_router(health.router)
app.include_router(experiments.router)
