"""Health check endpoint."""

from fastapi import APIRouter

from degenwave import __version__
from degenwave.models.schemas import HealthResponse

router = APIRouter()


@router.get("/health", response_model=HealthResponse)
async def health_check():
    return HealthResponse(status="healthy", version=__version__)
