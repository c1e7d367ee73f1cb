from fastapi import FastAPI
from contextlib import asynccontextmanager
import logging
import uvicorn

from app.core.config import settings
from app.core.logging import setup_logging
from app.api import metrics, packer

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    setup_logging()
    logger.info("%s %s started", settings.APP_NAME, settings.APP_VERSION)
    yield
    # Shutdown
    logger.info("Application shutdown")

# Create FastAPI app
app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description="Reversible packing of special color layers into printable RGB images",
    lifespan=lifespan
)

# Include routers
app.include_router(packer.router, prefix="/api/packer", tags=["Packer"])
app.include_router(metrics.router, prefix="/api/metrics", tags=["Metrics"])

@app.get("/")
async def root():
    """Root endpoint with API information."""
    return {
        "message": "Special Color Layer Packer API",
        "version": settings.APP_VERSION,
        "status": "running",
        "docs": "/docs",
        "redoc": "/redoc"
    }

@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}

@app.get("/api/info")
async def api_info():
    """API information endpoint."""
    return {
        "name": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "description": "Hides a bilevel and a 3-bit special color layer in the R and B "
                       "components of a general color layer, losslessly",
        "features": [
            "Reversible histogram-shifting embedding",
            "Context-modeled arithmetic coding of bilevel layers",
            "Capacity planning",
            "PSNR and MSSIM quality metrics",
        ],
        "settings": {
            "max_rounds": settings.MAX_ROUNDS,
            "marked_format": settings.MARKED_FORMAT,
            "ssim_window_size": settings.SSIM_WINDOW_SIZE,
            "ssim_weighting": settings.SSIM_WEIGHTING,
        }
    }

if __name__ == "__main__":
    uvicorn.run(
        "main:app",
        host="0.0.0.0",
        port=8000,
        reload=settings.DEBUG,
        log_level="info"
    )
