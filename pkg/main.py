from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware
import logging
import time
import datetime
from contextlib import asynccontextmanager
from dotenv import load_dotenv

from src.config import get_settings
from src.exceptions import BaseAppException
from src.middleware.error_handler import (
    app_exception_handler,
    error_handler_middleware,
    setup_request_id_middleware,
)

# Load environment variables
load_dotenv()

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    settings = get_settings()
    logger.info(f"Starting rigidkit (seed={settings.seed}, resample budget={settings.resample_budget})")
    if not settings.api_key:
        logger.warning("RIGIDKIT_API_KEY is not set; every API request will be rejected")
    app.state.start_time = time.time()
    yield
    logger.info("Shutting down rigidkit...")


# Initialize the FastAPI app
app = FastAPI(
    title="rigidkit: body-and-hinge rigidity service",
    description="Exact degree-of-freedom analysis and generic panel-and-hinge realizations of multigraphs",
    lifespan=lifespan
)


@app.get("/health", tags=["Health"])
async def health_check():
    return JSONResponse(
        content={
            "status": "Service is running",
            "uptime": str(datetime.timedelta(seconds=int(time.time() - app.state.start_time))),
        },
        status_code=200
    )


# Configure CORS with environment-based origins
app.add_middleware(
    CORSMiddleware,
    allow_origins=[
        "http://localhost:3000",  # Local development
        get_settings().frontend_url,  # Production frontend
    ],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)
app.middleware("http")(error_handler_middleware)
setup_request_id_middleware(app)
app.add_exception_handler(BaseAppException, app_exception_handler)

# Import routers
from src.routes import rigidity_routes

# Include routers
app.include_router(rigidity_routes.router, prefix="/api/v1", tags=["Rigidity"])
