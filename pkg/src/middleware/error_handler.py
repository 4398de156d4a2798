import logging
import time
import traceback
import uuid
from typing import Any, Callable, Dict

from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse

from src.exceptions import BaseAppException

logger = logging.getLogger(__name__)


def _request_id(request: Request) -> Dict[str, Any]:
    return {"request_id": request.state.request_id} if hasattr(request.state, "request_id") else {}


def error_body(exc: BaseAppException) -> Dict[str, Any]:
    return {
        "error": exc.__class__.__name__,
        "message": exc.message,
        "details": {**exc.details, "exit_code": exc.exit_code},
    }


async def error_handler_middleware(request: Request, call_next: Callable) -> JSONResponse:
    """
    Turns rigidkit exceptions into JSON bodies with their status code; anything else
    becomes a 500 that only exposes the request id.
    """
    try:
        return await call_next(request)
    except BaseAppException as exc:
        logger.error(
            f"{exc.__class__.__name__} on {request.method} {request.url.path}: {exc.message}",
            extra={"details": exc.details, **_request_id(request)},
        )
        return JSONResponse(status_code=exc.status_code, content=error_body(exc))
    except Exception as exc:
        logger.error(
            f"Uncaught exception on {request.method} {request.url.path}: {exc}",
            exc_info=True,
            extra={"traceback": "".join(traceback.format_exception(type(exc), exc, exc.__traceback__))},
        )
        return JSONResponse(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            content={
                "error": "InternalServerError",
                "message": "An unexpected error occurred",
                "details": _request_id(request),
            },
        )


def setup_request_id_middleware(app: FastAPI) -> None:
    """Tag every request with an id and log how long the exact computation took."""

    @app.middleware("http")
    async def add_request_id(request: Request, call_next: Callable) -> JSONResponse:
        request_id = str(uuid.uuid4())
        request.state.request_id = request_id
        started = time.perf_counter()
        response = await call_next(request)
        response.headers["X-Request-ID"] = request_id
        logger.info(f"{request.method} {request.url.path} -> {response.status_code} "
                    f"in {time.perf_counter() - started:.3f}s [{request_id}]")
        return response


async def app_exception_handler(request: Request, exc: BaseAppException) -> JSONResponse:
    logger.error(f"{exc.__class__.__name__} on {request.method} {request.url.path}: {exc.message}")
    return JSONResponse(status_code=exc.status_code, content=error_body(exc))
