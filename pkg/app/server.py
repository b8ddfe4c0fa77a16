"""
Loopback oracle server: any simulated backend over the remote JSON protocol
"""

import itertools
import logging
import threading
import traceback
from contextlib import asynccontextmanager
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

from fastapi import FastAPI, Request  # noqa: E402
from fastapi.responses import JSONResponse  # noqa: E402
from pydantic import BaseModel, Field  # noqa: E402

from app.errors import LambdaRLMError  # noqa: E402
from app.oracle import Oracle, OracleProfile, load_profile, make_oracle  # noqa: E402
from app.runtime.document import Document  # noqa: E402
from app.utils.config import get_log_level, is_debug, print_runtime_status, validate_config  # noqa: E402

logging.basicConfig(
    level=get_log_level(),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)


class GenerateRequest(BaseModel):
    prompt: str = Field(..., description="Prompt text; tokens are whitespace units")
    max_tokens: int = Field(64, ge=0, description="Output budget, informational")


class GenerateResponse(BaseModel):
    text: str
    output_tokens: int


def create_app(
    backend: str = "symbolic",
    profile: Optional[OracleProfile] = None,
) -> FastAPI:
    """
    Build the server around one simulated oracle.

    Call indices count requests in arrival order, so a stochastic backend
    behind the server sees the same stream as a local one called serially.
    """
    if backend == "remote":
        raise LambdaRLMError("the loopback server serves simulated backends only")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        is_valid, issues = validate_config()
        if not is_valid:
            for issue in issues:
                logger.warning(f"config: {issue}")
        print_runtime_status()
        yield

    app = FastAPI(
        title="λ-RLM loopback oracle",
        version="1.0.0",
        description="Simulated base model behind the remote oracle protocol",
        lifespan=lifespan,
        debug=is_debug(),
    )
    app.state.oracle = make_oracle(backend, profile or load_profile("default"))
    counter = itertools.count()
    lock = threading.Lock()

    @app.exception_handler(LambdaRLMError)
    @app.exception_handler(Exception)
    async def global_exception_handler(request: Request, exc: Exception):
        """Log the failure and return it as {error, type, detail}."""
        error_traceback = traceback.format_exc()
        logger.error(f"Error occurred: {type(exc).__name__}: {exc}")
        logger.debug(f"Traceback:\n{error_traceback}")
        detail = exc.detail if isinstance(exc, LambdaRLMError) else (
            error_traceback if is_debug() else "Internal server error. Set DEBUG=true for the traceback."
        )
        return JSONResponse(
            status_code=500,
            content={"error": str(exc), "type": type(exc).__name__, "detail": detail},
        )

    @app.get("/health")
    async def health():
        """Health check endpoint"""
        oracle: Oracle = app.state.oracle
        return {"status": "healthy", "backend": oracle.name, "profile": oracle.profile.name}

    @app.post("/generate", response_model=GenerateResponse)
    def generate(request: GenerateRequest) -> GenerateResponse:
        oracle: Oracle = app.state.oracle
        with lock:
            index = next(counter)
        prompt = Document.from_text(request.prompt)
        answer, record = oracle.call(prompt, index)
        logger.debug(f"generate #{index}: {record.input_tokens} tokens in")
        return GenerateResponse(text=answer.text, output_tokens=record.output_tokens)

    return app


if __name__ == "__main__":
    import uvicorn

    if is_debug():
        uvicorn.run(
            "app.server:create_app", factory=True, host="127.0.0.1", port=8000, reload=True, log_level="debug"
        )
    else:
        uvicorn.run(create_app(), host="127.0.0.1", port=8000, log_level="info")
