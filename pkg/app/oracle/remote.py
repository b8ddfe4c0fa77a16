"""
Remote HTTP oracle speaking the generic JSON protocol

POST {"prompt": str, "max_tokens": int}  ->  {"text": str}
"""

from __future__ import annotations

import logging
from typing import Optional

import httpx

from app.errors import MalformedResponse, OracleHttpError, OracleTimeout
from app.oracle.base import Oracle, OracleAnswer
from app.oracle.profile import OracleProfile
from app.runtime.document import Document
from app.utils.config import get_remote_token

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0


def remote_call(
    client: httpx.Client,
    endpoint: str,
    prompt: Document,
    max_tokens: int,
    index: int,
    token: Optional[str] = None,
) -> str:
    """
    POST one prompt and return the answer text.

    Raises:
        OracleTimeout: timeout or unreachable endpoint
        OracleHttpError: non-2xx status or other transport failure
        MalformedResponse: body is not JSON or lacks a string `text`
    """
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    try:
        response = client.post(
            endpoint, json={"prompt": prompt.text, "max_tokens": max_tokens}, headers=headers
        )
        response.raise_for_status()
    except (httpx.TimeoutException, httpx.ConnectError) as e:
        raise OracleTimeout(f"remote oracle unreachable: {e}", call_index=index, url=endpoint) from e
    except httpx.HTTPStatusError as e:
        raise OracleHttpError(
            f"remote oracle returned HTTP {e.response.status_code}",
            call_index=index,
            url=endpoint,
            status=e.response.status_code,
        ) from e
    except httpx.HTTPError as e:
        raise OracleHttpError(f"remote oracle request failed: {e}", call_index=index, url=endpoint) from e

    try:
        body = response.json()
    except ValueError as e:
        raise MalformedResponse("response is not JSON", call_index=index, url=endpoint) from e
    if not isinstance(body, dict) or not isinstance(body.get("text"), str):
        raise MalformedResponse("response lacks a string 'text' field", call_index=index, url=endpoint)
    return body["text"]


class RemoteOracle(Oracle):
    """Real deployments only; token counts are measured with the runtime's length measure."""

    name = "remote"

    def __init__(
        self,
        profile: OracleProfile,
        url: str,
        *,
        timeout: float = DEFAULT_TIMEOUT,
        token: Optional[str] = None,
        client: Optional[httpx.Client] = None,
    ):
        super().__init__(profile)
        self.url = url
        self.token = token if token is not None else get_remote_token()
        self.client = client or httpx.Client(timeout=timeout)

    def answer(self, prompt: Document, index: int) -> OracleAnswer:
        logger.debug(f"remote call #{index} -> {self.url} ({len(prompt)} tokens)")
        text = remote_call(self.client, self.url, prompt, self.profile.n_out_bar, index, self.token)
        return OracleAnswer(text, len(Document.from_text(text)), None)

    def close(self) -> None:
        self.client.close()
