"""Chat-completion transport."""

from __future__ import annotations

import logging
import os
import threading
import time
from typing import Callable, Protocol

import requests

log = logging.getLogger(__name__)

DEFAULT_TOKEN_ENV = "NEVL_API_TOKEN"


class TransportError(RuntimeError):
    """A request failed for good (retries exhausted or a non-retryable response)."""


class ChatClient(Protocol):
    def send(self, prompt: str, temperature: float) -> str: ...


class HttpChatClient:
    """OpenAI-style chat-completion client.

    The bearer token is read from the environment variable ``token_env``
    and is never accepted as an argument. Connection errors, timeouts,
    HTTP 429 and 5xx responses are retried with exponential backoff;
    other failures raise :class:`TransportError` at once.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        token_env: str = DEFAULT_TOKEN_ENV,
        max_retries: int = 3,
        timeout: float = 60.0,
        backoff: float = 1.0,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        token = os.environ.get(token_env)
        if not token:
            raise TransportError(f"environment variable {token_env} is not set")
        if max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        self.endpoint = endpoint
        self.model = model
        self.max_retries = max_retries
        self.timeout = timeout
        self.backoff = backoff
        self._headers = {"Authorization": f"Bearer {token}", "Content-Type": "application/json"}
        self._session = session or requests.Session()
        self._sleep = sleep
        self._lock = threading.Lock()
        self.requests_sent = 0

    def send(self, prompt: str, temperature: float) -> str:
        body = {"model": self.model, "temperature": temperature, "messages": [{"role": "user", "content": prompt}]}
        last = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            with self._lock:
                self.requests_sent += 1
            try:
                resp = self._session.post(self.endpoint, json=body, headers=self._headers, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last = f"{type(exc).__name__}: {exc}"
                log.warning("request failed (attempt %d): %s", attempt + 1, last)
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last = f"HTTP {resp.status_code}"
                log.warning("request failed (attempt %d): %s", attempt + 1, last)
                continue
            if resp.status_code != 200:
                raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                content = resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError):
                raise TransportError("malformed chat-completion response") from None
            if not isinstance(content, str):
                raise TransportError("chat-completion content is not text")
            return content
        raise TransportError(f"giving up after {self.max_retries + 1} attempt(s): {last}")
