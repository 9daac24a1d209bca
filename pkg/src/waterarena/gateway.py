"""Provider-agnostic chat-completion client with record/replay caching.

Modes: "live" always calls the provider; "record" calls once and caches the
response on disk; "replay" serves only from the cache and never touches the
network, so recorded experiments reproduce byte-identically offline.

The cache is content-addressed: the key digests exactly (model, messages,
temperature, max_tokens), so semantically identical requests hit the same
entry across processes and platforms.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Tuple

import httpx

from .engine import ConfigError

ROLES = ("system", "user", "assistant")
MODES = ("live", "record", "replay")


class GatewayError(RuntimeError):
    """The provider could not produce a response."""


class ReplayMissError(GatewayError):
    """Replay mode was asked for a request absent from the cache."""


class RateLimited(Exception):
    """Transport-level signal that the provider asked us to slow down."""


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ConfigError(f"bad message role {self.role!r}")


@dataclass(frozen=True)
class RequestTag:
    """Experiment coordinates carried for error reporting, not cache keys."""

    experiment: str = ""
    game: int = 0
    round: int = 0
    player: str = ""
    attempt: int = 0

    def describe(self) -> str:
        return (
            f"experiment={self.experiment!r} game={self.game} round={self.round}"
            f" player={self.player!r} attempt={self.attempt}"
        )


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: Tuple[ChatMessage, ...]
    temperature: float = 0.7
    max_tokens: int = 512
    request_tag: RequestTag = field(default_factory=RequestTag)

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages:
            raise ConfigError("request needs at least one message")
        if self.messages[0].role != "system":
            raise ConfigError("first message must have role system")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ConfigError("max_tokens must be positive")


def cache_key(request: ChatRequest) -> str:
    payload = {
        "model": request.model,
        "messages": [[m.role, m.content] for m in request.messages],
        "temperature": request.temperature,
        "max_tokens": request.max_tokens,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    key: str
    response_text: str
    latency: float
    timestamp: float


class ResponseCache:
    """One JSON file per entry under a directory, written atomically."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[CacheEntry]:
        path = self._path(key)
        if not path.exists():
            return None
        data = json.loads(path.read_text())
        return CacheEntry(
            key=data["key"],
            response_text=data["response_text"],
            latency=data["latency"],
            timestamp=data["timestamp"],
        )

    def put(self, entry: CacheEntry) -> None:
        path = self._path(entry.key)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(
                {
                    "key": entry.key,
                    "response_text": entry.response_text,
                    "latency": entry.latency,
                    "timestamp": entry.timestamp,
                },
                sort_keys=True,
                separators=(",", ":"),
            )
        )
        tmp.replace(path)


Transport = Callable[[ChatRequest], str]


class ChatGateway:
    def __init__(
        self,
        mode: str,
        cache: Optional[ResponseCache] = None,
        transport: Optional[Transport] = None,
        sleeper: Callable[[float], None] = time.sleep,
        max_attempts: int = 5,
        backoff_base: float = 1.0,
        backoff_factor: float = 2.0,
        max_in_flight: int = 5,
    ):
        if mode not in MODES:
            raise ConfigError(f"bad gateway mode {mode!r}")
        if mode in ("record", "replay") and cache is None:
            raise ConfigError(f"{mode} mode requires a cache")
        if mode in ("live", "record") and transport is None:
            raise ConfigError(f"{mode} mode requires a transport")
        self.mode = mode
        self.cache = cache
        self.transport = transport
        self.sleeper = sleeper
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self.backoff_factor = backoff_factor
        self._slots = threading.Semaphore(max_in_flight)

    def complete(self, request: ChatRequest) -> str:
        key = cache_key(request)
        if self.mode in ("record", "replay"):
            entry = self.cache.get(key)
            if entry is not None:
                return entry.response_text
        if self.mode == "replay":
            raise ReplayMissError(
                f"no cached response for {request.request_tag.describe()} (key {key})"
            )
        started = time.monotonic()
        with self._slots:
            text = self._call_with_backoff(request)
        if self.mode == "record":
            self.cache.put(
                CacheEntry(
                    key=key,
                    response_text=text,
                    latency=time.monotonic() - started,
                    timestamp=time.time(),
                )
            )
        return text

    def _call_with_backoff(self, request: ChatRequest) -> str:
        delay = self.backoff_base
        for attempt in range(1, self.max_attempts + 1):
            try:
                return self.transport(request)
            except RateLimited:
                if attempt == self.max_attempts:
                    raise GatewayError(
                        f"rate limited after {self.max_attempts} attempts for"
                        f" {request.request_tag.describe()}"
                    )
                self.sleeper(delay)
                delay *= self.backoff_factor
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class ProviderConfig:
    """Endpoint settings; secrets come from the environment, never code."""

    endpoint: str
    api_key: str
    model: str
    api_version: Optional[str] = None

    @classmethod
    def from_env(cls, env=os.environ) -> "ProviderConfig":
        try:
            endpoint = env["WATERARENA_ENDPOINT"]
            api_key = env["WATERARENA_API_KEY"]
            model = env["WATERARENA_MODEL"]
        except KeyError as exc:
            raise ConfigError(f"missing environment variable {exc.args[0]}") from exc
        return cls(
            endpoint=endpoint,
            api_key=api_key,
            model=model,
            api_version=env.get("WATERARENA_API_VERSION") or None,
        )


class HttpTransport:
    """Chat-completion POST against one configured endpoint.

    With api_version set, authentication uses the api-key header and the
    version is passed as a query parameter; otherwise a Bearer token is sent.
    """

    def __init__(self, provider: ProviderConfig, timeout: float = 60.0):
        self.provider = provider
        self._client = httpx.Client(timeout=timeout)

    def __call__(self, request: ChatRequest) -> str:
        payload = {
            "model": request.model or self.provider.model,
            "messages": [
                {"role": m.role, "content": m.content} for m in request.messages
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        params = {}
        if self.provider.api_version:
            headers = {"api-key": self.provider.api_key}
            params["api-version"] = self.provider.api_version
        else:
            headers = {"Authorization": f"Bearer {self.provider.api_key}"}
        response = self._client.post(
            self.provider.endpoint, json=payload, headers=headers, params=params
        )
        if response.status_code == 429:
            raise RateLimited()
        if response.status_code >= 400:
            raise GatewayError(
                f"provider returned {response.status_code}: {response.text[:200]}"
            )
        data = response.json()
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed provider response: {data!r}") from exc
