"""Model backends: live HTTP chat-completion, fixture replay, scripted mock.

Replay is the unit of reproducibility: a recorded fixture answers the same
prompt forever, so pipeline runs are deterministic and offline-testable.
API keys only ever come from the environment variable named in the config,
never from files.
"""

import datetime
import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests

DEFAULT_MODEL_NAME = "gpt-3.5-turbo"
DEFAULT_API_KEY_ENV_VAR = "ONTOFORGE_API_KEY"

BACKOFF_BASE_SECONDS = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.2


class ModelClientError(Exception):
    """Base class for backend failures."""


class FixtureMissingError(ModelClientError):
    def __init__(self, request_id, fixture_dir):
        self.request_id = request_id
        super().__init__(f"no fixture {request_id}.json under {fixture_dir}")


class AuthError(ModelClientError):
    """HTTP 401/403; never retried."""


class RetriesExhaustedError(ModelClientError):
    pass


def request_id_for(mode, prompt_text, model_name):
    """Stable request identity: SHA-256 over (mode, model, prompt)."""
    payload = f"{mode}\n{model_name or ''}\n{prompt_text}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def utc_now_iso():
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class BackendConfig:
    kind: str = "replay"
    endpoint_url: str | None = None
    api_key_env_var: str = DEFAULT_API_KEY_ENV_VAR
    model_name: str | None = DEFAULT_MODEL_NAME
    fixture_dir: str | None = None
    max_retries: int = 3
    request_timeout: float = 30.0
    max_parallel: int = 4
    temperature: float = 0.0
    script: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("http", "replay", "scripted"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "http" and not (self.endpoint_url and self.model_name):
            raise ValueError("http backend requires endpoint_url and model_name")
        if self.kind == "replay" and not self.fixture_dir:
            raise ValueError("replay backend requires fixture_dir")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be positive")


@dataclass
class ModelTranscript:
    request_id: str
    prompt_text: str
    response_text: str
    backend_kind: str
    timestamp: str
    attempt_count: int = 1

    def to_dict(self):
        return {
            "request_id": self.request_id,
            "prompt_text": self.prompt_text,
            "response_text": self.response_text,
            "backend_kind": self.backend_kind,
            "timestamp": self.timestamp,
            "attempt_count": self.attempt_count,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


class ReplayBackend:
    """Answers prompts from recorded fixture files; read-only, fully concurrent."""

    def __init__(self, config):
        self.config = config
        self.fixture_dir = Path(config.fixture_dir)

    def complete(self, request):
        rid = request_id_for(request.mode, request.prompt_text, self.config.model_name)
        path = self.fixture_dir / f"{rid}.json"
        if not path.is_file():
            raise FixtureMissingError(rid, self.fixture_dir)
        fixture = json.loads(path.read_text(encoding="utf-8"))
        return ModelTranscript(
            request_id=rid,
            prompt_text=request.prompt_text,
            response_text=fixture["response_text"],
            backend_kind="replay",
            timestamp=fixture.get("recorded_at", utc_now_iso()),
        )


class ScriptedBackend:
    """Canned responses for tests, with in-flight instrumentation."""

    def __init__(self, config):
        self.config = config
        self._responses = list(config.script)
        self._lock = threading.Lock()
        self.calls = []
        self.in_flight = 0
        self.max_in_flight = 0

    def complete(self, request):
        with self._lock:
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
            if not self._responses:
                self.in_flight -= 1
                raise ModelClientError("scripted backend has no responses left")
            response = self._responses.pop(0)
            self.calls.append(request.prompt_text)
        try:
            if callable(response):
                response = response(request)
        finally:
            with self._lock:
                self.in_flight -= 1
        return ModelTranscript(
            request_id=request_id_for(request.mode, request.prompt_text, self.config.model_name),
            prompt_text=request.prompt_text,
            response_text=response,
            backend_kind="scripted",
            timestamp=utc_now_iso(),
        )


class HttpBackend:
    """JSON chat-completion client with bounded parallelism and retry/backoff.

    Retries transport errors and HTTP 429/5xx; 401/403 fail immediately.
    Temperature defaults to 0 to keep extraction as deterministic as the
    endpoint allows.
    """

    def __init__(self, config, sleep=time.sleep, rng=None):
        self.config = config
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._semaphore = threading.BoundedSemaphore(config.max_parallel)

    def _headers(self):
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env_var or DEFAULT_API_KEY_ENV_VAR)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _backoff(self, attempt):
        delay = BACKOFF_BASE_SECONDS * (BACKOFF_FACTOR ** (attempt - 1))
        jitter = 1.0 + self._rng.uniform(-BACKOFF_JITTER, BACKOFF_JITTER)
        self._sleep(delay * jitter)

    def complete(self, request):
        config = self.config
        body = {
            "model": config.model_name,
            "messages": [{"role": "user", "content": request.prompt_text}],
            "temperature": config.temperature,
        }
        attempts = config.max_retries + 1
        last_error = None
        with self._semaphore:
            for attempt in range(1, attempts + 1):
                try:
                    response = requests.post(
                        config.endpoint_url,
                        json=body,
                        headers=self._headers(),
                        timeout=config.request_timeout,
                    )
                except requests.RequestException as exc:
                    last_error = exc
                else:
                    if response.status_code in (401, 403):
                        raise AuthError(f"authentication failed (HTTP {response.status_code})")
                    if response.status_code == 429 or response.status_code >= 500:
                        last_error = ModelClientError(f"HTTP {response.status_code}")
                    elif response.status_code != 200:
                        raise ModelClientError(
                            f"HTTP {response.status_code}: {response.text[:200]}"
                        )
                    else:
                        try:
                            payload = response.json()
                            text = payload["choices"][0]["message"]["content"]
                        except (ValueError, KeyError, IndexError, TypeError) as exc:
                            raise ModelClientError(
                                f"malformed chat-completion response: {exc}"
                            ) from exc
                        return ModelTranscript(
                            request_id=request_id_for(
                                request.mode, request.prompt_text, config.model_name
                            ),
                            prompt_text=request.prompt_text,
                            response_text=text,
                            backend_kind="http",
                            timestamp=utc_now_iso(),
                            attempt_count=attempt,
                        )
                if attempt < attempts:
                    self._backoff(attempt)
        raise RetriesExhaustedError(
            f"gave up after {attempts} attempt(s): {last_error}"
        ) from last_error


_BACKEND_CLASSES = {"http": HttpBackend, "replay": ReplayBackend, "scripted": ScriptedBackend}


def make_backend(config):
    return _BACKEND_CLASSES[config.kind](config)


def complete(request, config):
    """One-shot convenience wrapper around a fresh backend."""
    return make_backend(config).complete(request)


_record_lock = threading.Lock()


def record(request, config, fixture_dir):
    """Execute against the live backend and persist the exchange as a fixture.

    Re-recording the same request overwrites its fixture; replaying it
    afterwards returns the recorded response byte for byte.
    """
    transcript = complete(request, config)
    fixture = {
        "request_id": transcript.request_id,
        "prompt_text": request.prompt_text,
        "response_text": transcript.response_text,
        "model_name": config.model_name,
        "recorded_at": transcript.timestamp,
    }
    fixture_dir = Path(fixture_dir)
    fixture_dir.mkdir(parents=True, exist_ok=True)
    path = fixture_dir / f"{transcript.request_id}.json"
    with _record_lock:
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(fixture, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        tmp.replace(path)
    return transcript
