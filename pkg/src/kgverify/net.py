"""HTTP transport with recorded-fixture playback and on-disk caching.

Every outbound request is described by a canonical fingerprint so a live
response can be recorded once and replayed forever. Replay mode swaps the
live transport for a fixture-only one, which makes "no network access" a
structural property rather than a convention.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import requests

from .errors import FixtureMissing, Unavailable

DEFAULT_CONNECT_TIMEOUT = 15.0
DEFAULT_TOTAL_TIMEOUT = 30.0
DEFAULT_RETRIES = 2
USER_AGENT = "kgverify/0.1 (statement verification pipeline)"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class HttpRequest:
    method: str
    url: str
    params: tuple[tuple[str, str], ...] = ()
    headers: tuple[tuple[str, str], ...] = ()
    body: bytes | None = None

    @classmethod
    def get(cls, url: str, params: dict | None = None, headers: dict | None = None) -> "HttpRequest":
        return cls(
            method="GET",
            url=url,
            params=tuple(sorted((params or {}).items())),
            headers=tuple(sorted((headers or {}).items())),
        )

    @classmethod
    def post(cls, url: str, body: bytes, headers: dict | None = None) -> "HttpRequest":
        return cls(
            method="POST",
            url=url,
            headers=tuple(sorted((headers or {}).items())),
            body=body,
        )


@dataclass(frozen=True)
class HttpResponse:
    status: int
    headers: dict[str, str] = field(default_factory=dict)
    body: bytes = b""
    url: str = ""

    @property
    def content_type(self) -> str:
        return self.headers.get("content-type", "").split(";")[0].strip().lower()

    @property
    def charset(self) -> str:
        for part in self.headers.get("content-type", "").split(";")[1:]:
            key, _, value = part.partition("=")
            if key.strip().lower() == "charset" and value.strip():
                return value.strip()
        return "utf-8"

    @property
    def text(self) -> str:
        try:
            return self.body.decode(self.charset, errors="replace")
        except LookupError:  # server advertised a bogus charset
            return self.body.decode("utf-8", errors="replace")

    def json(self):
        return json.loads(self.body.decode("utf-8"))


def request_fingerprint(req: HttpRequest) -> str:
    """Stable identity for a request: method, url, params, and body."""
    descriptor = {
        "method": req.method.upper(),
        "url": req.url,
        "params": list(req.params),
        "body": base64.b64encode(req.body).decode("ascii") if req.body else None,
    }
    return hashlib.sha256(canonical_json(descriptor).encode("utf-8")).hexdigest()[:24]


class Transport(Protocol):
    def send(self, req: HttpRequest) -> HttpResponse: ...


class RequestGate:
    """Bounds the number of in-flight requests sharing this gate."""

    def __init__(self, max_in_flight: int = 2):
        self._sem = threading.Semaphore(max_in_flight)

    def __enter__(self):
        self._sem.acquire()
        return self

    def __exit__(self, *exc):
        self._sem.release()
        return False


class LiveTransport:
    """requests-backed transport with bounded concurrency and simple retries."""

    def __init__(
        self,
        connect_timeout: float = DEFAULT_CONNECT_TIMEOUT,
        total_timeout: float = DEFAULT_TOTAL_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        gate: RequestGate | None = None,
        session: requests.Session | None = None,
        sleeper=time.sleep,
    ):
        self._timeout = (connect_timeout, total_timeout)
        self._retries = retries
        self._gate = gate or RequestGate(4)
        self._session = session or requests.Session()
        self._sleep = sleeper

    def send(self, req: HttpRequest) -> HttpResponse:
        headers = {"User-Agent": USER_AGENT, **dict(req.headers)}
        last_error: Exception | None = None
        for attempt in range(self._retries + 1):
            try:
                with self._gate:
                    resp = self._session.request(
                        req.method,
                        req.url,
                        params=dict(req.params) or None,
                        data=req.body,
                        headers=headers,
                        timeout=self._timeout,
                    )
                return HttpResponse(
                    status=resp.status_code,
                    headers={k.lower(): v for k, v in resp.headers.items()},
                    body=resp.content,
                    url=str(resp.url),
                )
            except requests.RequestException as exc:
                last_error = exc
                if attempt < self._retries:
                    self._sleep(min(2.0**attempt, 8.0))
        raise Unavailable(f"{req.method} {req.url}: {last_error}") from last_error


# -- fixture serialization -----------------------------------------------------


def response_to_record(req: HttpRequest, resp: HttpResponse) -> dict:
    record = {
        "request": {
            "method": req.method,
            "url": req.url,
            "params": [list(p) for p in req.params],
        },
        "response": {
            "status": resp.status,
            "headers": resp.headers,
            "url": resp.url or req.url,
        },
    }
    try:
        record["response"]["body_text"] = resp.body.decode("utf-8")
    except UnicodeDecodeError:
        record["response"]["body_b64"] = base64.b64encode(resp.body).decode("ascii")
    return record


def response_from_record(record: dict) -> HttpResponse:
    payload = record["response"]
    if "body_text" in payload:
        body = payload["body_text"].encode("utf-8")
    else:
        body = base64.b64decode(payload.get("body_b64", ""))
    return HttpResponse(
        status=payload["status"],
        headers={k.lower(): v for k, v in payload.get("headers", {}).items()},
        body=body,
        url=payload.get("url", ""),
    )


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_fixture(directory: Path, req: HttpRequest, resp: HttpResponse) -> Path:
    path = Path(directory) / f"{request_fingerprint(req)}.json"
    record = response_to_record(req, resp)
    atomic_write(path, (json.dumps(record, indent=2, ensure_ascii=False) + "\n").encode("utf-8"))
    return path


class FixtureTransport:
    """Serves recorded responses from a directory; never touches the network."""

    def __init__(self, directory: Path | str):
        self._dir = Path(directory)

    def send(self, req: HttpRequest) -> HttpResponse:
        fingerprint = request_fingerprint(req)
        path = self._dir / f"{fingerprint}.json"
        if not path.exists():
            raise FixtureMissing(
                f"no recorded fixture for {req.method} {req.url} (fingerprint {fingerprint})"
            )
        record = json.loads(path.read_text(encoding="utf-8"))
        return response_from_record(record)


class RecordingTransport:
    """Delegates to a live transport and saves every response as a fixture."""

    def __init__(self, inner: Transport, directory: Path | str):
        self._inner = inner
        self._dir = Path(directory)

    def send(self, req: HttpRequest) -> HttpResponse:
        resp = self._inner.send(req)
        write_fixture(self._dir, req, resp)
        return resp


class CachingTransport:
    """Disk cache in front of another transport, keyed by request fingerprint.

    Entries older than ``ttl_seconds`` are refetched; errors are never cached.
    """

    def __init__(self, inner: Transport, directory: Path | str, ttl_seconds: float | None = None):
        self._inner = inner
        self._dir = Path(directory)
        self._ttl = ttl_seconds
        self._lock = threading.Lock()

    def _path(self, fingerprint: str) -> Path:
        return self._dir / f"{fingerprint}.json"

    def send(self, req: HttpRequest) -> HttpResponse:
        path = self._path(request_fingerprint(req))
        if path.exists():
            fresh = self._ttl is None or (time.time() - path.stat().st_mtime) <= self._ttl
            if fresh:
                record = json.loads(path.read_text(encoding="utf-8"))
                return response_from_record(record)
        resp = self._inner.send(req)
        if resp.status < 400:
            record = response_to_record(req, resp)
            with self._lock:
                atomic_write(
                    path, (json.dumps(record, ensure_ascii=False) + "\n").encode("utf-8")
                )
        return resp
