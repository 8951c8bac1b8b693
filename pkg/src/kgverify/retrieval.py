"""Grounding-document retrieval: web search, fetching, and chunking.

Search providers are pluggable (a recorded-fixture provider backs all tests);
document fetching extracts paragraph text from HTML only, falls back to the
web archive for dead links, and packs paragraphs into size-bounded chunks for
models with tight input budgets.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from . import html_text
from .errors import (
    FixtureMissing,
    ProviderUnavailable,
    QuotaExceeded,
    Unavailable,
    UnavailableEverywhere,
    UnsupportedMediaType,
)
from .model import RetrievalSource
from .net import HttpRequest, HttpResponse, Transport

MIN_PARAGRAPH_CHARS = 100
DEFAULT_CHUNK_CHARS = 10_000
DEFAULT_HIT_LIMIT = 5
ARCHIVE_AVAILABILITY_API = "https://archive.org/wayback/available"

_HTML_TYPES = {"text/html", "application/xhtml+xml"}


@dataclass(frozen=True)
class SearchHit:
    url: str
    rank: int
    title: str | None = None

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank is 1-based")


@dataclass(frozen=True)
class GroundingDocument:
    url: str
    retrieval_source: RetrievalSource
    media_type: str
    paragraphs: tuple[str, ...]
    fetched_at: datetime


@dataclass(frozen=True)
class Chunk:
    """A group of consecutive paragraphs whose joined length fits a budget."""

    paragraphs: tuple[str, ...]
    char_length: int
    index: int

    @property
    def text(self) -> str:
        return "\n".join(self.paragraphs)


class SearchProvider(Protocol):
    def search(self, query: str, limit: int) -> list[SearchHit]: ...


class FixtureSearchProvider:
    """Replays recorded search results, one JSON file per query."""

    def __init__(self, directory: Path | str):
        self._dir = Path(directory)

    @staticmethod
    def query_key(query: str) -> str:
        return hashlib.sha256(query.encode("utf-8")).hexdigest()[:24]

    def search(self, query: str, limit: int) -> list[SearchHit]:
        path = self._dir / f"{self.query_key(query)}.json"
        if not path.exists():
            raise FixtureMissing(
                f"no recorded search results for query {query!r} (key {self.query_key(query)})"
            )
        record = json.loads(path.read_text(encoding="utf-8"))
        hits = [
            SearchHit(url=h["url"], rank=i + 1, title=h.get("title"))
            for i, h in enumerate(record["hits"][:limit])
        ]
        return hits


def write_search_fixture(directory: Path | str, query: str, hits: list[dict]) -> Path:
    path = Path(directory) / f"{FixtureSearchProvider.query_key(query)}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps({"query": query, "hits": hits}, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


class GoogleSearchProvider:
    """Programmatic web search via the Custom Search JSON API.

    Credentials come from the environment (KGVERIFY_SEARCH_KEY,
    KGVERIFY_SEARCH_CX) unless passed explicitly.
    """

    API_URL = "https://www.googleapis.com/customsearch/v1"

    def __init__(self, transport: Transport, api_key: str | None = None, cx: str | None = None):
        self._transport = transport
        self._key = api_key or os.environ.get("KGVERIFY_SEARCH_KEY", "")
        self._cx = cx or os.environ.get("KGVERIFY_SEARCH_CX", "")
        if not self._key or not self._cx:
            raise ProviderUnavailable("search credentials are not configured")

    def search(self, query: str, limit: int) -> list[SearchHit]:
        req = HttpRequest.get(
            self.API_URL,
            params={"key": self._key, "cx": self._cx, "q": query, "num": str(limit)},
        )
        resp = self._transport.send(req)
        if resp.status == 429:
            raise QuotaExceeded("search quota exhausted")
        if resp.status >= 500:
            raise ProviderUnavailable(f"search provider returned HTTP {resp.status}")
        if resp.status != 200:
            raise ProviderUnavailable(f"search request failed with HTTP {resp.status}")
        items = resp.json().get("items", []) or []
        return [
            SearchHit(url=item["link"], rank=i + 1, title=item.get("title"))
            for i, item in enumerate(items[:limit])
        ]


def web_search(provider: SearchProvider, query: str, limit: int = DEFAULT_HIT_LIMIT) -> list[SearchHit]:
    """Top hits for a query, deduplicated by URL keeping the best rank."""
    if not query.strip():
        raise ValueError("query must be non-empty")
    hits = provider.search(query, limit)[:limit]
    seen: set[str] = set()
    unique: list[SearchHit] = []
    for hit in hits:
        if hit.url in seen:
            continue
        seen.add(hit.url)
        unique.append(SearchHit(url=hit.url, rank=len(unique) + 1, title=hit.title))
    return unique


class DocumentFetcher:
    """Fetches pages and extracts their paragraph text."""

    def __init__(self, transport: Transport, clock=None):
        self._transport = transport
        self._clock = clock or (lambda: datetime.now(timezone.utc))

    def fetch_raw(self, url: str) -> tuple[str, str]:
        """Fetch a URL and return (html_text, media_type); non-HTML is rejected."""
        try:
            resp = self._transport.send(HttpRequest.get(url))
        except Unavailable:
            raise
        if resp.status >= 400:
            raise Unavailable(f"GET {url} returned HTTP {resp.status}")
        media_type = resp.content_type or _sniff_media_type(url, resp)
        if media_type not in _HTML_TYPES:
            raise UnsupportedMediaType(f"{url}: unsupported media type {media_type or 'unknown'}")
        return resp.text, media_type

    def fetch_document(self, url: str) -> GroundingDocument:
        html, media_type = self.fetch_raw(url)
        return GroundingDocument(
            url=url,
            retrieval_source=RetrievalSource.DIRECT,
            media_type=media_type,
            paragraphs=tuple(html_text.extract_paragraphs(html)),
            fetched_at=self._clock(),
        )

    def fetch_with_archive_fallback(self, url: str) -> GroundingDocument:
        """Fetch directly; if the resource is gone, use its archived snapshot."""
        try:
            return self.fetch_document(url)
        except Unavailable:
            pass
        snapshot_url = self._nearest_snapshot(url)
        if snapshot_url is None:
            raise UnavailableEverywhere(f"{url}: no live copy and no archived snapshot")
        html, media_type = self.fetch_raw(snapshot_url)
        html = html_text.strip_archive_chrome(html)
        return GroundingDocument(
            url=snapshot_url,
            retrieval_source=RetrievalSource.WEB_ARCHIVE,
            media_type=media_type,
            paragraphs=tuple(html_text.extract_paragraphs(html)),
            fetched_at=self._clock(),
        )

    def _nearest_snapshot(self, url: str) -> str | None:
        try:
            resp = self._transport.send(
                HttpRequest.get(ARCHIVE_AVAILABILITY_API, params={"url": url})
            )
        except Unavailable:
            return None
        if resp.status != 200:
            return None
        try:
            closest = resp.json().get("archived_snapshots", {}).get("closest", {})
        except (ValueError, AttributeError):
            return None
        if closest.get("available") and closest.get("url"):
            return closest["url"]
        return None


def _sniff_media_type(url: str, resp: HttpResponse) -> str:
    path = url.split("?", 1)[0].lower()
    if path.endswith(".pdf") or resp.body[:5] == b"%PDF-":
        return "application/pdf"
    head = resp.body[:512].lstrip().lower()
    if head.startswith(b"<!doctype html") or head.startswith(b"<html"):
        return "text/html"
    return ""


def valid_paragraphs(doc: GroundingDocument) -> list[str]:
    """Paragraphs long enough to be worth querying (at least 100 characters)."""
    return filter_valid_paragraphs(doc.paragraphs)


def filter_valid_paragraphs(paragraphs: Iterable[str]) -> list[str]:
    return [p for p in paragraphs if len(p) >= MIN_PARAGRAPH_CHARS]


def chunk_fill_limit(
    paragraphs: Sequence[str], max_chars: int = DEFAULT_CHUNK_CHARS
) -> list[Chunk]:
    """Greedily pack consecutive paragraphs into chunks of at most ``max_chars``.

    Joins use one newline per boundary. A single paragraph longer than the
    budget becomes its own oversize chunk; paragraphs are never split, so
    concatenating all chunks reproduces the input sequence exactly.
    """
    if max_chars <= 0:
        raise ValueError("max_chars must be positive")
    chunks: list[Chunk] = []
    current: list[str] = []
    current_len = 0

    def flush() -> None:
        nonlocal current, current_len
        if current:
            chunks.append(
                Chunk(paragraphs=tuple(current), char_length=current_len, index=len(chunks))
            )
            current = []
            current_len = 0

    for paragraph in paragraphs:
        candidate = current_len + len(paragraph) + (1 if current else 0)
        if current and candidate > max_chars:
            flush()
            candidate = len(paragraph)
        current.append(paragraph)
        current_len = candidate
        if current_len > max_chars:
            # single oversize paragraph kept atomic
            flush()
    flush()
    return chunks
