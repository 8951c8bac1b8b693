"""End-to-end verification sessions.

Two modes: web search (query built from the triple, each retrieved document
scanned paragraph by paragraph) and Wikipedia (two-phase drill-down through
the subject's article, then verification against the primary sources its
references point to). A confirmation always carries an evidence trace; what
was skipped (PDFs, dead links, dangling references) is recorded too.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Sequence

from . import html_text
from .errors import (
    ContextOverflow,
    NoDocumentsRetrievable,
    NoSitelink,
    Unavailable,
    UnavailableEverywhere,
    UnsupportedMediaType,
)
from .llm import LlmGateway, extract_justification, parse_option
from .model import (
    EvidenceTrace,
    Statement,
    VerdictKind,
    statement_to_search_query,
)
from .prompting import RdfPrompt, render_rdf_prompt
from .retrieval import (
    DEFAULT_CHUNK_CHARS,
    DEFAULT_HIT_LIMIT,
    MIN_PARAGRAPH_CHARS,
    DocumentFetcher,
    GroundingDocument,
    SearchProvider,
    chunk_fill_limit,
    valid_paragraphs,
    web_search,
)
from .wikidata import EntityId, WikidataClient

logger = logging.getLogger(__name__)

# Chunk verdicts that trigger the per-paragraph drill-down. Final confirmation
# still requires direct proof at the paragraph and primary-source levels.
DEFAULT_DRILLDOWN_POSITIVE = frozenset({VerdictKind.DIRECT_PROOF, VerdictKind.INDICATION})


class VerificationMode(Enum):
    WEB_SEARCH = "web-search"
    WIKIPEDIA = "wikipedia"


@dataclass(frozen=True)
class SkipRecord:
    kind: str
    target: str
    detail: str = ""


@dataclass
class DocumentRecord:
    url: str
    retrieval_source: str | None = None
    skip: SkipRecord | None = None


@dataclass(frozen=True)
class WikipediaAnchor:
    """Where in the Wikipedia article the statement appeared supported."""

    paragraph_text: str
    ref_numbers: tuple[int, ...]


@dataclass
class VerificationSession:
    statement: Statement
    mode: VerificationMode
    traces: list[EvidenceTrace] = field(default_factory=list)
    documents: list[DocumentRecord] = field(default_factory=list)
    skips: list[SkipRecord] = field(default_factory=list)
    wikipedia_anchors: list[WikipediaAnchor] = field(default_factory=list)
    paragraphs_queried: int = 0
    started_at: datetime | None = None
    ended_at: datetime | None = None

    @property
    def documents_examined(self) -> int:
        return sum(1 for d in self.documents if d.skip is None)


@dataclass(frozen=True)
class WikipediaCitation:
    ref_number: int
    citation_text: str
    urls: tuple[str, ...]


_BRACKET_MARKER = re.compile(r"\[(\d+)\]")
_NOTE_HREF = re.compile(r"#cite_note[^\"']*?-(\d+)\s*$")


def extract_reference_numbers(paragraph_html: str) -> list[int]:
    """Distinct citation indices referenced by a paragraph, in appearance order.

    Reads the superscript reference markers of wiki markup when present and
    falls back to plain bracketed numbers for pre-rendered text.
    """
    numbers: list[int] = []

    def add(value: int) -> None:
        if value > 0 and value not in numbers:
            numbers.append(value)

    sups = html_text.capture_elements(paragraph_html, "sup", class_filter="reference")
    if sups:
        for sup in sups:
            match = _BRACKET_MARKER.search(sup.text)
            if match:
                add(int(match.group(1)))
                continue
            for href in html_text.extract_links(sup.html):
                note = _NOTE_HREF.search(href)
                if note:
                    add(int(note.group(1)))
                    break
        return numbers
    text = html_text.capture_elements(f"<p>{paragraph_html}</p>", "p")
    flattened = text[0].text if text else paragraph_html
    for match in _BRACKET_MARKER.finditer(flattened):
        add(int(match.group(1)))
    return numbers


def resolve_citations(
    ref_numbers: Sequence[int], references_section_html: str
) -> tuple[list[WikipediaCitation], list[int]]:
    """Map citation indices to entries of the references list.

    Returns the resolvable citations (each with every external URL found in
    its entry) and the dangling indices that have no entry.
    """
    items = html_text.capture_elements(references_section_html, "li")
    citations: list[WikipediaCitation] = []
    dangling: list[int] = []
    for number in ref_numbers:
        if number < 1 or number > len(items):
            dangling.append(number)
            continue
        entry = items[number - 1]
        urls = tuple(
            href for href in html_text.extract_links(entry.html) if href.startswith("http")
        )
        citations.append(
            WikipediaCitation(ref_number=number, citation_text=entry.text, urls=urls)
        )
    return citations, dangling


@dataclass(frozen=True)
class _WikipediaArticle:
    paragraphs: tuple[html_text.CapturedElement, ...]
    references_html: str


def parse_wikipedia_article(html: str) -> _WikipediaArticle:
    paragraphs = tuple(html_text.extract_paragraph_elements(html))
    reference_lists = html_text.capture_elements(html, "ol", class_filter="references")
    references_html = reference_lists[0].html if reference_lists else ""
    return _WikipediaArticle(paragraphs=paragraphs, references_html=references_html)


class Verifier:
    """Drives verification sessions over a gateway, fetcher, and providers."""

    def __init__(
        self,
        gateway: LlmGateway,
        fetcher: DocumentFetcher,
        search_provider: SearchProvider | None = None,
        wikidata: WikidataClient | None = None,
        chunk_chars: int = DEFAULT_CHUNK_CHARS,
        drilldown_positive: frozenset[VerdictKind] = DEFAULT_DRILLDOWN_POSITIVE,
        clock: Callable[[], datetime] | None = None,
    ):
        self.gateway = gateway
        self.fetcher = fetcher
        self.search_provider = search_provider
        self.wikidata = wikidata
        self.chunk_chars = chunk_chars
        self.drilldown_positive = drilldown_positive
        self._clock = clock or (lambda: datetime.now(timezone.utc))

    # -- building blocks --------------------------------------------------------

    def _judge_snippet(
        self, statement: Statement, snippet: str, session: VerificationSession | None
    ):
        response = self.gateway.complete(render_rdf_prompt(RdfPrompt(statement, snippet)))
        if session is not None:
            session.paragraphs_queried += 1
        return parse_option(response.raw_text), response

    def verify_against_document(
        self,
        statement: Statement,
        doc: GroundingDocument,
        session: VerificationSession | None = None,
    ) -> EvidenceTrace | None:
        """Scan a document's valid paragraphs in order; stop at the first proof.

        The remaining content of a confirmed document is not processed, to
        conserve model calls. Returns the trace, or None without a proof.
        """
        for paragraph in valid_paragraphs(doc):
            try:
                verdict, response = self._judge_snippet(statement, paragraph, session)
            except ContextOverflow as exc:
                logger.warning("skipping paragraph of %s: %s", doc.url, exc)
                if session is not None:
                    session.skips.append(
                        SkipRecord(kind="context-overflow", target=doc.url, detail=str(exc))
                    )
                continue
            if verdict.kind is VerdictKind.DIRECT_PROOF:
                return EvidenceTrace(
                    statement=statement,
                    document_url=doc.url,
                    retrieval_source=doc.retrieval_source,
                    paragraph_text=paragraph,
                    verdict=verdict,
                    justification=extract_justification(response.raw_text),
                    llm_model=self.gateway.params.model,
                    timestamp=self._clock(),
                    duration_ms=response.latency_ms,
                )
        return None

    # -- use case: web search ---------------------------------------------------

    def verify_via_web_search(
        self, statement: Statement, hit_limit: int = DEFAULT_HIT_LIMIT
    ) -> VerificationSession:
        """Search the web for the triple and verify against each hit in rank order."""
        if self.search_provider is None:
            raise ValueError("no search provider configured")
        session = VerificationSession(
            statement=statement, mode=VerificationMode.WEB_SEARCH, started_at=self._clock()
        )
        query = statement_to_search_query(statement)
        hits = web_search(self.search_provider, query, limit=hit_limit)
        fetched_any = False
        for hit in hits:
            record = DocumentRecord(url=hit.url)
            session.documents.append(record)
            try:
                doc = self.fetcher.fetch_document(hit.url)
            except UnsupportedMediaType as exc:
                record.skip = SkipRecord("unsupported-media", hit.url, str(exc))
                continue
            except Unavailable as exc:
                record.skip = SkipRecord("unavailable", hit.url, str(exc))
                continue
            fetched_any = True
            record.retrieval_source = doc.retrieval_source.value
            trace = self.verify_against_document(statement, doc, session)
            if trace is not None:
                session.traces.append(trace)
            # proceed to the next document either way
        if hits and not fetched_any:
            raise NoDocumentsRetrievable(
                f"none of the {len(hits)} search hits could be retrieved"
            )
        session.ended_at = self._clock()
        return session

    # -- use case: Wikipedia ----------------------------------------------------

    def verify_via_wikipedia(
        self, statement: Statement, entity: EntityId | str | int | None = None
    ) -> VerificationSession:
        """Verify through the subject's Wikipedia article and its cited sources.

        Phase 1 scans size-bounded chunks of the article; positive chunks are
        re-examined paragraph by paragraph. A paragraph confirmed by direct
        proof contributes its citations, and only the cited primary sources
        can produce evidence traces; the article itself is never treated as
        an authority, so its confirming paragraphs are recorded only as
        intermediate anchors.
        """
        if self.wikidata is None:
            raise ValueError("no Wikidata client configured")
        subject = entity if entity is not None else statement.subject_id
        if subject is None:
            raise NoSitelink("statement carries no subject entity id to resolve")
        article_url = self.wikidata.resolve_wikipedia_url(EntityId.parse(subject))

        session = VerificationSession(
            statement=statement, mode=VerificationMode.WIKIPEDIA, started_at=self._clock()
        )
        try:
            html, _ = self.fetcher.fetch_raw(article_url)
        except (Unavailable, UnsupportedMediaType) as exc:
            raise NoDocumentsRetrievable(f"cannot fetch article {article_url}: {exc}") from exc
        session.documents.append(
            DocumentRecord(url=article_url, retrieval_source="direct")
        )
        article = parse_wikipedia_article(html)
        texts = [p.text for p in article.paragraphs]

        offset = 0
        examined_urls: set[str] = set()
        for chunk in chunk_fill_limit(texts, max_chars=self.chunk_chars):
            members = article.paragraphs[offset : offset + len(chunk.paragraphs)]
            offset += len(chunk.paragraphs)
            verdict, _ = self._judge_snippet(statement, chunk.text, session)
            if verdict.kind not in self.drilldown_positive:
                continue
            for paragraph in members:
                if len(paragraph.text) < MIN_PARAGRAPH_CHARS:
                    continue
                verdict, _ = self._judge_snippet(statement, paragraph.text, session)
                if verdict.kind is not VerdictKind.DIRECT_PROOF:
                    continue
                numbers = extract_reference_numbers(paragraph.html)
                session.wikipedia_anchors.append(
                    WikipediaAnchor(paragraph_text=paragraph.text, ref_numbers=tuple(numbers))
                )
                self._verify_citations(statement, numbers, article, session, examined_urls)
        session.ended_at = self._clock()
        return session

    def _verify_citations(
        self,
        statement: Statement,
        ref_numbers: Sequence[int],
        article: _WikipediaArticle,
        session: VerificationSession,
        examined_urls: set[str],
    ) -> None:
        citations, dangling = resolve_citations(ref_numbers, article.references_html)
        for number in dangling:
            session.skips.append(
                SkipRecord("dangling-reference", str(number), "no entry in references list")
            )
        for citation in citations:
            for url in citation.urls:
                if url in examined_urls:
                    continue
                examined_urls.add(url)
                record = DocumentRecord(url=url)
                session.documents.append(record)
                try:
                    doc = self.fetcher.fetch_with_archive_fallback(url)
                except UnsupportedMediaType as exc:
                    record.skip = SkipRecord("unsupported-media", url, str(exc))
                    continue
                except (UnavailableEverywhere, Unavailable) as exc:
                    record.skip = SkipRecord("unavailable", url, str(exc))
                    continue
                record.retrieval_source = doc.retrieval_source.value
                trace = self.verify_against_document(statement, doc, session)
                if trace is not None:
                    session.traces.append(trace)
