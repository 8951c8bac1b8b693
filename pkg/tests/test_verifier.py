from __future__ import annotations

from datetime import datetime, timezone

import pytest

from kgverify.errors import NoDocumentsRetrievable, NoSitelink
from kgverify.llm import LlmGateway, ScriptedProvider
from kgverify.model import RetrievalSource, Statement, VerdictKind
from kgverify.net import HttpRequest
from kgverify.prompting import OPTION_TEXTS
from kgverify.retrieval import (
    ARCHIVE_AVAILABILITY_API,
    DocumentFetcher,
    GroundingDocument,
    SearchHit,
)
from kgverify.verifier import (
    VerificationMode,
    Verifier,
    extract_reference_numbers,
    parse_wikipedia_article,
    resolve_citations,
)

STATEMENT = Statement("Václav Havel", "award received", "Gottlieb Duttweiler Prize")

ANSWER = {
    "a": "The correct answer is: a) " + OPTION_TEXTS["a"] + " The paragraph names both.",
    "b": "The correct answer is: b) " + OPTION_TEXTS["b"],
    "c": "The correct answer is: c) " + OPTION_TEXTS["c"],
}


def make_doc(paragraphs, url="https://doc.example/page"):
    return GroundingDocument(
        url=url,
        retrieval_source=RetrievalSource.DIRECT,
        media_type="text/html",
        paragraphs=tuple(paragraphs),
        fetched_at=datetime.now(timezone.utc),
    )


def make_verifier(responses, **kwargs):
    provider = ScriptedProvider(responses)
    gateway = LlmGateway(provider)
    verifier = Verifier(gateway=gateway, fetcher=kwargs.pop("fetcher", None), **kwargs)
    return verifier, provider


class TestEarlyExit:
    @pytest.mark.parametrize("position", range(1, 11))
    def test_stops_at_first_proof(self, position):
        paragraphs = [f"paragraph number {i} " + "x" * 100 for i in range(1, 11)]
        responses = [ANSWER["c"]] * (position - 1) + [ANSWER["a"]]
        verifier, provider = make_verifier(responses)
        trace = verifier.verify_against_document(STATEMENT, make_doc(paragraphs))
        assert provider.calls == position
        assert trace is not None
        assert trace.paragraph_text == paragraphs[position - 1]
        assert trace.verdict.kind is VerdictKind.DIRECT_PROOF

    def test_no_proof_processes_all(self):
        paragraphs = ["p" * 150 for _ in range(10)]
        verifier, provider = make_verifier([ANSWER["c"]] * 10)
        trace = verifier.verify_against_document(STATEMENT, make_doc(paragraphs))
        assert trace is None
        assert provider.calls == 10

    def test_zero_valid_paragraphs(self):
        verifier, provider = make_verifier([])
        trace = verifier.verify_against_document(STATEMENT, make_doc(["too short"]))
        assert trace is None
        assert provider.calls == 0

    def test_short_paragraphs_skipped_entirely(self):
        paragraphs = ["tiny", "y" * 120, "small"]
        verifier, provider = make_verifier([ANSWER["a"]])
        trace = verifier.verify_against_document(STATEMENT, make_doc(paragraphs))
        assert provider.calls == 1
        assert trace.paragraph_text == "y" * 120

    def test_trace_paragraph_is_verbatim_member(self):
        paragraphs = ["z" * 140, "q" * 200]
        verifier, _ = make_verifier([ANSWER["c"], ANSWER["a"]])
        doc = make_doc(paragraphs)
        trace = verifier.verify_against_document(STATEMENT, doc)
        assert trace.paragraph_text in doc.paragraphs
        assert trace.document_url == doc.url


PAGE_A = "<p>" + "a" * 150 + "</p><p>" + "b" * 150 + "</p>"
PAGE_B = "<p>" + "c" * 150 + "</p>"


class StubSearch:
    def __init__(self, urls):
        self.urls = urls

    def search(self, query, limit):
        return [SearchHit(url=u, rank=i + 1) for i, u in enumerate(self.urls[:limit])]


class TestWebSearchFlow:
    def test_traces_collected_per_confirming_document(self, dict_transport):
        urls = [
            "https://one.example/page",
            "https://two.example/report.pdf",
            "https://three.example/page",
        ]
        dict_transport.add(HttpRequest.get(urls[0]), body=PAGE_A)
        dict_transport.add(HttpRequest.get(urls[1]), body=b"%PDF-1.4",
                           content_type="application/pdf")
        dict_transport.add(HttpRequest.get(urls[2]), body=PAGE_B)
        # doc1: c then a; doc3: a
        responses = [ANSWER["c"], ANSWER["a"], ANSWER["a"]]
        verifier, provider = make_verifier(
            responses,
            fetcher=DocumentFetcher(dict_transport),
            search_provider=StubSearch(urls),
        )
        session = verifier.verify_via_web_search(STATEMENT)
        assert session.mode is VerificationMode.WEB_SEARCH
        assert [t.document_url for t in session.traces] == [urls[0], urls[2]]
        assert provider.calls == 3
        assert session.paragraphs_queried == 3
        assert session.documents_examined == 2
        skipped = [d for d in session.documents if d.skip is not None]
        assert len(skipped) == 1 and skipped[0].url == urls[1]
        assert skipped[0].skip.kind == "unsupported-media"
        assert session.ended_at >= session.started_at

    def test_zero_hits_is_empty_session(self, dict_transport):
        verifier, _ = make_verifier(
            [], fetcher=DocumentFetcher(dict_transport), search_provider=StubSearch([])
        )
        session = verifier.verify_via_web_search(STATEMENT)
        assert session.traces == []
        assert session.documents == []

    def test_all_documents_unfetchable(self, dict_transport):
        urls = ["https://a.example/x.pdf", "https://b.example/y.pdf"]
        for url in urls:
            dict_transport.add(HttpRequest.get(url), body=b"%PDF-",
                               content_type="application/pdf")
        verifier, _ = make_verifier(
            [], fetcher=DocumentFetcher(dict_transport), search_provider=StubSearch(urls)
        )
        with pytest.raises(NoDocumentsRetrievable):
            verifier.verify_via_web_search(STATEMENT)


class TestReferenceNumbers:
    def test_sup_markers(self):
        html = ('text<sup class="reference"><a href="#cite_note-x-12">[12]</a></sup> more'
                '<sup class="reference"><a href="#cite_note-y-14">[14]</a></sup>')
        assert extract_reference_numbers(html) == [12, 14]

    def test_repeated_marker_distinct(self):
        html = ('<sup class="reference"><a href="#c-7">[7]</a></sup>'
                '<sup class="reference"><a href="#c-7">[7]</a></sup>')
        assert extract_reference_numbers(html) == [7]

    def test_plain_text_without_markers(self):
        assert extract_reference_numbers("no citations in this text") == []

    def test_plain_bracket_fallback(self):
        assert extract_reference_numbers("claim[3] and another[5]") == [3, 5]

    def test_href_fallback_when_sup_text_empty(self):
        html = '<sup class="reference"><a href="#cite_note-source-9"></a></sup>'
        assert extract_reference_numbers(html) == [9]


REFERENCES_HTML = (
    '<ol class="references">'
    '<li id="cite_note-1"><cite>First source.</cite></li>'
    '<li id="cite_note-2"><cite>Second source.</cite>'
    '<a href="https://second.example/paper">link</a>'
    '<a href="https://mirror.example/paper">mirror</a></li>'
    '<li id="cite_note-3"><cite>Third source.</cite>'
    '<a href="#internal">anchor</a>'
    '<a href="https://third.example/article">article</a></li>'
    "</ol>"
)


class TestResolveCitations:
    def test_resolves_with_external_urls(self):
        citations, dangling = resolve_citations([2, 3], REFERENCES_HTML)
        assert dangling == []
        assert citations[0].ref_number == 2
        assert citations[0].urls == (
            "https://second.example/paper", "https://mirror.example/paper"
        )
        assert citations[1].urls == ("https://third.example/article",)
        assert "Third source." in citations[1].citation_text

    def test_dangling_number(self):
        citations, dangling = resolve_citations([1, 9], REFERENCES_HTML)
        assert [c.ref_number for c in citations] == [1]
        assert dangling == [9]

    def test_empty_numbers(self):
        assert resolve_citations([], REFERENCES_HTML) == ([], [])


WIKI_HTML = (
    "<html><body>"
    "<p>" + "lead paragraph about the subject " * 5 + "</p>"
    '<p>supported claim paragraph ' + "with detail " * 10 +
    '<sup class="reference"><a href="#cite_note-2">[2]</a></sup></p>'
    "<h2>References</h2>"
    '<ol class="references">'
    '<li id="cite_note-1"><cite>No URL here.</cite></li>'
    '<li id="cite_note-2"><cite>Primary.</cite>'
    '<a href="https://primary.example/article">article</a>'
    '<a href="https://dead.example/mirror">mirror</a></li>'
    "</ol>"
    "</body></html>"
)

PRIMARY_HTML = "<p>" + "primary source paragraph content " * 6 + "</p>"


class FakeWikidata:
    def resolve_wikipedia_url(self, entity):
        return "https://en.wikipedia.org/wiki/Subject"


class TestWikipediaFlow:
    def test_drilldown_and_primary_trace(self, dict_transport):
        dict_transport.add(HttpRequest.get("https://en.wikipedia.org/wiki/Subject"),
                           body=WIKI_HTML)
        dict_transport.add(HttpRequest.get("https://primary.example/article"),
                           body=PRIMARY_HTML)
        # dead mirror with no snapshot: exercises the skip path
        dict_transport.add(HttpRequest.get("https://dead.example/mirror"),
                           status=404, body="gone")
        dict_transport.add_json(
            HttpRequest.get(ARCHIVE_AVAILABILITY_API,
                            params={"url": "https://dead.example/mirror"}),
            {"archived_snapshots": {}},
        )
        responses = [
            ANSWER["b"],  # chunk is positive (indication triggers drill-down)
            ANSWER["c"],  # lead paragraph
            ANSWER["a"],  # claim paragraph -> anchor with refs [2]
            ANSWER["a"],  # primary source paragraph confirms
        ]
        verifier, provider = make_verifier(
            responses,
            fetcher=DocumentFetcher(dict_transport),
            wikidata=FakeWikidata(),
        )
        statement = Statement("Subject", "related to", "Thing", subject_id="Q1")
        session = verifier.verify_via_wikipedia(statement)
        assert session.mode is VerificationMode.WIKIPEDIA
        assert provider.calls == 4
        assert len(session.wikipedia_anchors) == 1
        assert session.wikipedia_anchors[0].ref_numbers == (2,)
        assert len(session.traces) == 1
        trace = session.traces[0]
        assert trace.document_url == "https://primary.example/article"
        assert trace.retrieval_source is RetrievalSource.DIRECT
        # the dead mirror is recorded as a skipped document
        skipped = [d for d in session.documents if d.skip is not None]
        assert [d.url for d in skipped] == ["https://dead.example/mirror"]
        # a trace never cites the Wikipedia article itself
        assert all(
            "wikipedia.org" not in t.document_url for t in session.traces
        )

    def test_negative_chunk_skips_drilldown(self, dict_transport):
        dict_transport.add(HttpRequest.get("https://en.wikipedia.org/wiki/Subject"),
                           body=WIKI_HTML)
        verifier, provider = make_verifier(
            [ANSWER["c"]],
            fetcher=DocumentFetcher(dict_transport),
            wikidata=FakeWikidata(),
        )
        statement = Statement("Subject", "related to", "Thing", subject_id="Q1")
        session = verifier.verify_via_wikipedia(statement)
        assert provider.calls == 1
        assert session.traces == []
        assert session.wikipedia_anchors == []

    def test_statement_without_entity(self, dict_transport):
        verifier, _ = make_verifier(
            [], fetcher=DocumentFetcher(dict_transport), wikidata=FakeWikidata()
        )
        with pytest.raises(NoSitelink):
            verifier.verify_via_wikipedia(Statement("s", "p", "o"))

    def test_shared_citation_verified_once(self, dict_transport):
        # two confirming paragraphs cite the same source: verify it only once
        html = (
            "<html><body>"
            "<p>" + "first supported paragraph with plenty of detail " * 4 +
            '<sup class="reference"><a href="#cite_note-2">[2]</a></sup></p>'
            "<p>" + "second supported paragraph with plenty of detail " * 4 +
            '<sup class="reference"><a href="#cite_note-2">[2]</a></sup></p>'
            '<ol class="references">'
            '<li id="cite_note-1"><cite>Unused.</cite></li>'
            '<li id="cite_note-2"><cite>Shared.</cite>'
            '<a href="https://primary.example/article">article</a></li>'
            "</ol></body></html>"
        )
        dict_transport.add(HttpRequest.get("https://en.wikipedia.org/wiki/Subject"),
                           body=html)
        dict_transport.add(HttpRequest.get("https://primary.example/article"),
                           body=PRIMARY_HTML)
        responses = [
            ANSWER["b"],  # chunk
            ANSWER["a"],  # first paragraph -> citation 2
            ANSWER["a"],  # primary source confirms
            ANSWER["a"],  # second paragraph -> citation 2 again (no refetch)
        ]
        verifier, provider = make_verifier(
            responses,
            fetcher=DocumentFetcher(dict_transport),
            wikidata=FakeWikidata(),
        )
        session = verifier.verify_via_wikipedia(
            Statement("Subject", "related to", "Thing", subject_id="Q1")
        )
        assert provider.calls == 4
        assert len(session.traces) == 1
        assert len(session.wikipedia_anchors) == 2
        primary_records = [d for d in session.documents
                           if d.url == "https://primary.example/article"]
        assert len(primary_records) == 1


def test_parse_wikipedia_article_structure():
    article = parse_wikipedia_article(WIKI_HTML)
    assert len(article.paragraphs) == 2
    assert "cite_note-2" in article.paragraphs[1].html
    assert "Primary." in article.references_html
