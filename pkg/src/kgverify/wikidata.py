"""Wikidata access: selecting statements that need verification and mapping
entities to their English Wikipedia articles.

Two SPARQL queries drive statement selection: the first lists a subject's
statements that carry no reference node, the second narrows the predicates to
those whose property declares a citation-needed constraint. Sitelink and
revision lookups go through the MediaWiki APIs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence
from urllib.parse import quote

from .errors import EndpointUnavailable, MalformedResponse, NoSitelink
from .model import Statement, normalize_label
from .net import HttpRequest, Transport

WIKIDATA_SPARQL_ENDPOINT = "https://query.wikidata.org/sparql"
WIKIDATA_API = "https://www.wikidata.org/w/api.php"
WIKIPEDIA_API = "https://en.wikipedia.org/w/api.php"

# Property constraint (P2302) of kind "citation needed" (Q54554025) marks
# predicates whose statements must carry a reference.
PROPERTY_CONSTRAINT = "P2302"
CITATION_NEEDED_CONSTRAINT = "Q54554025"

_ENTITY_PREFIX = "http://www.wikidata.org/entity/"


@dataclass(frozen=True)
class EntityId:
    numeric_id: int

    def __post_init__(self) -> None:
        if self.numeric_id <= 0:
            raise ValueError("entity ids are positive")

    def __str__(self) -> str:
        return f"Q{self.numeric_id}"

    @classmethod
    def parse(cls, value: "EntityId | str | int") -> "EntityId":
        if isinstance(value, EntityId):
            return value
        if isinstance(value, int):
            return cls(value)
        text = value.strip().upper()
        match = re.fullmatch(r"Q?(\d+)", text)
        if not match:
            raise ValueError(f"not a Wikidata entity id: {value!r}")
        return cls(int(match.group(1)))


@dataclass(frozen=True)
class UnsourcedStatement:
    statement: Statement
    mandatory_reference: bool = False


@dataclass(frozen=True)
class EntityInfo:
    entity_id: EntityId
    label: str
    revision_id: int
    wikipedia_title: str | None
    wikipedia_url: str | None

    @property
    def entity_url(self) -> str:
        return f"{_ENTITY_PREFIX}{self.entity_id}"

    @property
    def permalink(self) -> str:
        return f"https://wikidata.org/w/index.php?title={self.entity_id}&oldid={self.revision_id}"


def unsourced_statements_query(entity: EntityId) -> str:
    """SPARQL text listing a subject's statements that have no reference node."""
    return f"""SELECT ?prop ?object ?propLabel ?objectLabel ?subjectLabel WHERE {{
  wd:{entity} ?claim ?stmt .
  ?prop wikibase:claim ?claim ;
        wikibase:statementProperty ?psProp .
  ?stmt ?psProp ?object .
  FILTER NOT EXISTS {{ ?stmt prov:wasDerivedFrom ?ref . }}
  wd:{entity} rdfs:label ?subjectLabel .
  FILTER(LANG(?subjectLabel) = "en")
  SERVICE wikibase:label {{ bd:serviceParam wikibase:language "en". }}
}}
ORDER BY ?prop ?object"""


def mandatory_reference_query(property_ids: Sequence[str]) -> str:
    """SPARQL text selecting which of the given properties require a citation."""
    values = " ".join(f"wd:{pid}" for pid in property_ids)
    return f"""SELECT DISTINCT ?prop WHERE {{
  VALUES ?prop {{ {values} }}
  ?prop p:{PROPERTY_CONSTRAINT} ?constraint .
  ?constraint ps:{PROPERTY_CONSTRAINT} wd:{CITATION_NEEDED_CONSTRAINT} .
}}
ORDER BY ?prop"""


def _trailing_id(uri: str) -> str:
    return uri.rstrip("/").rsplit("/", 1)[-1]


class WikidataClient:
    """Shareable client for the SPARQL endpoint and the wiki APIs."""

    def __init__(
        self,
        transport: Transport,
        endpoint: str = WIKIDATA_SPARQL_ENDPOINT,
        api_url: str = WIKIDATA_API,
        wikipedia_api: str = WIKIPEDIA_API,
    ):
        self._transport = transport
        self.endpoint = endpoint
        self._api_url = api_url
        self._wikipedia_api = wikipedia_api

    # -- SPARQL ---------------------------------------------------------------

    def _sparql(self, query: str) -> list[dict]:
        req = HttpRequest.get(
            self.endpoint,
            params={"query": query, "format": "json"},
            headers={"Accept": "application/sparql-results+json"},
        )
        resp = self._transport.send(req)
        if resp.status != 200:
            raise EndpointUnavailable(f"{self.endpoint} returned HTTP {resp.status}")
        try:
            payload = resp.json()
            return payload["results"]["bindings"]
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedResponse(
                f"unexpected SPARQL payload from {self.endpoint}: "
                f"{resp.body[:200]!r} ({exc})"
            ) from exc

    def fetch_unsourced_statements(self, entity: EntityId | str | int) -> list[UnsourcedStatement]:
        """All statements of the subject that carry no reference in the graph."""
        entity = EntityId.parse(entity)
        rows = self._sparql(unsourced_statements_query(entity))
        out: list[UnsourcedStatement] = []
        for row in rows:
            try:
                prop_uri = row["prop"]["value"]
                object_binding = row["object"]
                subject_label = row["subjectLabel"]["value"]
                predicate_label = row.get("propLabel", {}).get("value") or _trailing_id(prop_uri)
                object_label = row.get("objectLabel", {}).get("value") or object_binding["value"]
            except (KeyError, TypeError) as exc:
                raise MalformedResponse(f"incomplete SPARQL binding: {row!r}") from exc
            object_id = None
            if object_binding.get("type") == "uri" and object_binding["value"].startswith(
                _ENTITY_PREFIX
            ):
                object_id = _trailing_id(object_binding["value"])
            out.append(
                UnsourcedStatement(
                    statement=Statement(
                        subject_label=normalize_label(subject_label),
                        predicate_label=normalize_label(predicate_label),
                        object_label=normalize_label(object_label),
                        subject_id=str(entity),
                        predicate_id=_trailing_id(prop_uri),
                        object_id=object_id,
                    )
                )
            )
        return out

    def filter_mandatory_reference(
        self, statements: Sequence[UnsourcedStatement]
    ) -> list[UnsourcedStatement]:
        """Keep statements whose predicate declares a citation-needed constraint."""
        if not statements:
            return []
        property_ids: list[str] = []
        for unsourced in statements:
            pid = unsourced.statement.predicate_id
            if pid and pid not in property_ids:
                property_ids.append(pid)
        if not property_ids:
            return []
        rows = self._sparql(mandatory_reference_query(property_ids))
        constrained = {_trailing_id(row["prop"]["value"]) for row in rows}
        return [
            UnsourcedStatement(statement=unsourced.statement, mandatory_reference=True)
            for unsourced in statements
            if unsourced.statement.predicate_id in constrained
        ]

    # -- wiki APIs --------------------------------------------------------------

    def entity_info(self, entity: EntityId | str | int) -> EntityInfo:
        """Label, latest revision, and English sitelink of an entity."""
        entity = EntityId.parse(entity)
        req = HttpRequest.get(
            self._api_url,
            params={
                "action": "wbgetentities",
                "ids": str(entity),
                "props": "info|labels|sitelinks/urls",
                "languages": "en",
                "sitefilter": "enwiki",
                "format": "json",
            },
        )
        resp = self._transport.send(req)
        if resp.status != 200:
            raise EndpointUnavailable(f"{self._api_url} returned HTTP {resp.status}")
        try:
            record = resp.json()["entities"][str(entity)]
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedResponse(
                f"unexpected entity payload: {resp.body[:200]!r}"
            ) from exc
        if "missing" in record:
            raise NoSitelink(f"entity {entity} does not exist")
        sitelink = record.get("sitelinks", {}).get("enwiki", {})
        title = sitelink.get("title")
        url = sitelink.get("url")
        if title and not url:
            url = "https://en.wikipedia.org/wiki/" + quote(title.replace(" ", "_"))
        return EntityInfo(
            entity_id=entity,
            label=record.get("labels", {}).get("en", {}).get("value", str(entity)),
            revision_id=int(record.get("lastrevid", 0)),
            wikipedia_title=title,
            wikipedia_url=url,
        )

    def resolve_wikipedia_url(self, entity: EntityId | str | int) -> str:
        """URL of the English Wikipedia article linked from the entity."""
        info = self.entity_info(entity)
        if not info.wikipedia_url:
            raise NoSitelink(f"entity {info.entity_id} has no English Wikipedia article")
        return info.wikipedia_url

    def wikipedia_revision(self, title: str) -> int:
        """Latest revision id of a Wikipedia article, for permalink pinning."""
        req = HttpRequest.get(
            self._wikipedia_api,
            params={"action": "query", "prop": "info", "titles": title, "format": "json"},
        )
        resp = self._transport.send(req)
        if resp.status != 200:
            raise EndpointUnavailable(f"{self._wikipedia_api} returned HTTP {resp.status}")
        try:
            pages = resp.json()["query"]["pages"]
            page = next(iter(pages.values()))
            return int(page["lastrevid"])
        except (ValueError, KeyError, TypeError, StopIteration) as exc:
            raise MalformedResponse(
                f"unexpected page-info payload: {resp.body[:200]!r}"
            ) from exc


def wikipedia_permalink(title: str, revision_id: int) -> str:
    return (
        "https://en.wikipedia.org/w/index.php?title="
        + quote(title.replace(" ", "_"))
        + f"&oldid={revision_id}"
    )
