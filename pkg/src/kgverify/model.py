"""Core domain types: statements, verdicts, decisions, and evidence traces.

Everything here is an immutable value object, safe to share between workers.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from datetime import datetime

from .errors import MalformedInput

_WS_RUN = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    """Trim and collapse internal whitespace runs to single spaces."""
    return _WS_RUN.sub(" ", text.strip())


@dataclass(frozen=True)
class Statement:
    """A subject/predicate/object triple, optionally carrying KG identifiers."""

    subject_label: str
    predicate_label: str
    object_label: str
    subject_id: str | None = None
    predicate_id: str | None = None
    object_id: str | None = None
    domain_tag: str | None = None

    def __post_init__(self) -> None:
        for name in ("subject_label", "predicate_label", "object_label"):
            if not getattr(self, name).strip():
                raise ValueError(f"statement {name} must be non-empty")

    def labels(self) -> tuple[str, str, str]:
        return (self.subject_label, self.predicate_label, self.object_label)


class VerdictKind(enum.Enum):
    """The three-option judgment of a snippet against a statement."""

    DIRECT_PROOF = "direct_proof"
    INDICATION = "indication"
    NO_SUPPORT = "no_support"
    UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class Verdict:
    """A parsed model judgment; unparseable verdicts keep the raw text for audit."""

    kind: VerdictKind
    raw_response: str = ""

    @classmethod
    def unparseable(cls, raw: str) -> "Verdict":
        return cls(VerdictKind.UNPARSEABLE, raw)


DIRECT_PROOF = Verdict(VerdictKind.DIRECT_PROOF)
INDICATION = Verdict(VerdictKind.INDICATION)
NO_SUPPORT = Verdict(VerdictKind.NO_SUPPORT)


class BinaryDecision(enum.Enum):
    SUPPORTED = "supported"
    NOT_SUPPORTED = "not_supported"


class DecisionMode(enum.Enum):
    """How the middle (indication) option is folded into a binary decision.

    FAVOR_PRECISION counts only direct proof as support; FAVOR_RECALL also
    accepts the indication option, trading precision for recall.
    """

    FAVOR_PRECISION = "favor_precision"
    FAVOR_RECALL = "favor_recall"


class NliLabel(enum.Enum):
    ENTAILMENT = "entailment"
    NEUTRAL = "neutral"
    CONTRADICTION = "contradiction"
    UNPARSEABLE = "unparseable"


NLI_CLASSES = (NliLabel.ENTAILMENT, NliLabel.NEUTRAL, NliLabel.CONTRADICTION)


class RetrievalSource(enum.Enum):
    DIRECT = "direct"
    WEB_ARCHIVE = "web-archive"


@dataclass(frozen=True)
class EvidenceTrace:
    """The record that makes a confirmation traceable.

    Links a statement to the exact document paragraph that confirmed it and
    the model's stated justification. Only direct-proof verdicts may be
    emitted as confirmations.
    """

    statement: Statement
    document_url: str
    retrieval_source: RetrievalSource
    paragraph_text: str
    verdict: Verdict
    justification: str
    llm_model: str
    timestamp: datetime
    duration_ms: int

    def __post_init__(self) -> None:
        if self.verdict.kind is not VerdictKind.DIRECT_PROOF:
            raise ValueError("evidence traces may only carry direct-proof verdicts")
        if self.duration_ms < 0:
            raise ValueError("duration_ms must be non-negative")


def statement_to_search_query(statement: Statement) -> str:
    """Build the web-search query for a statement.

    The three labels are whitespace-normalized and joined with single spaces,
    followed by the ``-wikipedia`` operator so encyclopedia mirrors do not
    crowd out primary sources (Wikipedia has its own verification mode).
    """
    parts = [normalize_label(p) for p in statement.labels()]
    return " ".join(parts) + " -wikipedia"


def verdict_to_binary(verdict: Verdict, mode: DecisionMode) -> BinaryDecision:
    """Fold a three-option verdict into a binary supported/not-supported call."""
    positive = {VerdictKind.DIRECT_PROOF}
    if mode is DecisionMode.FAVOR_RECALL:
        positive.add(VerdictKind.INDICATION)
    if verdict.kind in positive:
        return BinaryDecision.SUPPORTED
    return BinaryDecision.NOT_SUPPORTED


# -- serialization ------------------------------------------------------------

_TSV_COLUMNS = 6


def statement_to_json(statement: Statement) -> dict:
    out: dict = {
        "subject": statement.subject_label,
        "predicate": statement.predicate_label,
        "object": statement.object_label,
    }
    for key, value in (
        ("subject_id", statement.subject_id),
        ("predicate_id", statement.predicate_id),
        ("object_id", statement.object_id),
        ("domain_tag", statement.domain_tag),
    ):
        if value is not None:
            out[key] = value
    return out


def statement_from_json(obj: dict) -> Statement:
    try:
        return Statement(
            subject_label=obj["subject"],
            predicate_label=obj["predicate"],
            object_label=obj["object"],
            subject_id=obj.get("subject_id"),
            predicate_id=obj.get("predicate_id"),
            object_id=obj.get("object_id"),
            domain_tag=obj.get("domain_tag"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad statement record {json.dumps(obj)[:200]}: {exc}") from exc


def statement_to_line(statement: Statement) -> str:
    cols = [
        statement.subject_label,
        statement.predicate_label,
        statement.object_label,
        statement.subject_id or "",
        statement.predicate_id or "",
        statement.object_id or "",
    ]
    return "\t".join(cols)


def statement_from_line(line: str, lineno: int = 0) -> Statement:
    """Parse one tab-separated statement line: three labels plus optional ids."""
    cols = line.rstrip("\n").split("\t")
    if len(cols) not in (3, _TSV_COLUMNS):
        raise MalformedInput(
            f"line {lineno}: expected 3 or {_TSV_COLUMNS} tab-separated columns, got {len(cols)}"
        )
    cols += [""] * (_TSV_COLUMNS - len(cols))
    try:
        return Statement(
            subject_label=cols[0],
            predicate_label=cols[1],
            object_label=cols[2],
            subject_id=cols[3] or None,
            predicate_id=cols[4] or None,
            object_id=cols[5] or None,
        )
    except ValueError as exc:
        raise MalformedInput(f"line {lineno}: {exc}") from exc


def statements_from_text(text: str) -> list[Statement]:
    """Parse a statements file: one triple per line, blank lines and # comments skipped."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        out.append(statement_from_line(line, lineno))
    return out
