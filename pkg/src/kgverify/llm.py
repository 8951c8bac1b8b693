"""Provider-agnostic LLM invocation plus response parsing.

The gateway pins the decoding parameters used for evaluation (fixed seed,
low temperature) and appends every live completion to a response log so any
run can be replayed offline. Parsing turns raw completions into one of the
three option verdicts, an NLI class label, or the model's justification; an
unreadable response is a value (unparseable), never an exception.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .errors import ContextOverflow, FixtureMissing, ProviderUnavailable
from .model import DIRECT_PROOF, INDICATION, NO_SUPPORT, NliLabel, Verdict
from .net import HttpRequest, Transport, atomic_write, canonical_json
from .prompting import OPTION_TEXTS, SYSTEM_PROMPT

DEFAULT_MODEL = "meta/meta-llama-3-70b-instruct"

# Characters per token when a provider reports token limits; word/token ratios
# put a token near 4 characters, and character budgeting is deterministic.
CHARS_PER_TOKEN = 4


@dataclass(frozen=True)
class LlmParams:
    model: str = DEFAULT_MODEL
    seed: int = 42
    top_p: float = 0.9
    temperature: float = 0.1
    max_new_tokens: int = 500
    min_new_tokens: int = -1
    system_prompt: str = SYSTEM_PROMPT

    def __post_init__(self) -> None:
        if not (0 < self.top_p <= 1):
            raise ValueError("top_p must be in (0, 1]")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")


def default_params() -> LlmParams:
    return LlmParams()


@dataclass(frozen=True)
class LlmResponse:
    raw_text: str
    latency_ms: int
    provider: str
    request_fingerprint: str


def completion_fingerprint(params: LlmParams, prompt: str) -> str:
    """Deterministic identity of a completion request (params + prompts)."""
    descriptor = {
        "model": params.model,
        "seed": params.seed,
        "top_p": params.top_p,
        "temperature": params.temperature,
        "max_new_tokens": params.max_new_tokens,
        "min_new_tokens": params.min_new_tokens,
        "system_prompt": params.system_prompt,
        "prompt": prompt,
    }
    return hashlib.sha256(canonical_json(descriptor).encode("utf-8")).hexdigest()[:24]


class LlmProvider(Protocol):
    name: str

    def complete(self, params: LlmParams, prompt: str) -> str: ...


class ScriptedProvider:
    """Mock provider returning canned responses in script order.

    Useful for orchestration tests where the n-th verification call must see
    the n-th response. Raises when the script runs dry.
    """

    name = "scripted"

    def __init__(self, responses: list[str]):
        self._responses = list(responses)
        self.calls = 0

    @classmethod
    def from_jsonl(cls, path: Path | str) -> "ScriptedProvider":
        """Load an ordered script from a JSON-lines file of {"raw_text": ...} rows."""
        responses = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                responses.append(json.loads(line)["raw_text"])
        return cls(responses)

    def complete(self, params: LlmParams, prompt: str) -> str:
        if self.calls >= len(self._responses):
            raise FixtureMissing(f"scripted provider exhausted after {self.calls} responses")
        text = self._responses[self.calls]
        self.calls += 1
        return text


class ReplayProvider:
    """Replays recorded completions keyed by request fingerprint."""

    name = "replay"

    def __init__(self, log_path: Path | str):
        self._path = Path(log_path)
        self._by_fingerprint: dict[str, str] = {}
        if self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                self._by_fingerprint[record["fingerprint"]] = record["raw_text"]

    def __len__(self) -> int:
        return len(self._by_fingerprint)

    def complete(self, params: LlmParams, prompt: str) -> str:
        fingerprint = completion_fingerprint(params, prompt)
        try:
            return self._by_fingerprint[fingerprint]
        except KeyError:
            raise FixtureMissing(
                f"no recorded completion for fingerprint {fingerprint} (model {params.model})"
            ) from None


class ReplicateHttpProvider:
    """Minimal client for a Replicate-style prediction HTTP API."""

    name = "replicate"
    API_URL = "https://api.replicate.com/v1/models/{model}/predictions"

    def __init__(self, transport: Transport, api_token: str | None = None):
        self._transport = transport
        self._token = api_token or os.environ.get("KGVERIFY_LLM_TOKEN", "")
        if not self._token:
            raise ProviderUnavailable("LLM API token is not configured")

    def complete(self, params: LlmParams, prompt: str) -> str:
        body = canonical_json(
            {
                "input": {
                    "prompt": prompt,
                    "system_prompt": params.system_prompt,
                    "seed": params.seed,
                    "top_p": params.top_p,
                    "temperature": params.temperature,
                    "max_new_tokens": params.max_new_tokens,
                    "min_new_tokens": params.min_new_tokens,
                }
            }
        ).encode("utf-8")
        req = HttpRequest.post(
            self.API_URL.format(model=params.model),
            body=body,
            headers={
                "Authorization": f"Bearer {self._token}",
                "Content-Type": "application/json",
                "Prefer": "wait",
            },
        )
        resp = self._transport.send(req)
        if resp.status >= 500 or resp.status == 429:
            raise ProviderUnavailable(f"LLM API returned HTTP {resp.status}")
        if resp.status not in (200, 201):
            raise ProviderUnavailable(f"LLM API request failed with HTTP {resp.status}")
        payload = resp.json()
        output = payload.get("output")
        if isinstance(output, list):
            return "".join(str(part) for part in output)
        return str(output or "")


class ResponseLog:
    """Append-only JSON-lines log of completions, keyed by fingerprint."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, fingerprint: str, params: LlmParams, prompt: str, raw_text: str,
               latency_ms: int) -> None:
        record = {
            "fingerprint": fingerprint,
            "model": params.model,
            "prompt_sha256": hashlib.sha256(prompt.encode("utf-8")).hexdigest(),
            "raw_text": raw_text,
            "latency_ms": latency_ms,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        line = json.dumps(record, ensure_ascii=False) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line)


def write_response_log(path: Path | str, entries: list[tuple[LlmParams, str, str]]) -> None:
    """Write a replayable response log from (params, prompt, raw_text) triples."""
    lines = []
    for params, prompt, raw_text in entries:
        lines.append(
            json.dumps(
                {
                    "fingerprint": completion_fingerprint(params, prompt),
                    "model": params.model,
                    "prompt_sha256": hashlib.sha256(prompt.encode("utf-8")).hexdigest(),
                    "raw_text": raw_text,
                    "latency_ms": 0,
                    "timestamp": "1970-01-01T00:00:00Z",
                },
                ensure_ascii=False,
            )
        )
    atomic_write(Path(path), ("\n".join(lines) + "\n").encode("utf-8"))


class LlmGateway:
    """Shareable front door to a provider: budget checks, retries, logging."""

    def __init__(
        self,
        provider: LlmProvider,
        params: LlmParams | None = None,
        context_tokens: int | None = None,
        response_log: ResponseLog | None = None,
        max_attempts: int = 3,
        sleeper=time.sleep,
    ):
        self.provider = provider
        self.params = params or default_params()
        self._budget_chars = context_tokens * CHARS_PER_TOKEN if context_tokens else None
        self._log = response_log
        self._max_attempts = max_attempts
        self._sleep = sleeper

    def complete(self, prompt: str, params: LlmParams | None = None) -> LlmResponse:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        params = params or self.params
        if self._budget_chars is not None:
            used = len(prompt) + len(params.system_prompt)
            if used > self._budget_chars:
                raise ContextOverflow(
                    f"prompt of {used} chars exceeds budget of {self._budget_chars} chars"
                )
        fingerprint = completion_fingerprint(params, prompt)
        last_error: Exception | None = None
        for attempt in range(self._max_attempts):
            try:
                start = time.monotonic()
                raw = self.provider.complete(params, prompt)
                latency_ms = int((time.monotonic() - start) * 1000)
                if self._log is not None:
                    self._log.append(fingerprint, params, prompt, raw, latency_ms)
                return LlmResponse(
                    raw_text=raw,
                    latency_ms=latency_ms,
                    provider=getattr(self.provider, "name", type(self.provider).__name__),
                    request_fingerprint=fingerprint,
                )
            except ProviderUnavailable as exc:
                last_error = exc
                if attempt < self._max_attempts - 1:
                    self._sleep(2.0**attempt)
        raise ProviderUnavailable(
            f"provider failed after {self._max_attempts} attempts: {last_error}"
        ) from last_error


# -- response parsing ----------------------------------------------------------

# Declaration contexts where an option letter counts as the chosen answer.
_DECLARED_OPTION = [
    # "The correct answer is: a)", "correct label is:c) contradiction", "answer a"
    re.compile(r"\b(?:answer|label)\s*(?:is)?\s*:?\s*\(?([abc])\b\)?", re.IGNORECASE),
    # "I would choose option c)", "the correct option is (b)"
    re.compile(r"\boption\s*(?:is)?\s*:?\s*\(?([abc])\)", re.IGNORECASE),
    # Response that opens with the bare option: "a) The RDF statement ..."
    re.compile(r"^\s*\(?([abc])\)", re.IGNORECASE),
]

def _declared_letters(raw: str) -> list[str]:
    letters: list[str] = []
    for pattern in _DECLARED_OPTION:
        for match in pattern.finditer(raw):
            letter = match.group(1).lower()
            if letter not in letters:
                letters.append(letter)
    return letters


def parse_option(raw: str) -> Verdict:
    """Extract the chosen option (a/b/c) from a raw completion.

    The letter must appear in an answer-declaration context; incidental
    letters elsewhere never count. Zero or conflicting declarations yield an
    unparseable verdict carrying the raw text.
    """
    letters = _declared_letters(raw)
    if len(letters) != 1:
        return Verdict.unparseable(raw)
    return {"a": DIRECT_PROOF, "b": INDICATION, "c": NO_SUPPORT}[letters[0]]


_LETTER_NLI = {"a": NliLabel.ENTAILMENT, "b": NliLabel.NEUTRAL, "c": NliLabel.CONTRADICTION}
_CLASS_WORDS = re.compile(r"\b(entailment|neutral|contradiction)\b", re.IGNORECASE)


def parse_nli_label(raw: str) -> NliLabel:
    """Extract the NLI class from a raw completion.

    An unambiguous declared letter wins; otherwise a single distinct literal
    class word decides. Conflicts between letter and word resolve to the
    letter; neither present means unparseable.
    """
    letters = _declared_letters(raw)
    if len(letters) == 1:
        return _LETTER_NLI[letters[0]]
    words = []
    for match in _CLASS_WORDS.finditer(raw):
        word = match.group(1).lower()
        if word not in words:
            words.append(word)
    if len(words) == 1:
        return NliLabel(words[0])
    return NliLabel.UNPARSEABLE


def extract_justification(raw: str) -> str:
    """The model's stated reasoning: text after the option declaration.

    Echoed canonical option wording is stripped so the justification starts
    with the model's own words. If prose precedes the declaration the whole
    response is kept; without any declaration the whole response is returned.
    """
    if not raw:
        return ""
    first = None
    for pattern in _DECLARED_OPTION:
        match = pattern.search(raw)
        if match is not None and (first is None or match.start() < first.start()):
            first = match
    if first is None:
        return raw.strip()
    prefix = raw[: first.start()]
    if any(mark in prefix for mark in (".", "!", "?")):
        # actual reasoning came before the declaration; keep everything
        return raw.strip()
    remainder = raw[first.end():].lstrip(" \t")
    remainder = remainder.lstrip(")").lstrip(" \t")
    for option_text in OPTION_TEXTS.values():
        if remainder.startswith(option_text):
            remainder = remainder[len(option_text):]
            break
    return remainder.strip()
