"""Command-line entry point wiring statement selection, verification,
dataset construction, evaluation, and report generation.

Configuration precedence is flags > environment > config file > defaults.
Replay mode swaps every outbound dependency for recorded fixtures, so a
replayed run performs no network access at all.
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__, datasets, evaluation, reporting
from .errors import (
    EmptyInput,
    EndpointUnavailable,
    FixtureMissing,
    InsufficientRecords,
    InvalidExamples,
    KgVerifyError,
    MalformedInput,
    MalformedResponse,
    NetworkForbidden,
    NoDocumentsRetrievable,
    NoSitelink,
    ProviderUnavailable,
    QuotaExceeded,
    SchemaViolation,
    TransformFailure,
    Unavailable,
    UnavailableEverywhere,
)
from .llm import (
    LlmGateway,
    LlmParams,
    ReplayProvider,
    ReplicateHttpProvider,
    ResponseLog,
)
from .model import (
    DecisionMode,
    NliLabel,
    statements_from_text,
    verdict_to_binary,
)
from .llm import parse_nli_label, parse_option
from .net import CachingTransport, FixtureTransport, LiveTransport, RequestGate, Transport
from .prompting import (
    NLI_TEMPLATE,
    RDF_TEMPLATE,
    NliExample,
    RdfPrompt,
    render_nli_prompt,
    render_rdf_prompt,
    template_digest,
)
from .retrieval import DocumentFetcher, FixtureSearchProvider, GoogleSearchProvider
from .verifier import Verifier
from .wikidata import (
    WIKIDATA_API,
    WIKIDATA_SPARQL_ENDPOINT,
    WIKIPEDIA_API,
    EntityId,
    WikidataClient,
    wikipedia_permalink,
)

# Exit codes, also documented in the README:
# 0 success; 2 usage or configuration; 3 malformed input data;
# 4 network, endpoint, or provider failure; 5 missing fixture in replay mode;
# 6 entity or sitelink resolution; 7 internal report generation; 130 interrupted.
EXIT_INPUT = 3
EXIT_NETWORK = 4
EXIT_FIXTURE = 5
EXIT_ENTITY = 6
EXIT_INTERNAL = 7


@dataclass
class RunConfig:
    sparql_endpoint: str = WIKIDATA_SPARQL_ENDPOINT
    wikidata_api: str = WIKIDATA_API
    wikipedia_api: str = WIKIPEDIA_API
    model: str = LlmParams().model
    decision_mode: str = "precision"
    replay: bool = False
    fixtures_dir: str | None = None
    cache_dir: str | None = None
    cache_ttl_seconds: float = 7 * 24 * 3600.0
    out_dir: str = "out"
    max_statements: int | None = None
    hit_limit: int = 5
    chunk_chars: int = 10_000
    llm_context_tokens: int | None = None
    fixed_clock: str | None = None
    corruption_seed: int = 42
    sample_seed: int = 42
    example_seed: int = 42
    sparql_requests: int = 2
    fetch_requests: int = 4
    llm_requests: int = 4

    _ENV_PREFIX = "KGVERIFY_"
    _INT_FIELDS = frozenset({
        "max_statements", "hit_limit", "chunk_chars", "llm_context_tokens",
        "corruption_seed", "sample_seed", "example_seed",
        "sparql_requests", "fetch_requests", "llm_requests",
    })
    _FLOAT_FIELDS = frozenset({"cache_ttl_seconds"})
    _BOOL_FIELDS = frozenset({"replay"})

    @classmethod
    def resolve(cls, config_file: str | None, overrides: dict) -> "RunConfig":
        values: dict = {}
        if config_file:
            try:
                values.update(json.loads(Path(config_file).read_text(encoding="utf-8")))
            except (OSError, ValueError) as exc:
                raise click.UsageError(f"cannot read config file {config_file}: {exc}")
        for field in dataclasses.fields(cls):
            env_key = cls._ENV_PREFIX + field.name.upper()
            if env_key in os.environ:
                values[field.name] = os.environ[env_key]
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise click.UsageError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        config = cls()
        for key, value in values.items():
            if value is not None:
                try:
                    if key in cls._BOOL_FIELDS and isinstance(value, str):
                        value = value.lower() in ("1", "true", "yes", "on")
                    elif key in cls._INT_FIELDS:
                        value = int(value)
                    elif key in cls._FLOAT_FIELDS:
                        value = float(value)
                except ValueError as exc:
                    raise click.UsageError(f"bad value for {key}: {value!r} ({exc})")
            setattr(config, key, value)
        if config.replay and not config.fixtures_dir:
            raise click.UsageError("replay mode requires a fixtures directory")
        return config

    @property
    def mode(self) -> DecisionMode:
        if self.decision_mode in ("precision", "favor_precision"):
            return DecisionMode.FAVOR_PRECISION
        if self.decision_mode in ("recall", "favor_recall"):
            return DecisionMode.FAVOR_RECALL
        raise click.UsageError(f"unknown decision mode {self.decision_mode!r}")

    def snapshot(self) -> dict:
        return dataclasses.asdict(self)


class _Runtime:
    """Everything a command needs, built once from the resolved config."""

    def __init__(self, config: RunConfig):
        self.config = config
        fixtures = Path(config.fixtures_dir) if config.fixtures_dir else None
        if config.replay:
            assert fixtures is not None
            http_dir = fixtures / "http"
            self.wikidata_transport: Transport = FixtureTransport(http_dir)
            self.fetch_transport: Transport = FixtureTransport(http_dir)
            self.search_provider = FixtureSearchProvider(fixtures / "search")
            provider = ReplayProvider(fixtures / "llm" / "responses.jsonl")
            response_log = None
        else:
            self.wikidata_transport = LiveTransport(gate=RequestGate(config.sparql_requests))
            self.fetch_transport = LiveTransport(gate=RequestGate(config.fetch_requests))
            if config.cache_dir:
                cache = Path(config.cache_dir)
                self.wikidata_transport = CachingTransport(
                    self.wikidata_transport, cache / "wikidata", config.cache_ttl_seconds
                )
                self.fetch_transport = CachingTransport(
                    self.fetch_transport, cache / "pages", config.cache_ttl_seconds
                )
            self.search_provider = None  # built lazily; needs credentials
            provider = None
            response_log = ResponseLog(Path(config.out_dir) / "responses.jsonl")
        params = LlmParams(model=config.model)
        if provider is None:
            provider = ReplicateHttpProvider(self.fetch_transport)
        self.gateway = LlmGateway(
            provider,
            params=params,
            context_tokens=config.llm_context_tokens,
            response_log=response_log,
        )
        if config.fixed_clock:
            instant = datetime.fromisoformat(config.fixed_clock.replace("Z", "+00:00"))
            if instant.tzinfo is None:
                instant = instant.replace(tzinfo=timezone.utc)
            self.clock = lambda: instant
        else:
            self.clock = lambda: datetime.now(timezone.utc)
        self.fetcher = DocumentFetcher(self.fetch_transport, clock=self.clock)
        self.wikidata = WikidataClient(
            self.wikidata_transport,
            endpoint=config.sparql_endpoint,
            api_url=config.wikidata_api,
            wikipedia_api=config.wikipedia_api,
        )

    def search(self):
        if self.search_provider is None:
            if self.config.replay:
                raise NetworkForbidden("replay mode cannot construct a live search provider")
            self.search_provider = GoogleSearchProvider(self.fetch_transport)
        return self.search_provider

    def verifier(self, need_search: bool = False) -> Verifier:
        return Verifier(
            gateway=self.gateway,
            fetcher=self.fetcher,
            search_provider=self.search() if need_search else self.search_provider,
            wikidata=self.wikidata,
            chunk_chars=self.config.chunk_chars,
            clock=self.clock,
        )


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (FixtureMissing, NetworkForbidden) as exc:
            _fail(str(exc), EXIT_FIXTURE)
        except (MalformedInput, InsufficientRecords, InvalidExamples, EmptyInput) as exc:
            _fail(str(exc), EXIT_INPUT)
        except NoSitelink as exc:
            _fail(str(exc), EXIT_ENTITY)
        except (
            EndpointUnavailable,
            ProviderUnavailable,
            QuotaExceeded,
            NoDocumentsRetrievable,
            Unavailable,
            UnavailableEverywhere,
            MalformedResponse,
        ) as exc:
            _fail(str(exc), EXIT_NETWORK)
        except (SchemaViolation, TransformFailure) as exc:
            _fail(str(exc), EXIT_INTERNAL)
        except KgVerifyError as exc:
            _fail(str(exc), 1)
        except KeyboardInterrupt:
            _fail("interrupted", 130)

    return wrapper


def _fixtures_digest(fixtures_dir: str) -> str | None:
    """Content digest of the fixture set, so a manifest pins the exact inputs."""
    root = Path(fixtures_dir)
    if not root.is_dir():
        return None
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode("utf-8"))
        digest.update(hashlib.sha256(path.read_bytes()).digest())
    return digest.hexdigest()


def _write_manifest(config: RunConfig, out_dir: Path, command: str, extra: dict | None = None) -> None:
    manifest = {
        "command": command,
        "package_version": __version__,
        "config": config.snapshot(),
        "templates": {
            RDF_TEMPLATE: template_digest(RDF_TEMPLATE),
            NLI_TEMPLATE: template_digest(NLI_TEMPLATE),
        },
        "report_schema_sha256": reporting.schema_digest(),
        "seeds": {
            "corruption": config.corruption_seed,
            "sample": config.sample_seed,
            "examples": config.example_seed,
        },
        "replay": config.replay,
        "fixtures_dir": config.fixtures_dir,
        "fixtures_sha256": _fixtures_digest(config.fixtures_dir)
        if config.fixtures_dir else None,
    }
    if extra:
        manifest.update(extra)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _write_report(
    run_id: str,
    sessions,
    summary: reporting.ReportSummary,
    out_dir: Path,
) -> tuple[Path, Path]:
    tree = reporting.build_run_xml(sessions, summary)
    xml_path = out_dir / f"{run_id}.xml"
    html_path = out_dir / f"{run_id}.html"
    out_dir.mkdir(parents=True, exist_ok=True)
    xml_bytes = reporting.serialize_xml(tree)
    xml_path.write_bytes(xml_bytes)
    html_path.write_text(reporting.render_html(xml_bytes), encoding="utf-8")
    return xml_path, html_path


def _split_duration(started: datetime, ended: datetime) -> tuple[int, int]:
    elapsed = max(0, int((ended - started).total_seconds()))
    return elapsed // 60, elapsed % 60


_CONFIG_OPTIONS = [
    click.option("--config", "config_file", type=click.Path(), default=None,
                 help="JSON config file; flags and environment override it."),
    click.option("--out", "out_dir", type=click.Path(), default=None, help="Output directory."),
    click.option("--replay/--live", "replay", default=None,
                 help="Replay recorded fixtures instead of touching the network."),
    click.option("--fixtures", "fixtures_dir", type=click.Path(), default=None,
                 help="Directory holding recorded fixtures (http/, search/, llm/)."),
    click.option("--model", default=None, help="LLM model identifier."),
    click.option("--endpoint", "sparql_endpoint", default=None, help="SPARQL endpoint URL."),
    click.option("--decision-mode", "decision_mode",
                 type=click.Choice(["precision", "recall"]), default=None,
                 help="How the middle option counts in binary decisions."),
    click.option("--fixed-clock", "fixed_clock", default=None,
                 help="Pin all timestamps to this ISO instant (for replay)."),
    click.option("--cache-dir", "cache_dir", type=click.Path(), default=None),
]


def config_options(fn):
    for option in reversed(_CONFIG_OPTIONS):
        fn = option(fn)
    return fn


def _resolve(kwargs: dict) -> RunConfig:
    config_file = kwargs.pop("config_file", None)
    overrides = {k: v for k, v in kwargs.items() if v is not None}
    return RunConfig.resolve(config_file, overrides)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Verify knowledge-graph statements against external grounding documents."""


@main.command("verify-wikidata")
@click.argument("entity")
@config_options
@click.option("--max-statements", type=int, default=None,
              help="Verify at most this many selected statements.")
@click.option("--hit-limit", type=int, default=None, help="Web-search hits per statement.")
@guarded
def cmd_verify_wikidata(entity: str, **kwargs) -> None:
    """Select a subject's unsourced statements and verify them via web search."""
    config = _resolve(kwargs)
    runtime = _Runtime(config)
    try:
        entity_id = EntityId.parse(entity)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    started = runtime.clock()

    unsourced = runtime.wikidata.fetch_unsourced_statements(entity_id)
    click.echo(f"{entity_id}: {len(unsourced)} unsourced statements", err=True)
    selected = runtime.wikidata.filter_mandatory_reference(unsourced)
    click.echo(f"{entity_id}: {len(selected)} with a mandatory-reference predicate", err=True)
    if config.max_statements is not None:
        selected = selected[: config.max_statements]

    verifier = runtime.verifier(need_search=True)
    sessions = []
    interrupted = False
    try:
        for unsourced_statement in selected:
            statement = unsourced_statement.statement
            click.echo(f"verifying: {' / '.join(statement.labels())}", err=True)
            sessions.append(verifier.verify_via_web_search(statement, config.hit_limit))
    except KeyboardInterrupt:
        interrupted = True

    info = runtime.wikidata.entity_info(entity_id)
    ended = runtime.clock()
    minutes, seconds = _split_duration(started, ended)
    summary = reporting.ReportSummary(
        llm_model=config.model,
        date=started.date(),
        time=started.time().replace(microsecond=0),
        duration_minutes=minutes,
        duration_seconds=seconds,
        subject_id=str(info.entity_id.numeric_id),
        subject_name=info.label,
        subject_url=info.entity_url,
        subject_permalink=info.permalink,
        endpoint=config.sparql_endpoint,
    )
    out_dir = Path(config.out_dir)
    run_id = f"verify-wikidata-{entity_id}"
    xml_path, html_path = _write_report(run_id, sessions, summary, out_dir)
    _write_manifest(config, out_dir, "verify-wikidata", {
        "entity": str(entity_id),
        "statements_selected": len(selected),
        "sessions": len(sessions),
        "traces": sum(len(s.traces) for s in sessions),
        "interrupted": interrupted,
    })
    click.echo(f"wrote {xml_path} and {html_path}")
    if interrupted:
        sys.exit(130)


@main.command("verify-wikipedia")
@click.argument("entity")
@click.option("--statements", "statements_file", type=click.Path(), required=True,
              help="Tab-separated statements file (subject, predicate, object, optional ids).")
@config_options
@click.option("--max-statements", type=int, default=None)
@guarded
def cmd_verify_wikipedia(entity: str, statements_file: str, **kwargs) -> None:
    """Verify designated statements through the subject's Wikipedia article."""
    config = _resolve(kwargs)
    runtime = _Runtime(config)
    try:
        entity_id = EntityId.parse(entity)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        text = Path(statements_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read statements file: {exc}") from exc
    statements = statements_from_text(text)
    if config.max_statements is not None:
        statements = statements[: config.max_statements]
    if not statements:
        raise MalformedInput(f"{statements_file}: no statements to verify")

    started = runtime.clock()
    verifier = runtime.verifier()
    sessions = []
    interrupted = False
    try:
        for statement in statements:
            click.echo(f"verifying: {' / '.join(statement.labels())}", err=True)
            sessions.append(verifier.verify_via_wikipedia(statement, entity=entity_id))
    except KeyboardInterrupt:
        interrupted = True

    info = runtime.wikidata.entity_info(entity_id)
    wikipedia_url = info.wikipedia_url
    permalink = None
    if info.wikipedia_title:
        revision = runtime.wikidata.wikipedia_revision(info.wikipedia_title)
        permalink = wikipedia_permalink(info.wikipedia_title, revision)
    ended = runtime.clock()
    minutes, seconds = _split_duration(started, ended)
    summary = reporting.ReportSummary(
        llm_model=config.model,
        date=started.date(),
        time=started.time().replace(microsecond=0),
        duration_minutes=minutes,
        duration_seconds=seconds,
        subject_id=str(info.entity_id.numeric_id),
        subject_name=info.label,
        subject_url=info.entity_url,
        subject_permalink=info.permalink,
        endpoint=config.sparql_endpoint,
        wikipedia_url=wikipedia_url,
        wikipedia_permalink=permalink,
    )
    out_dir = Path(config.out_dir)
    run_id = f"verify-wikipedia-{entity_id}"
    xml_path, html_path = _write_report(run_id, sessions, summary, out_dir)
    _write_manifest(config, out_dir, "verify-wikipedia", {
        "entity": str(entity_id),
        "statements": len(statements),
        "sessions": len(sessions),
        "traces": sum(len(s.traces) for s in sessions),
        "interrupted": interrupted,
    })
    click.echo(f"wrote {xml_path} and {html_path}")
    if interrupted:
        sys.exit(130)


@main.command("build-dataset")
@click.option("--biored", "biored_path", type=click.Path(), required=True,
              help="Directory (or single file) of the source BioC JSON distribution.")
@click.option("--seed", type=int, default=None, help="Corruption seed.")
@config_options
@guarded
def cmd_build_dataset(biored_path: str, seed: int | None, **kwargs) -> None:
    """Build the verification benchmark: positives plus corrupted negatives."""
    config = _resolve(kwargs)
    if seed is not None:
        config.corruption_seed = seed
    docs = datasets.load_biored(biored_path)
    click.echo(f"loaded {len(docs)} documents", err=True)
    positives = datasets.extract_positives(docs)
    ground_truth = datasets.GroundTruth.from_documents(docs)
    negatives, skips = datasets.generate_negatives(
        positives, ground_truth, seed=config.corruption_seed
    )
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_path = out_dir / "biored_verify.jsonl"
    datasets.write_instances(dataset_path, list(positives) + list(negatives))
    manifest = datasets.dataset_manifest(positives, negatives, skips, config.corruption_seed)
    _write_manifest(config, out_dir, "build-dataset", {"dataset": manifest})
    for relation_type, stats in manifest["relations"].items():
        click.echo(
            f"{relation_type}: {stats['positives']} positives, {stats['negatives']} negatives"
        )
    if skips:
        click.echo(f"skipped {len(skips)} positives with no usable replacement", err=True)
    click.echo(f"wrote {dataset_path}")


@main.command("evaluate")
@click.option("--dataset", "dataset_path", type=click.Path(), required=True,
              help="JSON-lines dataset: verification instances, or an SNLI split for --task nli.")
@click.option("--task", type=click.Choice(["triples", "nli"]), default="triples")
@click.option("--sample", type=int, default=None,
              help="For --task nli: evaluate this many records sampled from the split.")
@click.option("--snli-train", "snli_train", type=click.Path(), default=None,
              help="For --task nli: training split for the few-shot examples.")
@config_options
@guarded
def cmd_evaluate(dataset_path: str, task: str, sample: int | None, snli_train: str | None,
                 **kwargs) -> None:
    """Run the benchmark protocol over a dataset and emit metric tables."""
    config = _resolve(kwargs)
    runtime = _Runtime(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if task == "triples":
        results = _evaluate_triples(runtime, config, dataset_path)
    else:
        if not snli_train:
            raise click.UsageError("--task nli requires --snli-train for the example picks")
        results = _evaluate_nli(runtime, config, dataset_path, snli_train, sample)
    (out_dir / "results.json").write_text(
        json.dumps(results["json"], indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out_dir / "results.txt").write_text(results["text"] + "\n", encoding="utf-8")
    _write_manifest(config, out_dir, f"evaluate-{task}", results.get("manifest_extra", {}))
    click.echo(results["text"])


def _evaluate_triples(runtime: _Runtime, config: RunConfig, dataset_path: str) -> dict:
    instances = datasets.read_instances(dataset_path)
    if not instances:
        raise MalformedInput(f"{dataset_path}: empty dataset")
    grouped: dict[tuple[str, tuple[str, str]], list] = {}
    for instance in instances:
        prompt = render_rdf_prompt(RdfPrompt(instance.statement, instance.grounding_text))
        response = runtime.gateway.complete(prompt)
        verdict = parse_option(response.raw_text)
        predicted = verdict_to_binary(verdict, config.mode)
        grouped.setdefault((instance.relation_type, instance.concept_pair), []).append(
            (instance.gold, predicted)
        )
    tables_json: dict = {}
    text_blocks: list[str] = []
    all_counts = []
    for relation_type in datasets.RELATION_TYPES:
        rows = []
        for (rel, pair), pairs in sorted(grouped.items()):
            if rel != relation_type:
                continue
            counts = evaluation.binary_confusion(pairs)
            rows.append((pair, counts))
            all_counts.append(counts)
        if rows:
            tables_json[relation_type] = evaluation.binary_table_rows(rows)
            text_blocks.append(
                evaluation.format_binary_table(rows, title=f"Relation: {relation_type}")
            )
    overall = evaluation.micro_average(all_counts)
    metrics = evaluation.compute_metrics(overall)
    tables_json["overall"] = {
        "tp": overall.tp, "tn": overall.tn, "fp": overall.fp, "fn": overall.fn,
        "precision": evaluation.rounded_percent(metrics.precision),
        "recall": evaluation.rounded_percent(metrics.recall),
        "f1": evaluation.rounded_percent(metrics.f1),
    }
    text_blocks.append(
        "Overall (micro): precision "
        f"{evaluation.percent(metrics.precision, 1)}, recall "
        f"{evaluation.percent(metrics.recall, 1)}, F1 {evaluation.percent(metrics.f1, 1)}"
    )
    return {
        "json": tables_json,
        "text": "\n\n".join(text_blocks),
        "manifest_extra": {"instances": len(instances), "decision_mode": config.decision_mode},
    }


def _evaluate_nli(runtime: _Runtime, config: RunConfig, dataset_path: str,
                  snli_train: str, sample: int | None) -> dict:
    if sample is not None:
        records = datasets.sample_snli_test(dataset_path, n=sample, seed=config.sample_seed)
    else:
        records = datasets.load_snli(dataset_path)
    if not records:
        raise MalformedInput(f"{dataset_path}: empty dataset")
    example_records = datasets.pick_nli_example_records(snli_train, config.example_seed)
    examples = [
        NliExample(premise=r.premise, hypothesis=r.hypothesis, label=r.gold)
        for r in example_records
    ]
    outcomes: list[tuple[NliLabel, NliLabel]] = []
    for record in records:
        prompt = render_nli_prompt(record.premise, record.hypothesis, examples)
        response = runtime.gateway.complete(prompt)
        outcomes.append((record.gold, parse_nli_label(response.raw_text)))
    confusion = evaluation.tally_nli(outcomes)
    text = evaluation.format_nli_table(confusion, model_name=config.model)
    return {
        "json": {
            "matrix": [list(row) for row in confusion.matrix],
            "unparsed": confusion.unparsed,
            "accuracy": evaluation.rounded_percent(confusion.accuracy(), 1),
            "total": confusion.total,
        },
        "text": text,
        "manifest_extra": {
            "records": len(records),
            "example_pair_ids": [r.pair_id for r in example_records],
        },
    }


@main.command("report")
@click.argument("xml_file", type=click.Path(exists=True))
@config_options
@guarded
def cmd_report(xml_file: str, **kwargs) -> None:
    """Re-render the HTML report from an existing XML process trace."""
    config = _resolve(kwargs)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    xml_bytes = Path(xml_file).read_bytes()
    html = reporting.render_html(xml_bytes)
    out_path = out_dir / (Path(xml_file).stem + ".html")
    out_path.write_text(html, encoding="utf-8")
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
