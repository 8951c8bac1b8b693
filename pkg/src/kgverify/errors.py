"""Exception hierarchy shared across the pipeline.

Retryable conditions (endpoint hiccups, provider quota) are distinct from
permanent ones (malformed payloads, unsupported media) so callers can decide
whether to back off or give up.
"""


class KgVerifyError(Exception):
    """Base class for all errors raised by this package."""


class EndpointUnavailable(KgVerifyError):
    """A SPARQL or API endpoint could not be reached; retryable."""


class MalformedResponse(KgVerifyError):
    """An endpoint answered with a payload we cannot interpret.

    The message includes an excerpt of the offending response.
    """


class NoSitelink(KgVerifyError):
    """The entity has no English Wikipedia article linked to it."""


class ProviderUnavailable(KgVerifyError):
    """A search or LLM provider failed transiently; retryable."""


class QuotaExceeded(KgVerifyError):
    """The search provider rejected the request for quota reasons; retryable."""


class UnsupportedMediaType(KgVerifyError):
    """The fetched resource is not HTML (e.g. a PDF)."""


class Unavailable(KgVerifyError):
    """The resource could not be fetched directly (HTTP error or timeout)."""


class UnavailableEverywhere(KgVerifyError):
    """Neither the live resource nor an archived snapshot exists."""


class NoDocumentsRetrievable(KgVerifyError):
    """Every candidate grounding document failed to fetch."""


class ContextOverflow(KgVerifyError):
    """The prompt exceeds the model's configured input budget."""


class FixtureMissing(KgVerifyError):
    """A recorded fixture or replay entry is absent for this request."""


class NetworkForbidden(KgVerifyError):
    """An outbound network call was attempted while replay mode is active."""


class MalformedInput(KgVerifyError):
    """An input file (dataset, statements list) violates its format."""


class InsufficientRecords(KgVerifyError):
    """A dataset split is too small for the requested sample."""


class InvalidExamples(KgVerifyError):
    """A few-shot example set does not contain exactly one record per class."""


class EmptyInput(KgVerifyError):
    """An operation that needs at least one element received none."""


class SchemaViolation(KgVerifyError):
    """Generated XML failed validation against the bundled schema."""


class TransformFailure(KgVerifyError):
    """The report stylesheet could not be applied to the document."""
