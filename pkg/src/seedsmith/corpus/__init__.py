"""Corpus data model, JSONL persistence, and the polite fetch layer."""

from .fetch import (
    CACHE_ENV,
    DEFAULT_CACHE_DIR,
    FetchError,
    FetchPolicy,
    FetchResult,
    Fetcher,
    FixtureTransport,
    HttpTransport,
    TransportError,
    fixture_filename,
    write_fixture,
)
from .jsonl import CorpusFormatError, load_corpus, write_corpus
from .model import (
    Corpus,
    CorpusError,
    CorpusIntegrityError,
    CorpusValidationError,
    Post,
    TopicSpec,
    build_corpus,
    format_timestamp,
    parse_timestamp,
)
from .threads import (
    FixtureThreadAdapter,
    ThreadAdapterError,
    UnsupportedSourceError,
    expand_thread,
    moments_query,
)

__all__ = [
    "CACHE_ENV",
    "DEFAULT_CACHE_DIR",
    "Corpus",
    "CorpusError",
    "CorpusFormatError",
    "CorpusIntegrityError",
    "CorpusValidationError",
    "FetchError",
    "FetchPolicy",
    "FetchResult",
    "Fetcher",
    "FixtureThreadAdapter",
    "FixtureTransport",
    "HttpTransport",
    "Post",
    "ThreadAdapterError",
    "TopicSpec",
    "TransportError",
    "UnsupportedSourceError",
    "build_corpus",
    "expand_thread",
    "fixture_filename",
    "format_timestamp",
    "load_corpus",
    "moments_query",
    "parse_timestamp",
    "write_corpus",
    "write_fixture",
]
