"""Collection measures: URI-count distributions, relevance/precision,
webpage ages, hostname diversity, and overlap with a reference SERP.

Everything here is a pure function over immutable inputs; the reports
module assembles these into the exported tables.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from email.utils import parsedate_to_datetime
from urllib.parse import urlsplit

from . import textkernel
from .corpus.fetch import FetchResult
from .extraction import SeedCollection, SeedUri
from .goldstandard import GoldStandard, TermVector, build_term_vector
from .htmltools import HtmlDecodingError, decode_html, find_meta, parse_html
from .segmentation import BASE_CLASSES, MC, MC_MEMBER_CLASSES

DEFAULT_RELEVANCE_THRESHOLD = 0.25

K_BINS = ("1", "2", "3-4", "5+")

MODE_NORMALIZED = "normalized"
MODE_LITERAL = "literal"

DAYS_PER_YEAR = 365.25


# ---------------------------------------------------------------------------
# Relevance and precision
# ---------------------------------------------------------------------------


def cosine_similarity(a, b) -> float:
    """Cosine of two term vectors (TermVector or plain term->weight maps).

    Empty vectors yield 0. Invariant under positive rescaling of either
    side.
    """
    wa = a.weights if isinstance(a, TermVector) else a
    wb = b.weights if isinstance(b, TermVector) else b
    return textkernel.sparse_cosine(wa, wb)


@dataclass(frozen=True)
class RelevanceJudgment:
    subject: str | None
    cosine: float
    relevant: bool
    threshold: float
    empty: bool = False  # candidate had no usable text


def judge_relevance(
    candidate_texts,
    gold: GoldStandard,
    threshold: float = DEFAULT_RELEVANCE_THRESHOLD,
    subject: str | None = None,
) -> RelevanceJudgment:
    """Judge the concatenation of ``candidate_texts`` against a topic's
    gold standard. Relevance requires the cosine to strictly exceed the
    threshold, so a score exactly at the threshold is non-relevant.
    """
    vector = build_term_vector(candidate_texts, normalize=True)
    if vector.is_empty():
        return RelevanceJudgment(subject, 0.0, False, threshold, empty=True)
    cos = cosine_similarity(vector, gold.vector)
    return RelevanceJudgment(subject, cos, cos > threshold, threshold)


def post_precision(
    post_seeds,
    gold: GoldStandard,
    text_for_seed,
    threshold: float = DEFAULT_RELEVANCE_THRESHOLD,
) -> float | None:
    """Fraction of a post's seeds judged relevant.

    ``text_for_seed`` supplies the judged text per seed: the
    dereferenced, boilerplate-stripped document for HTML seeds and the
    embedding post's text for non-HTML ones. A post without seeds has no
    precision (None), it is skipped rather than scored zero.
    """
    seeds = list(post_seeds)
    if not seeds:
        return None
    relevant = 0
    for seed in seeds:
        text = text_for_seed(seed) or ""
        if judge_relevance([text], gold, threshold, subject=seed.canonical).relevant:
            relevant += 1
    return relevant / len(seeds)


@dataclass(frozen=True)
class PrecisionSummary:
    average: float
    post_count: int


def class_average_precision(per_post_precisions) -> PrecisionSummary | None:
    """Unweighted mean of per-post precision values.

    ``per_post_precisions`` holds one value per contributing post (posts
    without seeds are already excluded). Returns None when nothing
    contributed, which reports render as NA.
    """
    values = [p for p in per_post_precisions if p is not None]
    if not values:
        return None
    return PrecisionSummary(sum(values) / len(values), len(values))


def seeds_by_post(collection: SeedCollection, kind: str | None = None) -> dict[str, list[SeedUri]]:
    """Each post's own seeds (per-post stream, not collection-deduped),
    only posts with >= 1 seed of the requested kind. Insertion order
    follows the collection."""
    grouped: dict[str, list[SeedUri]] = {}
    for seed in collection.post_seeds:
        if kind is not None and seed.kind != kind:
            continue
        grouped.setdefault(seed.provenance.post_id, []).append(seed)
    return grouped


# ---------------------------------------------------------------------------
# URI-count probability distributions
# ---------------------------------------------------------------------------


def k_bin(k: int) -> str:
    if k <= 0:
        raise ValueError("k bins cover link-bearing posts only (k >= 1)")
    if k == 1:
        return "1"
    if k == 2:
        return "2"
    if k <= 4:
        return "3-4"
    return "5+"


def _scope_classes(scope: str):
    if scope == "All":
        return None  # wildcard over the classes present
    if scope == MC:
        return set(MC_MEMBER_CLASSES) | {MC}
    if scope in BASE_CLASSES:
        return {scope}
    raise ValueError(f"unknown scope {scope!r}; expected one of {BASE_CLASSES}, 'MC', 'All'")


@dataclass(frozen=True)
class DistributionColumn:
    source: str
    scope: str  # post class, "MC", or "All"
    kind: str | None
    mode: str
    probabilities: dict[str, float]  # bin -> probability; empty means NA
    post_count: int  # pooled link-bearing post occurrences
    topic_count: int

    @property
    def is_na(self) -> bool:
        return not self.probabilities


def uri_count_distribution(
    collections,
    *,
    source: str,
    scope: str = "All",
    kind: str | None = None,
    mode: str = MODE_NORMALIZED,
) -> DistributionColumn:
    """Probability that a link-bearing post of the scope has k URIs.

    Only posts with at least one URI of the requested kind count, and a
    post contributes once per post-class cell it belongs to. Two modes:

    - normalized (default): pooled counts over all topics, so the column
      sums to 1;
    - literal: the per-topic fractions are summed as the printed formula
      states, so the column sums to the number of contributing topics.
    """
    if mode not in (MODE_NORMALIZED, MODE_LITERAL):
        raise ValueError(f"unknown mode {mode!r}")
    classes = _scope_classes(scope)
    per_topic: dict[str, list[int]] = {}
    for key in sorted(collections):
        topic, cell_source, _vertical, post_class = key
        if cell_source != source:
            continue
        if classes is not None and post_class not in classes:
            continue
        for _post_id, seeds in seeds_by_post(collections[key], kind).items():
            per_topic.setdefault(topic, []).append(len(seeds))

    pooled = sum(len(ks) for ks in per_topic.values())
    if pooled == 0:
        return DistributionColumn(source, scope, kind, mode, {}, 0, 0)

    probabilities = {}
    for bin_label in K_BINS:
        if mode == MODE_LITERAL:
            value = sum(
                sum(1 for k in ks if k_bin(k) == bin_label) / len(ks)
                for ks in per_topic.values()
            )
        else:
            value = (
                sum(sum(1 for k in ks if k_bin(k) == bin_label) for ks in per_topic.values())
                / pooled
            )
        probabilities[bin_label] = value
    return DistributionColumn(
        source, scope, kind, mode, probabilities, pooled, len(per_topic)
    )


@dataclass(frozen=True)
class KBinPrecision:
    bin: str
    average: float | None  # None means NA (empty cell)
    post_count: int


def conditional_relevance_by_k(post_stats) -> dict[str, KBinPrecision]:
    """Mean per-post precision grouped by the post's URI-count bin.

    ``post_stats`` is an iterable of (k, precision) pairs, one per
    link-bearing post occurrence. Bins nobody fell in come back as NA.
    """
    buckets: dict[str, list[float]] = {label: [] for label in K_BINS}
    for k, precision in post_stats:
        if precision is None:
            continue
        buckets[k_bin(k)].append(precision)
    out = {}
    for label in K_BINS:
        values = buckets[label]
        if values:
            out[label] = KBinPrecision(label, sum(values) / len(values), len(values))
        else:
            out[label] = KBinPrecision(label, None, 0)
    return out


# ---------------------------------------------------------------------------
# Publication dates and ages
# ---------------------------------------------------------------------------

_ISO_DATE_PREFIX_RE = re.compile(r"^\s*(\d{4})-(\d{2})-(\d{2})")
_PATH_DATE_RE = re.compile(r"/((?:19|20)\d{2})/(\d{1,2})(?:/(\d{1,2}))?(?=/|$)")

# Meta attribute values that announce a publication timestamp, tried in
# this order before generic name-based fields.
_META_PROPERTY_FIELDS = ("article:published_time", "og:article:published_time", "article:published")
_META_NAME_FIELDS = (
    "date",
    "pubdate",
    "publishdate",
    "publish-date",
    "published-date",
    "publication_date",
    "dc.date",
    "dc.date.issued",
    "sailthru.date",
    "parsely-pub-date",
    "article.published",
    "timestamp",
)


def _parse_iso_date(value) -> date | None:
    if not isinstance(value, str):
        return None
    m = _ISO_DATE_PREFIX_RE.match(value)
    if not m:
        return None
    try:
        return date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    except ValueError:
        return None


def _jsonld_published(node) -> str | None:
    if isinstance(node, dict):
        for field in ("datePublished", "dateCreated"):
            if field in node:
                return node[field]
        for value in node.values():
            found = _jsonld_published(value)
            if found:
                return found
    elif isinstance(node, list):
        for item in node:
            found = _jsonld_published(item)
            if found:
                return found
    return None


def date_from_metadata(fetch: FetchResult) -> date | None:
    """Publication date from document metadata (meta tags, time elements,
    embedded JSON-LD), in a fixed priority order."""
    try:
        root = parse_html(decode_html(fetch.body))
    except HtmlDecodingError:
        return None
    metas = find_meta(root)

    for wanted in _META_PROPERTY_FIELDS:
        for meta in metas:
            if meta.get("property", "").lower() == wanted:
                found = _parse_iso_date(meta.get("content", ""))
                if found:
                    return found
    for meta in metas:
        if meta.get("itemprop", "").lower() == "datepublished":
            found = _parse_iso_date(meta.get("content", ""))
            if found:
                return found
    for el in root.iter_tag("time"):
        if "pubdate" in el.attrs or el.attrs.get("itemprop", "").lower() == "datepublished":
            found = _parse_iso_date(el.attrs.get("datetime", ""))
            if found:
                return found
    for el in root.iter_tag("script"):
        if el.attrs.get("type", "").lower() != "application/ld+json":
            continue
        raw = "".join(c for c in el.children if isinstance(c, str))
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError:
            continue
        found = _parse_iso_date(_jsonld_published(payload))
        if found:
            return found
    for wanted in _META_NAME_FIELDS:
        for meta in metas:
            if meta.get("name", "").lower() == wanted:
                found = _parse_iso_date(meta.get("content", ""))
                if found:
                    return found
    return None


def date_from_uri_path(fetch: FetchResult) -> date | None:
    """Publication date from a /YYYY/MM/DD/ or /YYYY/MM/ path pattern."""
    path = urlsplit(fetch.final_uri).path
    m = _PATH_DATE_RE.search(path)
    if not m:
        return None
    year, month = int(m.group(1)), int(m.group(2))
    day = int(m.group(3)) if m.group(3) else 1
    try:
        return date(year, month, day)
    except ValueError:
        return None


def date_from_last_modified(fetch: FetchResult) -> date | None:
    raw = fetch.headers.get("last-modified")
    if not raw:
        return None
    try:
        return parsedate_to_datetime(raw).date()
    except (TypeError, ValueError):
        return None


DEFAULT_DATE_ESTIMATORS = (
    ("metadata", date_from_metadata),
    ("uri-path", date_from_uri_path),
    ("last-modified", date_from_last_modified),
)


def estimate_publication_date(fetch: FetchResult, estimators=None):
    """First estimator in the chain that produces a date wins.

    Returns (date, estimator_name) or None. The chain is pluggable so an
    external dating service can be swapped in.
    """
    for name, estimator in estimators or DEFAULT_DATE_ESTIMATORS:
        found = estimator(fetch)
        if found is not None:
            return found, name
    return None


@dataclass(frozen=True)
class AgeSample:
    seed_id: str
    publication_date: date
    estimator: str
    retrieved_at: datetime
    age_days: float
    flagged: bool  # estimate postdates retrieval; excluded from aggregates


def make_age_sample(seed_id, publication_date, estimator, retrieved_at) -> AgeSample:
    """Age = retrieval time minus publication date, in days. Negative ages
    (estimator noise) are flagged."""
    published = datetime(
        publication_date.year,
        publication_date.month,
        publication_date.day,
        tzinfo=timezone.utc,
    )
    age_days = (retrieved_at - published) / timedelta(days=1)
    return AgeSample(
        seed_id=seed_id,
        publication_date=publication_date,
        estimator=estimator,
        retrieved_at=retrieved_at,
        age_days=age_days,
        flagged=age_days < 0,
    )


def _quantile(values, q: float) -> float:
    """Linear-interpolation quantile over a sorted list."""
    n = len(values)
    if n == 1:
        return values[0]
    pos = q * (n - 1)
    lo = int(pos)
    frac = pos - lo
    if lo + 1 < n:
        return values[lo] + (values[lo + 1] - values[lo]) * frac
    return values[lo]


@dataclass(frozen=True)
class AgeSummary:
    minimum: float  # all values in years
    q1: float
    median: float
    q3: float
    maximum: float
    sample_count: int
    ecdf: tuple[tuple[float, float], ...]  # (age_years, fraction <=)


def age_distribution(samples) -> AgeSummary | None:
    """Five-number summary plus ECDF of non-flagged sample ages, in years.

    Quartiles use linear interpolation. Returns None (NA) when every
    sample is flagged.
    """
    ages = sorted(s.age_days / DAYS_PER_YEAR for s in samples if not s.flagged)
    if not ages:
        return None
    n = len(ages)
    ecdf = []
    for i, value in enumerate(ages, start=1):
        if i == n or ages[i] != value:
            ecdf.append((value, i / n))
    return AgeSummary(
        minimum=ages[0],
        q1=_quantile(ages, 0.25),
        median=_quantile(ages, 0.5),
        q3=_quantile(ages, 0.75),
        maximum=ages[-1],
        sample_count=n,
        ecdf=tuple(ecdf),
    )


# ---------------------------------------------------------------------------
# Hostname diversity and SERP overlap
# ---------------------------------------------------------------------------


def hostname_diversity(collection, kind: str | None = None) -> float | None:
    """How spread over distinct hosts a collection is, in [0, 1].

    0 means every seed shares one host, 1 means all hosts are distinct:
    (U - 1) / (N - 1) for N deduped seeds over U hosts. Collections with
    fewer than two seeds have no meaningful value (None, reported NA).
    """
    if isinstance(collection, SeedCollection):
        hosts = [s.hostname for s in collection.of_kind(kind)]
    else:
        hosts = list(collection)
    n = len(hosts)
    if n < 2:
        return None
    return (len(set(hosts)) - 1) / (n - 1)


def serp_overlap(reference, candidate) -> float | None:
    """Fraction of candidate seeds also present in the reference (web
    SERP) collection, over canonical URIs.

    Measures how discoverable the candidate's seeds were via the
    reference engine. Empty candidates have no value (None/NA).
    """
    ref = reference.canonical_uris if isinstance(reference, SeedCollection) else set(reference)
    cand = candidate.canonical_uris if isinstance(candidate, SeedCollection) else set(candidate)
    if not cand:
        return None
    return len(ref & cand) / len(cand)
