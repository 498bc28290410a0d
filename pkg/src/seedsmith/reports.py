"""Report-bundle assembly and deterministic CSV/JSON emission.

All table rows are pre-formatted strings (floats to 4 decimals, absent
values as "NA"), so the CSV and JSON renderings carry identical values
and identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import __version__, textkernel
from .analytics import (
    DEFAULT_RELEVANCE_THRESHOLD,
    K_BINS,
    MODE_NORMALIZED,
    age_distribution,
    class_average_precision,
    conditional_relevance_by_k,
    estimate_publication_date,
    hostname_diversity,
    judge_relevance,
    make_age_sample,
    seeds_by_post,
    serp_overlap,
    uri_count_distribution,
)
from .corpus.fetch import Fetcher
from .corpus.model import Corpus
from .extraction import HTML_KIND, NON_HTML_KIND, seed_rows
from .goldstandard import GoldStandard, strip_boilerplate
from .htmltools import HtmlDecodingError
from .segmentation import MC, MC_MEMBER_CLASSES, partition_counts
from .stopwords import STOPWORDS_VERSION

log = logging.getLogger(__name__)

NA = "NA"
KIND_FILTERS = (("all", None), ("html", HTML_KIND), ("non_html", NON_HTML_KIND))
SCOPES = ("P1A1", "PnA1", "PnAn", "MC", "All")
DEFAULT_REFERENCE_SOURCE = "google"


def fmt(value) -> str:
    """Format one cell: floats to 4 decimals, None as NA."""
    if value is None:
        return NA
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


@dataclass
class ReportConfig:
    threshold: float = DEFAULT_RELEVANCE_THRESHOLD
    dist_mode: str = MODE_NORMALIZED
    reference_source: str = DEFAULT_REFERENCE_SOURCE
    mc_exclude_root: bool = False
    global_dedup: bool = False
    jobs: int = 1


class SeedTextProvider:
    """Supplies the text a seed is judged on.

    HTML seeds are judged on their dereferenced, boilerplate-stripped
    document; everything else on the text of the post that embedded the
    URI. Page texts are cached per canonical URI.
    """

    def __init__(self, corpus: Corpus, fetcher: Fetcher, warnings=None):
        self.corpus = corpus
        self.fetcher = fetcher
        self.warnings = warnings
        self._page_text: dict[str, str] = {}

    def __call__(self, seed) -> str:
        if seed.kind == HTML_KIND:
            return self.page_text(seed.canonical)
        post = self.corpus.posts.get(seed.provenance.post_id)
        return post.text if post else ""

    def page_text(self, uri: str) -> str:
        if uri in self._page_text:
            return self._page_text[uri]
        result = self.fetcher.dereference(uri)
        text = ""
        if result.failed or not result.ok:
            self._warn(f"seed {uri} not fetchable ({result.status}); judged on empty text")
        else:
            try:
                text = strip_boilerplate(result.body)
            except (HtmlDecodingError, ValueError) as exc:
                self._warn(f"seed {uri} unusable as HTML: {exc}")
        self._page_text[uri] = text
        return text

    def _warn(self, message):
        log.warning(message)
        if self.warnings is not None:
            self.warnings.append(message)


class RelevanceIndex:
    """Memoized per-seed relevance judgments against per-topic golds."""

    def __init__(self, golds: dict[str, GoldStandard], text_provider, threshold):
        self.golds = golds
        self.text_provider = text_provider
        self.threshold = threshold
        self._memo = {}

    def judgment(self, seed):
        gold = self.golds.get(seed.provenance.topic_id)
        if gold is None:
            return None
        if seed.kind == HTML_KIND:
            key = (seed.provenance.topic_id, seed.canonical)
        else:
            # Non-HTML seeds are judged on the embedding post's text,
            # which differs per post.
            key = (seed.provenance.topic_id, seed.provenance.post_id, seed.canonical)
        if key not in self._memo:
            self._memo[key] = judge_relevance(
                [self.text_provider(seed)], gold, self.threshold, subject=seed.canonical
            )
        return self._memo[key]


@dataclass(frozen=True)
class PostObservation:
    """Seed counts and precisions of one post within one post-class cell."""

    topic: str
    source: str
    vertical: str
    post_class: str
    post_id: str
    k: dict  # kind name -> seed count (0 when none)
    precision: dict  # kind name -> float | None


def collect_observations(collections, judge: RelevanceIndex) -> list[PostObservation]:
    observations = []
    for key in sorted(collections):
        topic, source, vertical, post_class = key
        collection = collections[key]
        by_post_all = seeds_by_post(collection, None)
        for post_id, seeds in by_post_all.items():
            ks = {}
            precs = {}
            for kind_name, kind in KIND_FILTERS:
                subset = seeds if kind is None else [s for s in seeds if s.kind == kind]
                ks[kind_name] = len(subset)
                if not subset or judge.golds.get(topic) is None:
                    precs[kind_name] = None
                    continue
                judged = [judge.judgment(s) for s in subset]
                precs[kind_name] = sum(1 for j in judged if j and j.relevant) / len(subset)
            observations.append(
                PostObservation(topic, source, vertical, post_class, post_id, ks, precs)
            )
    return observations


def _mc_label(post_class: str) -> str | None:
    return MC if post_class in MC_MEMBER_CLASSES else None


def _row_keys(collections):
    """Report row keys: every partition cell plus pooled MC cells."""
    keys = set()
    for topic, source, vertical, post_class in collections:
        keys.add((topic, source, vertical, post_class))
        mc = _mc_label(post_class)
        if mc:
            keys.add((topic, source, vertical, mc))
    return sorted(keys)


def _seeds_for_row(collections, row_key):
    """Deduped seeds of a row cell; MC rows pool their member cells."""
    topic, source, vertical, post_class = row_key
    if post_class == MC:
        member_keys = [
            k
            for k in sorted(collections)
            if k[0] == topic and k[1] == source and k[2] == vertical and k[3] in MC_MEMBER_CLASSES
        ]
    else:
        member_keys = [row_key] if row_key in collections else []
    seen = set()
    seeds = []
    for key in member_keys:
        for seed in collections[key].seeds:
            if seed.canonical in seen:
                continue
            seen.add(seed.canonical)
            seeds.append(seed)
    return seeds


def _observations_for_row(observations, row_key):
    topic, source, vertical, post_class = row_key
    if post_class == MC:
        classes = MC_MEMBER_CLASSES
    else:
        classes = (post_class,)
    return [
        o
        for o in observations
        if o.topic == topic and o.source == source and o.vertical == vertical and o.post_class in classes
    ]


def build_tables(
    corpus: Corpus,
    partition,
    mc_partition,
    collections,
    golds: dict[str, GoldStandard],
    fetcher: Fetcher,
    config: ReportConfig,
    warnings: list,
) -> dict:
    """All report tables as {name: {"header": [...], "rows": [[str]]}}."""
    provider = SeedTextProvider(corpus, fetcher, warnings)
    if config.jobs > 1:
        _prefetch_page_texts(provider, collections, config.jobs)
    judge = RelevanceIndex(golds, provider, config.threshold)
    observations = collect_observations(collections, judge)
    sources = sorted({key[1] for key in collections})
    row_keys = _row_keys(collections)
    tables = {}

    tables["partition"] = _table(
        ("topic", "source", "vertical", "post_class", "group_count", "post_count"),
        [list(map(fmt, row)) for row in partition_counts(partition)],
    )
    tables["partition_mc"] = _table(
        ("topic", "source", "vertical", "post_class", "group_count", "post_count"),
        [list(map(fmt, row)) for row in partition_counts(mc_partition)],
    )
    tables["seeds"] = _table(
        ("topic", "source", "vertical", "post_class", "canonical_uri", "kind",
         "hostname", "post_id", "retrieved_at"),
        [list(map(fmt, row)) for row in seed_rows(collections)],
    )

    for kind_name, kind in KIND_FILTERS:
        rows = []
        for source in sources:
            for scope in SCOPES:
                column = uri_count_distribution(
                    collections, source=source, scope=scope, kind=kind, mode=config.dist_mode
                )
                for bin_label in K_BINS:
                    value = column.probabilities.get(bin_label) if not column.is_na else None
                    rows.append([bin_label, source, scope, fmt(value), config.dist_mode])
        tables[f"distribution_{kind_name}"] = _table(
            ("bin", "source", "class", "probability", "mode"), rows
        )

    for kind_name, kind in KIND_FILTERS:
        rows = []
        for row_key in row_keys:
            obs = [
                o for o in _observations_for_row(observations, row_key) if o.k[kind_name] >= 1
            ]
            summary = class_average_precision(o.precision[kind_name] for o in obs)
            topic, source, vertical, post_class = row_key
            if summary is None:
                rows.append([topic, source, vertical, post_class, NA, "0", kind_name])
            else:
                rows.append(
                    [topic, source, vertical, post_class,
                     fmt(summary.average), fmt(summary.post_count), kind_name]
                )
        tables[f"precision_{kind_name}"] = _table(
            ("topic", "source", "vertical", "class", "avg_precision", "post_count", "kind"),
            rows,
        )

    for kind_name, _kind in KIND_FILTERS:
        rows = []
        for source in sources:
            for scope in SCOPES:
                if scope == "All":
                    classes = None
                elif scope == MC:
                    classes = set(MC_MEMBER_CLASSES)
                else:
                    classes = {scope}
                stats = [
                    (o.k[kind_name], o.precision[kind_name])
                    for o in observations
                    if o.source == source
                    and o.k[kind_name] >= 1
                    and (classes is None or o.post_class in classes)
                ]
                by_bin = conditional_relevance_by_k(stats)
                for bin_label in K_BINS:
                    cell = by_bin[bin_label]
                    rows.append(
                        [bin_label, source, scope, fmt(cell.average), fmt(cell.post_count), kind_name]
                    )
        tables[f"relevance_by_k_{kind_name}"] = _table(
            ("bin", "source", "class", "avg_precision", "post_count", "kind"), rows
        )

    tables["age"], tables["age_ecdf"] = _age_tables(
        collections, row_keys, judge, provider, warnings
    )
    tables["diversity"] = _diversity_table(collections, row_keys)
    tables["overlap"] = _overlap_table(collections, row_keys, config.reference_source)
    return tables


def _prefetch_page_texts(provider: SeedTextProvider, collections, jobs: int) -> None:
    """Warm the page-text cache concurrently; the fetcher serializes
    same-host requests itself. Warnings raised during the parallel phase
    are re-appended in sorted order so manifests stay deterministic."""
    from concurrent.futures import ThreadPoolExecutor

    uris = sorted(
        {
            seed.canonical
            for collection in collections.values()
            for seed in collection.seeds
            if seed.kind == HTML_KIND
        }
    )
    main_warnings = provider.warnings
    phase: list[str] = []
    provider.warnings = phase
    try:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(provider.page_text, uris))
    finally:
        provider.warnings = main_warnings
        if main_warnings is not None:
            main_warnings.extend(sorted(phase))


def _age_tables(collections, row_keys, judge: RelevanceIndex, provider: SeedTextProvider, warnings):
    """Ages of relevant HTML seeds per row cell, summary plus ECDF."""
    summary_rows = []
    ecdf_rows = []
    estimate_memo: dict[str, tuple | None] = {}

    def estimate(uri):
        if uri not in estimate_memo:
            result = provider.fetcher.dereference(uri)
            if result.failed or not result.ok:
                estimate_memo[uri] = None
            else:
                estimate_memo[uri] = estimate_publication_date(result)
        return estimate_memo[uri]

    for row_key in row_keys:
        samples = []
        for seed in _seeds_for_row(collections, row_key):
            if seed.kind != HTML_KIND:
                continue
            judgment = judge.judgment(seed)
            if judgment is None or not judgment.relevant:
                continue
            found = estimate(seed.canonical)
            if found is None:
                continue
            estimated, estimator = found
            sample = make_age_sample(seed.canonical, estimated, estimator, seed.retrieved_at)
            if sample.flagged:
                warnings.append(
                    f"seed {seed.canonical}: publication estimate {estimated} postdates "
                    "retrieval; excluded from age aggregates"
                )
            samples.append(sample)
        summary = age_distribution(samples)
        topic, source, vertical, post_class = row_key
        if summary is None:
            summary_rows.append([topic, source, vertical, post_class, NA, NA, NA, NA, NA])
            continue
        summary_rows.append(
            [topic, source, vertical, post_class,
             fmt(summary.minimum), fmt(summary.q1), fmt(summary.median),
             fmt(summary.q3), fmt(summary.maximum)]
        )
        for age_years, fraction in summary.ecdf:
            ecdf_rows.append(
                [topic, source, vertical, post_class, fmt(age_years), fmt(fraction)]
            )
    return (
        _table(("topic", "source", "vertical", "class", "min", "q1", "median", "q3", "max"),
               summary_rows),
        _table(("topic", "source", "vertical", "class", "age_years", "fraction"), ecdf_rows),
    )


def _diversity_table(collections, row_keys):
    rows = []
    for row_key in row_keys:
        seeds = _seeds_for_row(collections, row_key)
        for kind_name, kind in KIND_FILTERS:
            subset = seeds if kind is None else [s for s in seeds if s.kind == kind]
            hosts = [s.hostname for s in subset]
            value = hostname_diversity(hosts)
            topic, source, vertical, post_class = row_key
            rows.append(
                [topic, source, vertical, post_class, kind_name,
                 fmt(value), fmt(len(subset)), fmt(len(set(hosts)))]
            )
    return _table(
        ("topic", "source", "vertical", "class", "kind", "diversity", "seed_count", "host_count"),
        rows,
    )


def _overlap_table(collections, row_keys, reference_source):
    reference_by_topic: dict[str, set] = {}
    for key in sorted(collections):
        topic, source, _vertical, _post_class = key
        if source == reference_source:
            reference_by_topic.setdefault(topic, set()).update(
                collections[key].canonical_uris
            )
    rows = []
    for row_key in row_keys:
        topic, source, vertical, post_class = row_key
        if source == reference_source or topic not in reference_by_topic:
            continue
        candidate = {s.canonical for s in _seeds_for_row(collections, row_key)}
        reference = reference_by_topic[topic]
        value = serp_overlap(reference, candidate)
        rows.append(
            [topic, source, vertical, post_class,
             fmt(value), fmt(len(candidate)), fmt(len(reference))]
        )
    return _table(
        ("topic", "source", "vertical", "class", "overlap", "candidate_count", "reference_count"),
        rows,
    )


def _table(header, rows) -> dict:
    return {"header": list(header), "rows": rows}


# ---------------------------------------------------------------------------
# Bundle emission
# ---------------------------------------------------------------------------


def build_manifest(config_echo: dict, warnings, counts: dict) -> dict:
    return {
        "tool": "seedsmith",
        "version": __version__,
        "kernel": textkernel.IMPLEMENTATION,
        "stopwords_version": STOPWORDS_VERSION,
        "config": config_echo,
        "counts": counts,
        "warnings": list(warnings),
        "warning_count": len(warnings),
    }


def write_bundle(bundle: dict, out_dir, formats=("csv",)) -> list[Path]:
    """Write the report bundle; returns the created file paths.

    ``bundle`` is {"tables": ..., "manifest": ...}. CSV emission writes
    one file per table plus manifest.json and bundle.json; JSON emission
    writes report.json carrying the same values.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    created = []

    path = out_dir / "bundle.json"
    path.write_text(json.dumps(bundle, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    created.append(path)
    path = out_dir / "manifest.json"
    path.write_text(
        json.dumps(bundle["manifest"], ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    created.append(path)

    if "csv" in formats:
        for name in sorted(bundle["tables"]):
            table = bundle["tables"][name]
            path = out_dir / f"{name}.csv"
            with path.open("w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(table["header"])
                writer.writerows(table["rows"])
            created.append(path)
    if "json" in formats:
        path = out_dir / "report.json"
        path.write_text(
            json.dumps(bundle["tables"], ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        created.append(path)
    return created
