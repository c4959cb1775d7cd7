"""Sweep orchestration: texts x sizes x stopword settings x strategies
x edge fractions, with shuffled baselines, content-hash caching, and
deterministic CSV reports.

Work is split into one task per (dataset role, text, size, stopword
setting).  A task preprocesses its text, generates the shuffled
replicas, enriches every (strategy, fraction) cell for the original
and each replica, computes metric vectors (through the cache), and
normalizes the original against its replicas.  Tasks share nothing
but immutable inputs, so any worker count yields byte-identical
reports after the final deterministic sort.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path

from . import corpus, embeddings, metrics, network, stats
from .metrics import METRIC_NAMES, SUMMARY_NAMES

CACHE_VERSION = 1

ROLE_ANALYSIS = "analysis"
ROLE_SYNTAX = "syntax"
ROLE_SEMANTICS = "semantics"

RECORDS_HEADER = (
    "text_id,dataset_tag,language,size,stopwords,strategy,P,metric,"
    "summary,x_raw,mu_r,sigma_r,x_norm,eps,d,informative,flags"
)
INFO_HEADER = (
    "size,stopwords,strategy,P,metric,summary,I,n_t,n_informative,"
    "n_undefined"
)
VAR_HEADER = (
    "size,stopwords,strategy,P,metric,summary,v_syntax,v_semantics,"
    "v_ratio,syntax_dominant"
)


class ConfigError(ValueError):
    """Invalid run configuration; aborts before any work."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one sweep needs; validated before any work starts."""

    manifest: str | None = None
    syntax_manifest: str | None = None
    semantics_manifest: str | None = None
    sizes: tuple[int, ...] = (200, 400, 800, 1000)
    stopword_settings: tuple[bool, ...] = (False,)
    strategies: tuple[str, ...] = ("original", "global", "local")
    fractions: tuple[float, ...] = (0.0, 25.0, 50.0, 75.0, 100.0)
    replicas: int = 10
    seed: int = 0
    embeddings: str = "synthetic:0"
    embedding_dim: int = 300
    out: str = "out"
    workers: int = 1
    signed_distance: bool = False
    sample_std: bool = False
    variability_from_raw: bool = False
    filter_before_truncate: bool = False
    damping: float = 0.85
    stopword_dir: str | None = None
    cache_dir: str | None = None

    def validate(self) -> None:
        if not any(
            (self.manifest, self.syntax_manifest, self.semantics_manifest)
        ):
            raise ConfigError("no input manifest configured")
        if not self.sizes:
            raise ConfigError("sizes must be non-empty")
        for n in self.sizes:
            if n < 1:
                raise ConfigError(f"sizes must be positive, got {n}")
        if not self.fractions:
            raise ConfigError("fractions must be non-empty")
        for p in self.fractions:
            if not 0.0 <= p <= 100.0:
                raise ConfigError(f"fractions must be in [0, 100], got {p}")
        if self.replicas < 2:
            raise ConfigError(
                f"replica count must be >= 2, got {self.replicas}"
            )
        if not self.strategies:
            raise ConfigError("strategies must be non-empty")
        for s in self.strategies:
            if s not in network.STRATEGIES:
                raise ConfigError(f"unknown strategy {s!r}")
        if not self.stopword_settings:
            raise ConfigError("stopword settings must be non-empty")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not 0.0 < self.damping < 1.0:
            raise ConfigError(
                f"damping must be in (0, 1), got {self.damping}"
            )
        if self.embedding_dim < 1:
            raise ConfigError(
                f"embedding_dim must be >= 1, got {self.embedding_dim}"
            )
        parse_embedding_source(self.embeddings)

    def resolved_cache_dir(self) -> str:
        return self.cache_dir or str(Path(self.out) / "cache")


def parse_embedding_source(source: str) -> tuple[int, int] | None:
    """`synthetic:<seed>` -> (seed, placeholder dim); a path -> None."""
    if source.startswith("synthetic:"):
        tail = source.split(":", 1)[1]
        try:
            return (int(tail), 0)
        except ValueError:
            raise ConfigError(
                f"bad synthetic embedding seed {tail!r} in {source!r}"
            ) from None
    if not source:
        raise ConfigError("embeddings source must not be empty")
    return None


@dataclass(frozen=True)
class RunParams:
    """The per-task slice of RunConfig (picklable, no paths to outputs)."""

    replicas: int
    seed: int
    fractions: tuple[float, ...]
    strategies: tuple[str, ...]
    signed_distance: bool
    ddof: int
    damping: float
    filter_before_truncate: bool
    stopword_dir: str | None
    cache_dir: str | None
    synthetic: tuple[int, int] | None  # (seed, dim) or None for file tables


@dataclass(eq=False)
class TaskSpec:
    role: str
    text_id: str
    path: str
    language: str
    dataset_tag: str
    size: int
    filter_stopwords: bool
    params: RunParams
    table: embeddings.EmbeddingTable | None  # pre-sliced file table

    @property
    def stopwords_label(self) -> str:
        return "filter" if self.filter_stopwords else "keep"


@dataclass
class RunRecord:
    """One output row: a (text, cell, metric, summary) measurement."""

    text_id: str
    dataset_tag: str
    language: str
    size: int
    stopwords: str
    strategy: str
    p: float
    metric: str
    summary: str
    x_raw: float | None
    mu_r: float | None
    sigma_r: float | None
    x_norm: float | None
    eps: float | None
    d: float | None
    informative: bool | None
    flags: str

    def sort_key(self):
        return (
            self.text_id, self.dataset_tag, self.language, self.size,
            self.stopwords, self.strategy, self.p, self.metric,
            self.summary,
        )


@dataclass
class TaskResult:
    role: str
    text_id: str
    size: int
    stopwords: str
    records: list[RunRecord]
    failure: str | None = None


@dataclass
class InfoRow:
    size: int
    stopwords: str
    strategy: str
    p: float
    metric: str
    summary: str
    entry: stats.InformativenessEntry

    def sort_key(self):
        return (
            self.size, self.stopwords, self.strategy, self.p, self.metric,
            self.summary,
        )


@dataclass
class VarRow:
    size: int
    stopwords: str
    strategy: str
    p: float
    metric: str
    summary: str
    entry: stats.VariabilityEntry

    def sort_key(self):
        return (
            self.size, self.stopwords, self.strategy, self.p, self.metric,
            self.summary,
        )


@dataclass
class PipelineResult:
    records: list[tuple[str, RunRecord]]  # (role, record), sorted
    informativeness: list[InfoRow]
    variability: list[VarRow]
    failures: list[TaskResult]


def cell_list(params: RunParams) -> list[tuple[str, float]]:
    """The (strategy, P) cells every text is swept through.

    The original strategy has no enrichment knob, so it contributes a
    single P=0 cell; global and local contribute one cell per
    configured fraction.
    """
    cells: list[tuple[str, float]] = []
    if network.STRATEGY_ORIGINAL in params.strategies:
        cells.append((network.STRATEGY_ORIGINAL, 0.0))
    for strategy in (network.STRATEGY_GLOBAL, network.STRATEGY_LOCAL):
        if strategy in params.strategies:
            cells.extend((strategy, p) for p in params.fractions)
    return cells


def _cache_path(cache_dir: str, key: str) -> Path:
    return Path(cache_dir) / key[:2] / f"{key}.json"


def _cache_load(cache_dir: str | None, key: str) -> metrics.MetricVector | None:
    if cache_dir is None:
        return None
    path = _cache_path(cache_dir, key)
    try:
        with open(path, encoding="utf-8") as fh:
            return metrics.MetricVector.from_json_dict(json.load(fh))
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(
    cache_dir: str | None, key: str, vector: metrics.MetricVector
) -> None:
    if cache_dir is None:
        return
    path = _cache_path(cache_dir, key)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.{os.getpid()}.tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(vector.to_json_dict(), fh)
    os.replace(tmp, path)


def _metric_vector_cached(
    net: network.CoocNetwork,
    top: metrics.TopWords,
    params: RunParams,
    local_cache: dict,
) -> metrics.MetricVector:
    index = {w: i for i, w in enumerate(net.words)}
    picks = tuple(index[w] for w in top.words if w in index)
    key = network.union_graph_hash(
        net, extra=(CACHE_VERSION, picks, params.damping)
    )
    hit = local_cache.get(key)
    if hit is not None:
        return hit
    hit = _cache_load(params.cache_dir, key)
    if hit is None:
        hit = metrics.compute_metric_vector(
            net, top=top, damping=params.damping
        )
        _cache_store(params.cache_dir, key, hit)
    local_cache[key] = hit
    return hit


def _undefined_records(spec: TaskSpec, message: str) -> list[RunRecord]:
    """A full set of undefined rows for a failed task, flags carrying why."""
    rows = []
    for strategy, p in cell_list(spec.params):
        for metric in METRIC_NAMES:
            for summary in SUMMARY_NAMES:
                rows.append(RunRecord(
                    text_id=spec.text_id,
                    dataset_tag=spec.dataset_tag,
                    language=spec.language,
                    size=spec.size,
                    stopwords=spec.stopwords_label,
                    strategy=strategy,
                    p=p,
                    metric=metric,
                    summary=summary,
                    x_raw=None, mu_r=None, sigma_r=None, x_norm=None,
                    eps=None, d=None, informative=None,
                    flags=f"task-failed:{message}",
                ))
    return rows


def run_task(spec: TaskSpec) -> TaskResult:
    """Process one (text, size, stopword setting) through every cell."""
    try:
        records = _run_task_inner(spec)
        return TaskResult(
            role=spec.role, text_id=spec.text_id, size=spec.size,
            stopwords=spec.stopwords_label, records=records,
        )
    except Exception as exc:  # per-text isolation: the sweep survives
        message = f"{type(exc).__name__}: {exc}"
        return TaskResult(
            role=spec.role, text_id=spec.text_id, size=spec.size,
            stopwords=spec.stopwords_label,
            records=_undefined_records(spec, message),
            failure=message,
        )


def _run_task_inner(spec: TaskSpec) -> list[RunRecord]:
    params = spec.params
    raw = Path(spec.path).read_text(encoding="utf-8")
    doc = corpus.preprocess(
        raw, spec.language, filter_stopwords=False, text_id=spec.text_id
    )
    stop = (
        corpus.load_stopwords(spec.language, params.stopword_dir)
        if spec.filter_stopwords
        else frozenset()
    )
    if spec.filter_stopwords and params.filter_before_truncate:
        doc = corpus.remove_stopwords(doc, stop)
    truncated = corpus.truncate(doc, spec.size)
    short = truncated.requested_size is not None
    final = (
        corpus.remove_stopwords(truncated, stop)
        if spec.filter_stopwords and not params.filter_before_truncate
        else truncated
    )

    shuffles = corpus.make_shuffles(
        final, count=params.replicas, seed=params.seed
    )
    docs = [shuffles.original, *shuffles.replicas]
    if spec.table is not None:
        table = spec.table
    else:
        seed, dim = params.synthetic
        table = embeddings.synthetic_table(
            set(final.tokens), dim=dim, seed=seed
        )

    nets = [network.build_cooc(d) for d in docs]
    cand_lists = [network.candidates(n, table) for n in nets]
    top = metrics.top_words(nets[0])

    cells = cell_list(params)
    local_cache: dict = {}
    vectors: dict[tuple[int, int], metrics.MetricVector] = {}
    shortfall: dict[int, bool] = {}
    for ci, (strategy, p) in enumerate(cells):
        cfg = network.EnrichmentConfig(strategy=strategy, fraction=p)
        for di, (net, cands) in enumerate(zip(nets, cand_lists)):
            enriched = network.enrich(net, cands, cfg)
            if di == 0 and strategy != network.STRATEGY_ORIGINAL:
                quota = network.virtual_edge_quota(net.n_cooc_edges, p)
                shortfall[ci] = len(enriched.virtual_edges) < quota
            vectors[(di, ci)] = _metric_vector_cached(
                enriched, top, params, local_cache
            )

    records = []
    n_docs = len(docs)
    for ci, (strategy, p) in enumerate(cells):
        base_flags = []
        if short:
            base_flags.append("short-document")
        if shortfall.get(ci):
            base_flags.append("candidate-shortfall")
        original = vectors[(0, ci)]
        for metric in METRIC_NAMES:
            for summary in SUMMARY_NAMES:
                x_raw = original.get(metric, summary)
                baseline = [
                    vectors[(di, ci)].get(metric, summary)
                    for di in range(1, n_docs)
                ]
                nm = stats.normalize(
                    x_raw, baseline,
                    signed=params.signed_distance, ddof=params.ddof,
                )
                flags = list(base_flags)
                n_missing = sum(1 for b in baseline if b is None)
                if n_missing:
                    flags.append(f"baseline-undefined:{n_missing}")
                if nm.reason:
                    detail = (
                        original.reasons.get((metric, summary), "")
                        if x_raw is None
                        else ""
                    )
                    suffix = f" ({detail})" if detail else ""
                    flags.append(f"undefined:{nm.reason}{suffix}")
                records.append(RunRecord(
                    text_id=spec.text_id,
                    dataset_tag=spec.dataset_tag,
                    language=spec.language,
                    size=spec.size,
                    stopwords=spec.stopwords_label,
                    strategy=strategy,
                    p=p,
                    metric=metric,
                    summary=summary,
                    x_raw=nm.x_raw,
                    mu_r=nm.baseline_mean,
                    sigma_r=nm.baseline_std,
                    x_norm=nm.x_norm,
                    eps=nm.eps,
                    d=nm.d,
                    informative=nm.informative,
                    flags=";".join(flags),
                ))
    return records


def _load_role_manifests(config: RunConfig):
    roles = []
    for role, path in (
        (ROLE_ANALYSIS, config.manifest),
        (ROLE_SYNTAX, config.syntax_manifest),
        (ROLE_SEMANTICS, config.semantics_manifest),
    ):
        if path is None:
            continue
        try:
            roles.append((role, corpus.load_manifest(path)))
        except (corpus.ManifestError, OSError) as exc:
            raise ConfigError(f"{role} manifest: {exc}") from exc
    return roles


def _entry_vocabularies(roles) -> dict[str, set[str]]:
    """Unfiltered full-text vocabulary per manifest entry path.

    This superset covers every truncation and stopword variant, so
    one pass suffices for embedding restriction.  Unreadable texts
    yield an empty vocabulary here and fail properly inside their
    tasks.
    """
    vocabs: dict[str, set[str]] = {}
    for _, manifest in roles:
        for entry in manifest.entries:
            if entry.path in vocabs:
                continue
            try:
                raw = Path(entry.path).read_text(encoding="utf-8")
                vocabs[entry.path] = set(corpus.tokenize(raw))
            except (OSError, UnicodeDecodeError):
                vocabs[entry.path] = set()
    return vocabs


def build_tasks(config: RunConfig) -> list[TaskSpec]:
    roles = _load_role_manifests(config)
    synthetic = parse_embedding_source(config.embeddings)
    if synthetic is not None:
        synthetic = (synthetic[0], config.embedding_dim)
        full_table = None
        vocabs = {}
    else:
        vocabs = _entry_vocabularies(roles)
        union = set().union(*vocabs.values()) if vocabs else set()
        try:
            full_table = embeddings.load_vectors(
                config.embeddings, restrict_to=union
            )
        except (OSError, embeddings.EmbeddingFormatError) as exc:
            raise ConfigError(f"embeddings: {exc}") from exc

    params = RunParams(
        replicas=config.replicas,
        seed=config.seed,
        fractions=config.fractions,
        strategies=config.strategies,
        signed_distance=config.signed_distance,
        ddof=1 if config.sample_std else 0,
        damping=config.damping,
        filter_before_truncate=config.filter_before_truncate,
        stopword_dir=config.stopword_dir,
        cache_dir=config.resolved_cache_dir(),
        synthetic=synthetic,
    )
    tasks = []
    for role, manifest in roles:
        for entry in manifest.entries:
            table = (
                full_table.subset(sorted(vocabs.get(entry.path, ())))
                if full_table is not None
                else None
            )
            for size in config.sizes:
                for filt in config.stopword_settings:
                    tasks.append(TaskSpec(
                        role=role,
                        text_id=entry.text_id,
                        path=entry.path,
                        language=entry.language,
                        dataset_tag=entry.dataset_tag,
                        size=size,
                        filter_stopwords=filt,
                        params=params,
                        table=table,
                    ))
    return tasks


def _execute(tasks: list[TaskSpec], workers: int) -> list[TaskResult]:
    if workers <= 1 or len(tasks) <= 1:
        return [run_task(t) for t in tasks]
    with ProcessPoolExecutor(
        max_workers=workers, mp_context=get_context("spawn")
    ) as pool:
        return list(pool.map(run_task, tasks))


def _group_records(pairs, roles):
    grouped: dict[tuple, list[RunRecord]] = {}
    for role, record in pairs:
        if role not in roles:
            continue
        key = (
            record.size, record.stopwords, record.strategy, record.p,
            record.metric, record.summary,
        )
        grouped.setdefault(key, []).append(record)
    return grouped


def _aggregate(
    pairs: list[tuple[str, RunRecord]], config: RunConfig
) -> tuple[list[InfoRow], list[VarRow]]:
    info_rows = []
    for key, group in sorted(
        _group_records(pairs, {ROLE_ANALYSIS}).items()
    ):
        cells = [
            stats.NormalizedMetric(
                x_raw=r.x_raw, baseline_mean=r.mu_r, baseline_std=r.sigma_r,
                x_norm=r.x_norm, eps=r.eps, d=r.d,
                informative=r.informative,
                reason="" if r.d is not None else "undefined",
            )
            for r in group
        ]
        info_rows.append(InfoRow(*key, entry=stats.informativeness(cells)))

    syntax_groups = _group_records(pairs, {ROLE_SYNTAX})
    semantics_groups = _group_records(pairs, {ROLE_SEMANTICS})
    var_rows = []

    def values(group):
        picked = (
            (r.x_raw for r in group)
            if config.variability_from_raw
            else (r.x_norm for r in group)
        )
        return [v for v in picked if v is not None]

    for key in sorted(set(syntax_groups) | set(semantics_groups)):
        entry = stats.variability_entry(
            values(syntax_groups.get(key, ())),
            values(semantics_groups.get(key, ())),
        )
        var_rows.append(VarRow(*key, entry=entry))
    return info_rows, var_rows


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Execute the full sweep; never raises for per-text problems."""
    config.validate()
    tasks = build_tasks(config)
    results = _execute(tasks, config.workers)
    pairs = [(res.role, rec) for res in results for rec in res.records]
    pairs.sort(key=lambda pair: pair[1].sort_key())
    failures = [res for res in results if res.failure is not None]
    info_rows, var_rows = _aggregate(pairs, config)
    return PipelineResult(
        records=pairs,
        informativeness=info_rows,
        variability=var_rows,
        failures=failures,
    )


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.6g}"


def _fmt_bool(value: bool | None) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def report_csv(result: PipelineResult, outdir: str | Path) -> list[Path]:
    """Write records.csv, informativeness.csv, and variability.csv."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    def write(name: str, header: str, rows) -> Path:
        path = out / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header.split(","))
            for row in rows:
                writer.writerow(row)
        return path

    record_rows = dict.fromkeys(
        (
            r.text_id, r.dataset_tag, r.language, str(r.size), r.stopwords,
            r.strategy, _fmt(r.p), r.metric, r.summary, _fmt(r.x_raw),
            _fmt(r.mu_r), _fmt(r.sigma_r), _fmt(r.x_norm), _fmt(r.eps),
            _fmt(r.d), _fmt_bool(r.informative), r.flags,
        )
        for _, r in result.records
    )
    info_rows = [
        (
            str(row.size), row.stopwords, row.strategy, _fmt(row.p),
            row.metric, row.summary, _fmt(row.entry.i_percent),
            str(row.entry.n_t), str(row.entry.n_informative),
            str(row.entry.n_undefined),
        )
        for row in result.informativeness
    ]
    var_rows = [
        (
            str(row.size), row.stopwords, row.strategy, _fmt(row.p),
            row.metric, row.summary, _fmt(row.entry.v_syntax),
            _fmt(row.entry.v_semantics), _fmt(row.entry.v_ratio),
            _fmt_bool(row.entry.syntax_dominant),
        )
        for row in result.variability
    ]
    return [
        write("records.csv", RECORDS_HEADER, record_rows),
        write("informativeness.csv", INFO_HEADER, info_rows),
        write("variability.csv", VAR_HEADER, var_rows),
    ]
