"""Offline pipeline: ingest, generate, filter, persist.

Mirrors the offline/online split: everything expensive happens here once
per corpus; serving reads the resulting candidate store, co-occurrence
scores and path averages without touching the raw knowledge base.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .config import PipelineConfig, load_names
from .event_filter import (
    apply_filters,
    compute_path_stats,
    coverage_report,
    existence_filter,
    existence_report_rows,
    frequency_filter,
    frequency_report_rows,
)
from .event_gen import (
    CandidateSet,
    build_event_index,
    generate_compound_events,
    generate_simple_events,
    merge_candidates,
)
from .kb_graph import KnowledgeGraph, collapse_cvt_nodes, load_triples
from .relevance import CooccurrenceStore, build_cooc_store, compute_path_averages

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"
DEFAULT_VERTICAL = "other"


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class PipelineResult:
    entities: int
    events: int
    dropped_paths: int
    load_errors: int


def _require_file(stage: str, path: Path | None, what: str) -> None:
    if path is None:
        return
    if not path.is_file():
        raise PipelineError(stage, f"{what} not found: {path}")


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    for what, path in (
        ("triple file", config.triples),
        ("template file", config.templates),
        ("importance file", config.importance),
        ("names file", config.names),
        ("documents file", config.documents),
    ):
        _require_file("inputs", path, what)

    # Ingest and normalize the graph.
    try:
        with open(config.triples, "rb") as fh:
            graph, errors = load_triples(
                fh, config.cvt_predicates, config.existence_predicates
            )
    except OSError as exc:
        raise PipelineError("ingest", str(exc))
    for err in errors:
        logger.warning("triples line %d: %s", err.line_no, err.reason)
    graph = collapse_cvt_nodes(graph)

    # Web co-occurrence scores.
    try:
        cooc = _build_cooc(config)
    except (OSError, ValueError, KeyError) as exc:
        raise PipelineError("cooc-build", str(exc))
    config.cooc_store.parent.mkdir(parents=True, exist_ok=True)
    with open(config.cooc_store, "w", encoding="utf-8") as fh:
        cooc.dump(fh)

    # Candidate generation: simple events everywhere, then the compound join.
    try:
        simple_sets = {}
        for entity in graph.entities():
            cs = generate_simple_events(graph, entity)
            if cs.events:
                simple_sets[entity] = cs
        index = build_event_index(simple_sets.values())
        merged: dict[str, CandidateSet] = {}
        for entity in sorted(simple_sets):
            compound = generate_compound_events(graph, entity, simple_sets[entity], index)
            merged[entity] = merge_candidates(simple_sets[entity], compound)

        # Path averages freeze before any filtering.
        path_avg_e2e, path_avg_e2d = compute_path_averages(merged.values(), cooc)
    except (ValueError, KeyError) as exc:
        raise PipelineError("generate", str(exc))

    # Corpus-level filters.
    try:
        stats = compute_path_stats(merged.values())
        freq_dropped = frequency_filter(stats, config.filter)
        existence = existence_filter(merged.values(), graph, config.filter)
        dropped = set(freq_dropped) | set(existence.dropped_paths)
        flagged = (
            existence.flagged_events if config.filter.drop_pre_existence_instances else ()
        )
        filtered: dict[str, CandidateSet] = {}
        for entity in sorted(merged):
            cs = apply_filters(merged[entity], dropped, flagged)
            if cs.events:
                filtered[entity] = cs
    except (ValueError, KeyError) as exc:
        raise PipelineError("filter", str(exc))

    try:
        names = load_names(config.names)
        _write_store(config, graph, filtered, path_avg_e2e, path_avg_e2d, names)
        _write_reports(config, stats, freq_dropped, existence, filtered.values())
    except OSError as exc:
        raise PipelineError("persist", str(exc))

    return PipelineResult(
        entities=len(filtered),
        events=sum(len(cs.events) for cs in filtered.values()),
        dropped_paths=len(dropped),
        load_errors=len(errors),
    )


def _build_cooc(config: PipelineConfig) -> CooccurrenceStore:
    if config.documents is None:
        return CooccurrenceStore()
    with open(config.documents, encoding="utf-8") as fh:
        docs = (json.loads(line) for line in fh if line.strip())
        return build_cooc_store(docs)


def _verticals(graph: KnowledgeGraph, predicate: str | None) -> dict[str, str]:
    assignment: dict[str, str] = {}
    if predicate is None:
        return assignment
    for subject in graph.adjacency:
        for pred, obj in graph.adjacency[subject]:
            if pred == predicate and isinstance(obj, str):
                assignment.setdefault(subject, obj)
    return assignment


def _write_store(
    config: PipelineConfig,
    graph: KnowledgeGraph,
    filtered: dict[str, CandidateSet],
    path_avg_e2e: dict[str, float],
    path_avg_e2d: dict[str, float],
    names: dict[str, str],
) -> None:
    store_dir = config.candidate_store
    store_dir.mkdir(parents=True, exist_ok=True)
    verticals = _verticals(graph, config.vertical_predicate)

    by_vertical: dict[str, list[str]] = {}
    for entity in sorted(filtered):
        by_vertical.setdefault(verticals.get(entity, DEFAULT_VERTICAL), []).append(entity)

    index_entities = {}
    for vertical in sorted(by_vertical):
        path = store_dir / f"{vertical.strip('/').replace('/', '_')}.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for entity in by_vertical[vertical]:
                cs = filtered[entity]
                for event in cs.events:
                    fh.write(json.dumps(event.to_json_dict(), sort_keys=False) + "\n")
                period = graph.existence.get(entity)
                index_entities[entity] = {
                    "vertical": vertical,
                    "file": path.name,
                    "count": len(cs.events),
                    "name": names.get(entity, entity),
                    "existence": None
                    if period is None
                    else {
                        "start": period.start.iso if period.start else None,
                        "end": period.end.iso if period.end else None,
                    },
                    "rich": len(cs.events) >= config.min_candidate_events,
                }

    index = {
        "min_candidate_events": config.min_candidate_events,
        "verticals": sorted(by_vertical),
        "entities": index_entities,
        "path_avg_e2e": path_avg_e2e,
        "path_avg_e2d": path_avg_e2d,
    }
    with open(store_dir / INDEX_FILE, "w", encoding="utf-8") as fh:
        json.dump(index, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_reports(
    config: PipelineConfig,
    stats,
    freq_dropped: set[str],
    existence,
    filtered: Iterable[CandidateSet],
) -> None:
    reports = config.reports_dir
    reports.mkdir(parents=True, exist_ok=True)
    rows = frequency_report_rows(stats, config.filter, freq_dropped)
    rows += existence_report_rows(existence)
    with open(reports / "filter_report.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    with open(reports / "coverage.csv", "w", encoding="utf-8") as fh:
        fh.write(render_coverage_csv(filtered))


def render_coverage_csv(candidate_sets: Iterable[CandidateSet]) -> str:
    report = coverage_report(candidate_sets)
    lines = ["X,count_simple,count_all"]
    for x in sorted(report):
        simple, combined = report[x]
        lines.append(f"{x},{simple},{combined}")
    return "\n".join(lines) + "\n"
