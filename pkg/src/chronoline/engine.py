"""Serve-time engine.

Loads the persisted candidate store, co-occurrence scores, importance table
and templates into memory once, then answers timeline, zoom, pivot, search
and ablation queries from immutable state. Safe for concurrent readers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from .config import PipelineConfig, load_names
from .event_gen import CandidateSet, Event, describe_event, load_templates, make_candidate_set
from .kb_graph import ExistencePeriod, Timestamp
from .layout import LayoutSpec, TimeSpan
from .pipeline import INDEX_FILE
from .relevance import CooccurrenceStore, ImportanceStore, rel
from .selector import (
    SelectionResult,
    Timeline,
    TimelineEvent,
    ablation_preset,
    default_timespan,
    select_events,
)

logger = logging.getLogger(__name__)


class EntityNotFound(KeyError):
    pass


@dataclass
class EntityMeta:
    vertical: str
    count: int
    name: str
    existence: ExistencePeriod | None
    rich: bool


class TimelineEngine:
    """Immutable query engine over a built candidate store."""

    def __init__(
        self,
        config: PipelineConfig,
        candidates: dict[str, CandidateSet],
        meta: dict[str, EntityMeta],
        path_avg_e2e: dict[str, float],
        path_avg_e2d: dict[str, float],
        cooc: CooccurrenceStore,
        importance: ImportanceStore,
        templates: dict[tuple[str, str], str],
        names: dict[str, str],
    ) -> None:
        self.config = config
        self.candidates = candidates
        self.meta = meta
        self.path_avg_e2e = path_avg_e2e
        self.path_avg_e2d = path_avg_e2d
        self.cooc = cooc
        self.importance = importance
        self.templates = templates
        self.names = names

    @classmethod
    def load(cls, config: PipelineConfig) -> "TimelineEngine":
        store_dir = config.candidate_store
        index_path = store_dir / INDEX_FILE
        if not index_path.is_file():
            raise FileNotFoundError(
                f"candidate store index not found: {index_path}; run the pipeline first"
            )
        with open(index_path, encoding="utf-8") as fh:
            index = json.load(fh)

        meta: dict[str, EntityMeta] = {}
        for entity, entry in index["entities"].items():
            existence = None
            if entry.get("existence"):
                raw = entry["existence"]
                existence = ExistencePeriod(
                    start=Timestamp.from_iso(raw["start"]) if raw.get("start") else None,
                    end=Timestamp.from_iso(raw["end"]) if raw.get("end") else None,
                )
            meta[entity] = EntityMeta(
                vertical=entry["vertical"],
                count=entry["count"],
                name=entry["name"],
                existence=existence,
                rich=entry["rich"],
            )

        # Store files hold one event per line; group them back per subject.
        by_subject: dict[str, list[Event]] = {}
        for file_name in sorted({e["file"] for e in index["entities"].values()}):
            with open(store_dir / file_name, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    event = Event.from_json_dict(json.loads(line))
                    by_subject.setdefault(event.subject, []).append(event)
        candidates = {
            subject: make_candidate_set(subject, events)
            for subject, events in by_subject.items()
        }

        with open(config.cooc_store, encoding="utf-8") as fh:
            cooc = CooccurrenceStore.load(fh)
        with open(config.importance, encoding="utf-8") as fh:
            importance = ImportanceStore.load(fh)
        with open(config.templates, encoding="utf-8") as fh:
            templates = load_templates(fh)
        names = load_names(config.names)
        for entity, entry in meta.items():
            names.setdefault(entity, entry.name)

        return cls(
            config=config,
            candidates=candidates,
            meta=meta,
            path_avg_e2e=index.get("path_avg_e2e", {}),
            path_avg_e2d=index.get("path_avg_e2d", {}),
            cooc=cooc,
            importance=importance,
            templates=templates,
            names=names,
        )

    def _require(self, entity: str) -> CandidateSet:
        if entity not in self.candidates:
            raise EntityNotFound(entity)
        if not self.meta[entity].rich:
            logger.warning(
                "entity %s has only %d candidate events; timeline is best-effort",
                entity,
                self.meta[entity].count,
            )
        return self.candidates[entity]

    def _spec(self, width: int | None, height: int | None) -> LayoutSpec:
        base = self.config.layout
        return LayoutSpec(
            screen_width=width if width is not None else base.screen_width,
            screen_height=height if height is not None else base.screen_height,
            box_width=base.box_width,
            box_height=base.box_height,
        )

    def _span(
        self, cs: CandidateSet, entity: str, start: str | None, end: str | None
    ) -> TimeSpan:
        if start is not None and end is not None:
            return TimeSpan(Timestamp.from_iso(start), Timestamp.from_iso(end))
        if start is not None or end is not None:
            default = default_timespan(cs, self.meta[entity].existence)
            return TimeSpan(
                Timestamp.from_iso(start) if start is not None else default.start,
                Timestamp.from_iso(end) if end is not None else default.end,
            )
        return default_timespan(cs, self.meta[entity].existence)

    def describe(self, event: Event) -> str:
        return describe_event(event, self.templates, self.names)

    def timeline(
        self,
        entity: str,
        start: str | None = None,
        end: str | None = None,
        width: int | None = None,
        height: int | None = None,
        variant: str | None = None,
    ) -> Timeline:
        timeline, _ = self._select(entity, start, end, width, height, variant)
        return timeline

    def _select(
        self,
        entity: str,
        start: str | None = None,
        end: str | None = None,
        width: int | None = None,
        height: int | None = None,
        variant: str | None = None,
    ) -> tuple[Timeline, SelectionResult]:
        cs = self._require(entity)
        preset = ablation_preset(variant or self.config.default_variant)
        model = preset.model(self.path_avg_e2e, self.path_avg_e2d)
        spec = self._spec(width, height)
        span = self._span(cs, entity, start, end)
        t_w = spec.time_window(span)
        pool = [e for e in cs.events if span.contains(e.timestamp)]
        result = select_events(
            pool,
            entity,
            model,
            self.cooc,
            self.importance,
            t_w,
            spec.stack_limit,
            temporal_diversity=preset.temporal_diversity,
            dedup=preset.hard_entity_dedup,
            lazy=True,
        )
        shown = sorted(result.displayed, key=lambda e: e.sort_key)
        objective = rel(entity, shown, model, self.cooc, self.importance)
        entries = tuple(
            TimelineEvent(
                event=e,
                gain=result.gains.get(e.key, 0.0),
                description=self.describe(e),
            )
            for e in shown
        )
        timeline = Timeline(
            subject=entity,
            span=span,
            spec=spec,
            t_w=t_w,
            events=entries,
            objective=objective,
        )
        return timeline, result

    def entity_info(self, entity: str) -> dict:
        if entity not in self.meta:
            raise EntityNotFound(entity)
        meta = self.meta[entity]
        return {
            "name": meta.name,
            "existence": None
            if meta.existence is None
            else {
                "start": meta.existence.start.iso if meta.existence.start else None,
                "end": meta.existence.end.iso if meta.existence.end else None,
            },
            "candidate_count": meta.count,
        }

    def search(self, q: str, limit: int = 20) -> list[dict]:
        needle = q.strip().lower()
        results = []
        for entity in sorted(self.meta, key=lambda e: (self.meta[e].name, e)):
            meta = self.meta[entity]
            if needle and not meta.name.lower().startswith(needle):
                continue
            results.append(
                {"id": entity, "name": meta.name, "candidate_count": meta.count}
            )
            if len(results) >= limit:
                break
        return results

    def ablate(self, entities: list[str], variant_a: str, variant_b: str) -> dict:
        reports = []
        for entity in entities:
            timeline_a, result_a = self._select(entity, variant=variant_a)
            timeline_b, result_b = self._select(entity, variant=variant_b)
            reports.append(
                {
                    "entity": entity,
                    "variant_a": variant_a,
                    "variant_b": variant_b,
                    "timeline_a": timeline_a.to_json_dict(),
                    "timeline_b": timeline_b.to_json_dict(),
                    "diff": _diff_stats(result_a, result_b),
                }
            )
        return {"variants": [variant_a, variant_b], "reports": reports}


def _diff_stats(a: SelectionResult, b: SelectionResult) -> dict:
    keys_a = {e.key for e in a.displayed}
    keys_b = {e.key for e in b.displayed}
    return {
        "shared_events": len(keys_a & keys_b),
        "event_count": {"a": len(a.displayed), "b": len(b.displayed)},
        "pre_filter_count": {"a": len(a.selected), "b": len(b.selected)},
        "distinct_entities": {
            "a": len({e.related_entity for e in a.displayed}),
            "b": len({e.related_entity for e in b.displayed}),
        },
        "distinct_entity_paths": {
            "a": len({e.entity_path for e in a.displayed}),
            "b": len({e.entity_path for e in b.displayed}),
        },
        "distinct_time_paths": {
            "a": len({e.time_path for e in a.displayed}),
            "b": len({e.time_path for e in b.displayed}),
        },
        "temporal_spread_days": {"a": _spread(a), "b": _spread(b)},
    }


def _spread(result: SelectionResult) -> int:
    days = [e.timestamp.days for e in result.displayed]
    if len(days) < 2:
        return 0
    return max(days) - min(days)
