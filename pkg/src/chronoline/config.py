"""Pipeline and service configuration.

A JSON file fixes all artifact paths and knobs; any top-level scalar can be
overridden with a CHRONO_-prefixed environment variable (upper-cased key).
Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .event_filter import FilterConfig
from .layout import LayoutSpec

ENV_PREFIX = "CHRONO_"


@dataclass(frozen=True)
class PipelineConfig:
    base_dir: Path
    triples: Path
    templates: Path
    importance: Path
    names: Path | None
    documents: Path | None
    cooc_store: Path
    candidate_store: Path
    reports_dir: Path
    cvt_predicates: tuple[str, ...] = ()
    existence_start_predicates: tuple[str, ...] = ()
    existence_end_predicates: tuple[str, ...] = ()
    vertical_predicate: str | None = None
    min_candidate_events: int = 10
    filter: FilterConfig = field(default_factory=FilterConfig)
    layout: LayoutSpec = field(default_factory=LayoutSpec)
    default_variant: str = "Full"

    @property
    def existence_predicates(self) -> dict[str, tuple[str, ...]]:
        return {
            "start": self.existence_start_predicates,
            "end": self.existence_end_predicates,
        }


def _resolve(base: Path, value: str | None) -> Path | None:
    if value is None:
        return None
    path = Path(value)
    return path if path.is_absolute() else base / path


def load_config(path: "str | Path") -> PipelineConfig:
    config_path = Path(path)
    with open(config_path, encoding="utf-8") as fh:
        raw = json.load(fh)

    for key in list(raw):
        env_key = ENV_PREFIX + key.upper()
        if env_key in os.environ and not isinstance(raw[key], (dict, list)):
            env_value = os.environ[env_key]
            if isinstance(raw[key], bool):
                raw[key] = env_value.lower() in ("1", "true", "yes")
            elif isinstance(raw[key], int):
                raw[key] = int(env_value)
            elif isinstance(raw[key], float):
                raw[key] = float(env_value)
            else:
                raw[key] = env_value

    base = config_path.parent
    filter_raw = raw.get("filter", {})
    layout_raw = raw.get("layout", {})
    return PipelineConfig(
        base_dir=base,
        triples=_resolve(base, raw["triples"]),
        templates=_resolve(base, raw["templates"]),
        importance=_resolve(base, raw["importance"]),
        names=_resolve(base, raw.get("names")),
        documents=_resolve(base, raw.get("documents")),
        cooc_store=_resolve(base, raw.get("cooc_store", "build/cooc.jsonl")),
        candidate_store=_resolve(base, raw.get("candidate_store", "build/store")),
        reports_dir=_resolve(base, raw.get("reports_dir", "build/reports")),
        cvt_predicates=tuple(raw.get("cvt_predicates", [])),
        existence_start_predicates=tuple(raw.get("existence_start_predicates", [])),
        existence_end_predicates=tuple(raw.get("existence_end_predicates", [])),
        vertical_predicate=raw.get("vertical_predicate"),
        min_candidate_events=int(raw.get("min_candidate_events", 10)),
        filter=FilterConfig(
            theta1=int(filter_raw.get("theta1", 50)),
            theta2=float(filter_raw.get("theta2", 0.5)),
            theta3=float(filter_raw.get("theta3", 0.5)),
            drop_pre_existence_instances=bool(
                filter_raw.get("drop_pre_existence_instances", True)
            ),
        ),
        layout=LayoutSpec(
            screen_width=int(layout_raw.get("screen_width", 1000)),
            screen_height=int(layout_raw.get("screen_height", 100)),
            box_width=int(layout_raw.get("box_width", 100)),
            box_height=int(layout_raw.get("box_height", 50)),
        ),
        default_variant=raw.get("default_variant", "Full"),
    )


def load_names(path: Path | None) -> dict[str, str]:
    names: dict[str, str] = {}
    if path is None:
        return names
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            entity, _, name = line.partition("\t")
            if name:
                names[entity] = name
    return names
