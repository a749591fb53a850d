"""Relevance scoring.

Normalized pointwise mutual information over web co-occurrence counts feeds
a monotone submodular objective: a convex mix of entity-side and date-side
weighted coverage functions with path-average backoff terms and a global
importance fallback. Coverage runs over sets (distinct entities, paths,
dates) unless content diversity is disabled, which degrades the objective to
a modular sum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

from .event_gen import CandidateSet, Event
from .kb_graph import EntityId, Timestamp

COOC_WINDOW_CHARS = 100
MIN_DOMAINS = 5


def npmi(p_joint: float, p_a: float, p_b: float) -> float:
    """NPMI(a;b) = PMI(a;b) / (-log p(a,b)), in [-1, 1].

    Requires 0 < p_joint <= min(p_a, p_b) and marginals strictly inside
    (0, 1); p_joint = 1 has a zero normalizer and is rejected.
    """
    if not (0 < p_joint <= min(p_a, p_b)):
        raise ValueError("need 0 < p_joint <= min(p_a, p_b)")
    if not (0 < p_a < 1 and 0 < p_b < 1):
        raise ValueError("marginals must lie in (0, 1)")
    if p_joint == 1:
        raise ValueError("p_joint = 1 has an undefined normalizer")
    pmi = math.log(p_joint / (p_a * p_b))
    return pmi / (-math.log(p_joint))


@dataclass
class _PairCounts:
    count: int = 0
    domains: set[str] = field(default_factory=set)


class CooccurrenceStore:
    """Retained NPMI scores for entity-entity and entity-date pairs.

    Pairs survive the build only with a positive NPMI and mentions from at
    least MIN_DOMAINS distinct web domains. Entity-entity scores are
    symmetric; lookups of unknown pairs score 0.
    """

    def __init__(
        self,
        ee_scores: Mapping[tuple[EntityId, EntityId], float] | None = None,
        ed_scores: Mapping[tuple[EntityId, int], float] | None = None,
        ee_total: int = 0,
        ed_total: int = 0,
        ee_meta: Mapping[tuple[EntityId, EntityId], tuple[int, int]] | None = None,
        ed_meta: Mapping[tuple[EntityId, int], tuple[int, int]] | None = None,
    ) -> None:
        self._ee = dict(ee_scores or {})
        self._ed = dict(ed_scores or {})
        self.ee_total = ee_total
        self.ed_total = ed_total
        # (raw pair count, distinct domain count) per retained pair
        self._ee_meta = dict(ee_meta or {})
        self._ed_meta = dict(ed_meta or {})

    @staticmethod
    def _ee_key(a: EntityId, b: EntityId) -> tuple[EntityId, EntityId]:
        return (a, b) if a <= b else (b, a)

    def e2e(self, a: EntityId, b: EntityId) -> float:
        return self._ee.get(self._ee_key(a, b), 0.0)

    def e2d(self, entity: EntityId, ts: Timestamp) -> float:
        return self._ed.get((entity, ts.days), 0.0)

    def ee_pairs(self) -> dict[tuple[EntityId, EntityId], float]:
        return dict(self._ee)

    def ed_pairs(self) -> dict[tuple[EntityId, int], float]:
        return dict(self._ed)

    def dump(self, fh: IO[str]) -> None:
        fh.write(json.dumps({"kind": "totals", "ee": self.ee_total, "ed": self.ed_total}) + "\n")
        for (a, b) in sorted(self._ee):
            count, domains = self._ee_meta.get((a, b), (0, 0))
            fh.write(
                json.dumps(
                    {
                        "kind": "ee",
                        "a": a,
                        "b": b,
                        "count": count,
                        "domains": domains,
                        "npmi": self._ee[(a, b)],
                    }
                )
                + "\n"
            )
        for (entity, days) in sorted(self._ed):
            count, domains = self._ed_meta.get((entity, days), (0, 0))
            fh.write(
                json.dumps(
                    {
                        "kind": "ed",
                        "a": entity,
                        "b": Timestamp(days).iso,
                        "count": count,
                        "domains": domains,
                        "npmi": self._ed[(entity, days)],
                    }
                )
                + "\n"
            )

    @classmethod
    def load(cls, fh: "IO[str] | Iterable[str]") -> "CooccurrenceStore":
        ee: dict[tuple[EntityId, EntityId], float] = {}
        ed: dict[tuple[EntityId, int], float] = {}
        ee_meta: dict[tuple[EntityId, EntityId], tuple[int, int]] = {}
        ed_meta: dict[tuple[EntityId, int], tuple[int, int]] = {}
        ee_total = ed_total = 0
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            if record["kind"] == "totals":
                ee_total = record["ee"]
                ed_total = record["ed"]
            elif record["kind"] == "ee":
                key = (record["a"], record["b"])
                ee[key] = record["npmi"]
                ee_meta[key] = (record.get("count", 0), record.get("domains", 0))
            elif record["kind"] == "ed":
                key = (record["a"], Timestamp.from_iso(record["b"]).days)
                ed[key] = record["npmi"]
                ed_meta[key] = (record.get("count", 0), record.get("domains", 0))
        return cls(ee, ed, ee_total, ed_total, ee_meta, ed_meta)


def build_cooc_store(documents: Iterable[Mapping]) -> CooccurrenceStore:
    """Count co-mentions within a 100-character window and score with NPMI.

    Each document is {"domain": str, "mentions": [{"pos": int, "kind":
    "entity"|"date", "id": str}]}. Every unordered mention pair whose
    positions differ by at most the window counts once per co-occurrence;
    identical ids never pair with themselves. Probabilities normalize per
    pair kind; pairs with non-positive NPMI, too few domains, or degenerate
    probabilities are not retained.
    """
    ee: dict[tuple[EntityId, EntityId], _PairCounts] = {}
    ed: dict[tuple[EntityId, int], _PairCounts] = {}
    ee_entity: dict[EntityId, int] = {}
    ed_entity: dict[EntityId, int] = {}
    ed_date: dict[int, int] = {}
    ee_total = 0
    ed_total = 0

    for doc in documents:
        domain = doc.get("domain", "")
        mentions = list(doc.get("mentions", []))
        for i in range(len(mentions)):
            for j in range(i + 1, len(mentions)):
                a, b = mentions[i], mentions[j]
                if abs(a["pos"] - b["pos"]) > COOC_WINDOW_CHARS:
                    continue
                kinds = (a["kind"], b["kind"])
                if kinds == ("entity", "entity"):
                    if a["id"] == b["id"]:
                        continue
                    key = CooccurrenceStore._ee_key(a["id"], b["id"])
                    pair = ee.setdefault(key, _PairCounts())
                    pair.count += 1
                    pair.domains.add(domain)
                    ee_entity[key[0]] = ee_entity.get(key[0], 0) + 1
                    ee_entity[key[1]] = ee_entity.get(key[1], 0) + 1
                    ee_total += 1
                elif "date" in kinds and "entity" in kinds:
                    ent = a if a["kind"] == "entity" else b
                    date = b if a["kind"] == "entity" else a
                    days = Timestamp.from_iso(date["id"]).days
                    pair = ed.setdefault((ent["id"], days), _PairCounts())
                    pair.count += 1
                    pair.domains.add(domain)
                    ed_entity[ent["id"]] = ed_entity.get(ent["id"], 0) + 1
                    ed_date[days] = ed_date.get(days, 0) + 1
                    ed_total += 1

    ee_scores: dict[tuple[EntityId, EntityId], float] = {}
    ee_meta: dict[tuple[EntityId, EntityId], tuple[int, int]] = {}
    for key in sorted(ee):
        pair = ee[key]
        if len(pair.domains) < MIN_DOMAINS:
            continue
        score = _safe_npmi(pair.count, ee_entity[key[0]], ee_entity[key[1]], ee_total)
        if score is not None and score > 0:
            ee_scores[key] = score
            ee_meta[key] = (pair.count, len(pair.domains))

    ed_scores: dict[tuple[EntityId, int], float] = {}
    ed_meta: dict[tuple[EntityId, int], tuple[int, int]] = {}
    for key in sorted(ed):
        pair = ed[key]
        if len(pair.domains) < MIN_DOMAINS:
            continue
        score = _safe_npmi(pair.count, ed_entity[key[0]], ed_date[key[1]], ed_total)
        if score is not None and score > 0:
            ed_scores[key] = score
            ed_meta[key] = (pair.count, len(pair.domains))

    return CooccurrenceStore(ee_scores, ed_scores, ee_total, ed_total, ee_meta, ed_meta)


def _safe_npmi(pair_count: int, a_count: int, b_count: int, total: int) -> float | None:
    if total == 0:
        return None
    if pair_count == total or a_count == total or b_count == total:
        # Degenerate tiny-corpus probabilities (== 1) cannot be scored.
        return None
    return npmi(pair_count / total, a_count / total, b_count / total)


class ImportanceStore:
    """Global per-entity importance in [0, 1]; unknown entities score 0."""

    def __init__(self, scores: Mapping[EntityId, float] | None = None) -> None:
        self._scores = dict(scores or {})

    def get(self, entity: EntityId) -> float:
        return self._scores.get(entity, 0.0)

    @classmethod
    def load(cls, fh: "IO[str] | Iterable[str]") -> "ImportanceStore":
        scores: dict[EntityId, float] = {}
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            entity, _, value = line.partition("\t")
            score = float(value)
            if score < 0:
                raise ValueError(f"negative importance for {entity}")
            scores[entity] = score
        return cls(scores)


@dataclass(frozen=True)
class RelevanceModel:
    """Weights and switches defining the objective over event sets.

    ``lam`` mixes entity relevance against date relevance; the three
    entity-side weights scale the pair score, the path-average backoff and
    global importance; the two date-side weights mirror the first two.
    ``content_diversity`` switches set-coverage accumulation (True) against
    plain multiset sums (False). Path averages are frozen corpus-wide means
    computed before filtering.
    """

    lam: float = 0.75
    w_e: tuple[float, float, float] = (1.0, 1e-2, 1e-4)
    w_d: tuple[float, float] = (1.0, 1e-2)
    content_diversity: bool = True
    path_avg_e2e: Mapping[str, float] = field(default_factory=dict)
    path_avg_e2d: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0 <= self.lam <= 1:
            raise ValueError("lambda must be in [0, 1]")
        if any(w < 0 for w in self.w_e) or any(w < 0 for w in self.w_d):
            raise ValueError("weights must be non-negative")


def compute_path_averages(
    all_candidates: Iterable[CandidateSet], cooc: CooccurrenceStore
) -> tuple[dict[str, float], dict[str, float]]:
    """Mean pair score per entity path and per time path, over all events.

    Events without a retained co-occurrence pair contribute 0 to the mean,
    so sparsely attested paths are pulled toward zero rather than skipped.
    """
    e2e_sums: dict[str, list] = {}
    e2d_sums: dict[str, list] = {}
    for cs in all_candidates:
        for event in cs.events:
            entry = e2e_sums.setdefault(event.entity_path, [0.0, 0])
            entry[0] += cooc.e2e(event.subject, event.related_entity)
            entry[1] += 1
            entry = e2d_sums.setdefault(event.time_path, [0.0, 0])
            entry[0] += cooc.e2d(event.subject, event.timestamp)
            entry[1] += 1
    return (
        {path: total / count for path, (total, count) in sorted(e2e_sums.items())},
        {path: total / count for path, (total, count) in sorted(e2d_sums.items())},
    )


@dataclass(frozen=True)
class EventValue:
    """Per-event score components, one per coverage key.

    Each component attaches to a coverage key: the related entity, the
    entity path, the timestamp and the time path. With content diversity a
    component pays out only the first time its key is covered.
    """

    re_key: EntityId
    re_value: float
    path_key: str
    path_value: float
    date_key: int
    date_value: float
    tpath_key: str
    tpath_value: float

    @property
    def singleton(self) -> float:
        return self.re_value + self.path_value + self.date_value + self.tpath_value


def event_value(
    s: EntityId,
    e: Event,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    entity_scale: float | None = None,
    date_scale: float | None = None,
) -> EventValue:
    """Score components for one event, scaled per side.

    The default scales are the lambda mix of the full objective; erel and
    drel pass 1/0 to isolate a side unmixed.
    """
    if entity_scale is None:
        entity_scale = m.lam
    if date_scale is None:
        date_scale = 1 - m.lam
    w1e, w2e, w3e = m.w_e
    w1d, w2d = m.w_d
    return EventValue(
        re_key=e.related_entity,
        re_value=entity_scale
        * (w1e * cooc.e2e(s, e.related_entity) + w3e * imp.get(e.related_entity)),
        path_key=e.entity_path,
        path_value=entity_scale * w2e * m.path_avg_e2e.get(e.entity_path, 0.0),
        date_key=e.timestamp.days,
        date_value=date_scale * w1d * cooc.e2d(s, e.timestamp),
        tpath_key=e.time_path,
        tpath_value=date_scale * w2d * m.path_avg_e2d.get(e.time_path, 0.0),
    )


class CoverageState:
    """Which coverage keys a growing event set has already paid for."""

    __slots__ = ("res", "paths", "dates", "tpaths")

    def __init__(self) -> None:
        self.res: set[EntityId] = set()
        self.paths: set[str] = set()
        self.dates: set[int] = set()
        self.tpaths: set[str] = set()

    def gain(self, v: EventValue, content_diversity: bool) -> float:
        if not content_diversity:
            return v.singleton
        total = 0.0
        if v.re_key not in self.res:
            total += v.re_value
        if v.path_key not in self.paths:
            total += v.path_value
        if v.date_key not in self.dates:
            total += v.date_value
        if v.tpath_key not in self.tpaths:
            total += v.tpath_value
        return total

    def add(self, v: EventValue) -> None:
        self.res.add(v.re_key)
        self.paths.add(v.path_key)
        self.dates.add(v.date_key)
        self.tpaths.add(v.tpath_key)


def _accumulate(
    s: EntityId,
    events: Iterable[Event],
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    entity_scale: float,
    date_scale: float,
) -> float:
    state = CoverageState()
    total = 0.0
    for e in sorted(events, key=lambda ev: ev.sort_key):
        v = event_value(s, e, m, cooc, imp, entity_scale, date_scale)
        total += state.gain(v, m.content_diversity)
        state.add(v)
    return total


def erel(
    s: EntityId,
    T: Iterable[Event],
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
) -> float:
    """Entity-side relevance: pair scores, path backoff, global importance."""
    return _accumulate(s, T, m, cooc, imp, entity_scale=1.0, date_scale=0.0)


def drel(
    s: EntityId,
    T: Iterable[Event],
    m: RelevanceModel,
    cooc: CooccurrenceStore,
) -> float:
    """Date-side relevance over distinct timestamps and time paths."""
    return _accumulate(s, T, m, cooc, ImportanceStore(), entity_scale=0.0, date_scale=1.0)


def rel(
    s: EntityId,
    T: Iterable[Event],
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
) -> float:
    """The full objective: the lambda mix of entity and date relevance.

    Monotone and submodular with content diversity on; exactly modular with
    it off. rel(s, {}) == 0.
    """
    return _accumulate(s, T, m, cooc, imp, entity_scale=m.lam, date_scale=1 - m.lam)


def marginal_gain(
    s: EntityId,
    T: Iterable[Event],
    e: Event,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
) -> float:
    """rel(T + e) - rel(T), computed from the keys T already covers."""
    state = CoverageState()
    for prev in sorted(T, key=lambda ev: ev.sort_key):
        state.add(event_value(s, prev, m, cooc, imp))
    return state.gain(event_value(s, e, m, cooc, imp), m.content_diversity)
