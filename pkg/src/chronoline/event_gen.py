"""Candidate event mining.

Walks the collapsed graph to find timestamped 1-hop and 2-hop paths from a
subject (simple events), joins 2-hop events of different subjects that share
a related entity and timestamp (compound events), and renders human-readable
descriptions from a template table with a concatenation fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .kb_graph import (
    SELF_PREDICATE,
    EntityId,
    KnowledgeGraph,
    PredicateId,
    Timestamp,
)

KIND_SIMPLE_1HOP = "simple_1hop"
KIND_SIMPLE_2HOP = "simple_2hop"
KIND_COMPOUND = "compound"

_MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)


@dataclass(frozen=True)
class Event:
    """One scored candidate: a timestamped path from the subject.

    ``path_to_re`` and ``path_to_ts`` are predicate tuples; collapsed dotted
    labels count as single predicates. 1-hop events use the reserved "self"
    path with the subject as its own related entity; compound events carry a
    2-predicate entity path (subject's hop, partner's hop).
    """

    subject: EntityId
    related_entity: EntityId
    timestamp: Timestamp
    path_to_re: tuple[PredicateId, ...]
    path_to_ts: tuple[PredicateId, ...]
    kind: str

    @property
    def entity_path(self) -> str:
        return ".".join(self.path_to_re)

    @property
    def time_path(self) -> str:
        return ".".join(self.path_to_ts)

    @property
    def sort_key(self) -> tuple:
        return (
            self.timestamp.days,
            self.related_entity,
            self.entity_path,
            self.time_path,
            self.kind,
        )

    @property
    def dedup_key(self) -> tuple:
        # Uniqueness within a candidate set ignores the time path: when two
        # routes reach the same (re, t) via the same entity path they are the
        # same displayable fact.
        return (self.subject, self.related_entity, self.entity_path, self.timestamp.days)

    @property
    def key(self) -> str:
        """Canonical id used as the final deterministic tie-breaker."""
        return f"{self.related_entity}|{self.entity_path}|{self.time_path}|{self.timestamp.days}|{self.kind}"

    @property
    def time_join_pred(self) -> PredicateId:
        """Last predicate on the time path, the compound-join hop."""
        if len(self.path_to_ts) >= 2:
            return self.path_to_ts[-1]
        return self.path_to_ts[0].rsplit(".", 1)[-1]

    def to_json_dict(self) -> dict:
        # Paths serialize as predicate arrays; dotted collapsed labels may
        # themselves contain ".", so joined strings would not round-trip.
        return {
            "subject": self.subject,
            "related_entity": self.related_entity,
            "timestamp": self.timestamp.iso,
            "path_to_re": list(self.path_to_re),
            "path_to_ts": list(self.path_to_ts),
            "kind": self.kind,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Event":
        return cls(
            subject=data["subject"],
            related_entity=data["related_entity"],
            timestamp=Timestamp.from_iso(data["timestamp"]),
            path_to_re=tuple(data["path_to_re"]),
            path_to_ts=tuple(data["path_to_ts"]),
            kind=data["kind"],
        )


@dataclass(frozen=True)
class CandidateSet:
    """All candidate events of one subject, deduplicated and sorted."""

    subject: EntityId
    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)


def make_candidate_set(subject: EntityId, events: Iterable[Event]) -> CandidateSet:
    ordered = sorted(events, key=lambda e: e.sort_key)
    seen: set[tuple] = set()
    unique: list[Event] = []
    for event in ordered:
        if event.subject != subject:
            raise ValueError(f"event subject {event.subject!r} != {subject!r}")
        if event.dedup_key in seen:
            continue
        seen.add(event.dedup_key)
        unique.append(event)
    return CandidateSet(subject=subject, events=tuple(unique))


def generate_simple_events(g: KnowledgeGraph, s: EntityId) -> CandidateSet:
    """Mine 1-hop and 2-hop timestamped paths starting at ``s``.

    Expects a collapsed graph. Reified bindings recorded during collapse are
    emitted as 2-hop events so n-ary facts keep their identity entity.
    """
    events: list[Event] = []
    for pred, obj in g.adjacency.get(s, ()):
        if isinstance(obj, Timestamp):
            events.append(
                Event(
                    subject=s,
                    related_entity=s,
                    timestamp=obj,
                    path_to_re=(SELF_PREDICATE,),
                    path_to_ts=(pred,),
                    kind=KIND_SIMPLE_1HOP,
                )
            )
        else:
            for pred2, obj2 in g.adjacency.get(obj, ()):
                if isinstance(obj2, Timestamp):
                    events.append(
                        Event(
                            subject=s,
                            related_entity=obj,
                            timestamp=obj2,
                            path_to_re=(pred,),
                            path_to_ts=(pred, pred2),
                            kind=KIND_SIMPLE_2HOP,
                        )
                    )
    for binding in g.reified.get(s, ()):
        events.append(
            Event(
                subject=s,
                related_entity=binding.related_entity,
                timestamp=binding.timestamp,
                path_to_re=(binding.path_to_re,),
                path_to_ts=(binding.time_label,),
                kind=KIND_SIMPLE_2HOP,
            )
        )
    return make_candidate_set(s, events)


class EventIndex:
    """Corpus-wide join index over 2-hop simple events.

    Keyed by (related entity, last time predicate, timestamp); built once
    offline, read-only afterwards.
    """

    def __init__(self) -> None:
        self._by_key: dict[tuple[EntityId, PredicateId, int], list[tuple[EntityId, PredicateId]]] = {}

    def add(self, event: Event) -> None:
        if event.kind != KIND_SIMPLE_2HOP:
            return
        key = (event.related_entity, event.time_join_pred, event.timestamp.days)
        entry = (event.subject, event.path_to_re[0])
        bucket = self._by_key.setdefault(key, [])
        if entry not in bucket:
            bucket.append(entry)

    def partners(
        self, event: Event
    ) -> list[tuple[EntityId, PredicateId]]:
        key = (event.related_entity, event.time_join_pred, event.timestamp.days)
        return [
            (subj, pred)
            for subj, pred in self._by_key.get(key, [])
            if subj != event.subject
        ]


def build_event_index(candidate_sets: Iterable[CandidateSet]) -> EventIndex:
    index = EventIndex()
    for cs in candidate_sets:
        for event in cs.events:
            index.add(event)
    return index


def generate_compound_events(
    g: KnowledgeGraph, s: EntityId, simple: CandidateSet, index: EventIndex
) -> CandidateSet:
    """Join ``s``'s 2-hop events with other subjects sharing (re, hop, t).

    For simple events s→(p1)→re1→(p2)→t and s2→(p3)→re1→(p2)→t with s2 ≠ s,
    emits a compound event whose related entity is s2 and whose entity path
    is p1.p3; the time path stays the subject's own.
    """
    events: list[Event] = []
    for event in simple.events:
        if event.kind != KIND_SIMPLE_2HOP:
            continue
        for partner, partner_pred in index.partners(event):
            events.append(
                Event(
                    subject=s,
                    related_entity=partner,
                    timestamp=event.timestamp,
                    path_to_re=(event.path_to_re[0], partner_pred),
                    path_to_ts=event.path_to_ts,
                    kind=KIND_COMPOUND,
                )
            )
    return make_candidate_set(s, events)


def merge_candidates(simple: CandidateSet, compound: CandidateSet) -> CandidateSet:
    return make_candidate_set(simple.subject, list(simple.events) + list(compound.events))


def format_long_date(ts: Timestamp) -> str:
    """"April 11, 2012"-style rendering used inside templates."""
    import datetime

    d = datetime.date.fromordinal(ts.days + 719163)
    return f"{_MONTHS[d.month - 1]} {d.day}, {d.year}"


def load_templates(source: "IO[str] | Iterable[str]") -> dict[tuple[str, str], str]:
    """Template file: lines ``path_to_re<TAB>path_to_ts<TAB>pattern``."""
    templates: dict[tuple[str, str], str] = {}
    for raw in source:
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            continue
        templates[(parts[0], parts[1])] = parts[2]
    return templates


def describe_event(
    e: Event,
    templates: Mapping[tuple[str, str], str],
    names: Mapping[str, str],
) -> str:
    """Fill the matching template, or concatenate names as a fallback.

    Placeholders: {sub}, {re}, {date} (long form), {date_iso}. Missing
    display names fall back to the raw id.
    """
    sub_name = names.get(e.subject, e.subject)
    re_name = names.get(e.related_entity, e.related_entity)
    pattern = templates.get((e.entity_path, e.time_path))
    if pattern is not None:
        return pattern.format(
            sub=sub_name,
            re=re_name,
            date=format_long_date(e.timestamp),
            date_iso=e.timestamp.iso,
        )
    path_display = ".".join(names.get(p, p) for p in e.path_to_ts)
    return f"{sub_name} — {path_display} — {re_name} — {e.timestamp.iso}"
