"""In-memory knowledge-base graph.

Loads tab-separated triples into an immutable directed multigraph whose leaf
objects may be day-resolution timestamps, normalizes n-ary reified (CVT)
nodes into dotted-predicate edges, and serves traversal and existence-period
lookups to the event miner.
"""

from __future__ import annotations

import datetime
import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

logger = logging.getLogger(__name__)

# Entity and predicate identifiers are interned strings, e.g.
# "/m/robert_downey_jr" and "/film/actor/film". Collapsed predicates use the
# dotted form "p1.p2". "self" is reserved for 1-hop events.
EntityId = str
PredicateId = str

SELF_PREDICATE: PredicateId = "self"

_EPOCH_ORDINAL = datetime.date(1970, 1, 1).toordinal()


@dataclass(frozen=True, order=True)
class Timestamp:
    """A day-resolution point in time, stored as days since 1970-01-01.

    Negative values address dates before the epoch. Ordering and arithmetic
    are exact integer operations.
    """

    days: int

    @classmethod
    def from_iso(cls, text: str) -> "Timestamp":
        d = datetime.date.fromisoformat(text)
        return cls(d.toordinal() - _EPOCH_ORDINAL)

    @property
    def iso(self) -> str:
        return datetime.date.fromordinal(self.days + _EPOCH_ORDINAL).isoformat()

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return self.iso


# An edge object is either another entity or a timestamp literal.
TripleObject = "EntityId | Timestamp"


@dataclass(frozen=True)
class Triple:
    subject: EntityId
    predicate: PredicateId
    obj: "EntityId | Timestamp"


@dataclass(frozen=True)
class ExistencePeriod:
    """Lifetime of an entity; an absent end means it still exists."""

    start: Timestamp | None = None
    end: Timestamp | None = None


@dataclass(frozen=True)
class ReifiedBinding:
    """A 2-hop event surviving CVT collapse.

    When a reified node carries a timestamp leaf and also an identity entity
    (the object of the most-diverse outgoing predicate), the timestamp event
    is re-homed onto that identity so co-participants of the same n-ary fact
    can later be joined into compound events.
    """

    subject: EntityId
    path_to_re: PredicateId  # the raw incoming predicate p1
    related_entity: EntityId  # identity entity substituted for the CVT id
    time_label: PredicateId  # collapsed "p1.p2" label of the timestamp edge
    timestamp: Timestamp


@dataclass(frozen=True)
class LoadError:
    line_no: int
    line: str
    reason: str


def _object_sort_key(obj: "EntityId | Timestamp") -> tuple[int, str]:
    if isinstance(obj, Timestamp):
        return (1, obj.iso)
    return (0, obj)


def _edge_sort_key(edge: tuple[PredicateId, "EntityId | Timestamp"]) -> tuple:
    pred, obj = edge
    return (pred,) + _object_sort_key(obj)


@dataclass(frozen=True)
class KnowledgeGraph:
    """Immutable directed multigraph over entities with timestamp leaves.

    ``adjacency`` maps each subject to its outgoing ``(predicate, object)``
    edges in deterministic sorted order. ``reified`` is populated by
    :func:`collapse_cvt_nodes` (empty before).
    """

    adjacency: Mapping[EntityId, tuple[tuple[PredicateId, "EntityId | Timestamp"], ...]]
    cvt_nodes: frozenset[EntityId] = frozenset()
    existence: Mapping[EntityId, ExistencePeriod] = field(default_factory=dict)
    reified: Mapping[EntityId, tuple[ReifiedBinding, ...]] = field(default_factory=dict)

    def entities(self) -> list[EntityId]:
        return sorted(self.adjacency)

    def edge_count(self) -> int:
        return sum(len(edges) for edges in self.adjacency.values())

    def canonical_lines(self) -> list[str]:
        """Stable serialization used for immutability checks and hashing."""
        lines = []
        for subj in sorted(self.adjacency):
            for pred, obj in self.adjacency[subj]:
                if isinstance(obj, Timestamp):
                    lines.append(f"{subj}\t{pred}\t@{obj.iso}")
                else:
                    lines.append(f"{subj}\t{pred}\t{obj}")
        return lines


def neighbors(g: KnowledgeGraph, e: EntityId) -> tuple[tuple[PredicateId, "EntityId | Timestamp"], ...]:
    """Outgoing edges of ``e`` sorted by (predicate, object); empty if unknown."""
    return g.adjacency.get(e, ())


def load_triples(
    source: "IO[bytes] | IO[str] | Iterable[str]",
    cvt_predicates: Iterable[PredicateId] = (),
    existence_predicates: Mapping[str, "PredicateId | Iterable[PredicateId]"] | None = None,
) -> tuple[KnowledgeGraph, list[LoadError]]:
    """Parse tab-separated triple lines into a graph.

    Each line carries ``subject<TAB>predicate<TAB>object``; timestamp objects
    are written ``@YYYY-MM-DD``; ``#`` starts a comment line. Malformed lines
    are reported with their line number and skipped, loading continues.
    Objects of predicates in ``cvt_predicates`` are flagged as CVT nodes.
    ``existence_predicates`` maps the roles ``start``/``end`` to the
    predicate(s) whose timestamps open/close an entity's existence period.
    """
    start_preds = _role_predicates(existence_predicates, "start")
    end_preds = _role_predicates(existence_predicates, "end")
    cvt_marking = frozenset(cvt_predicates)

    adjacency: dict[EntityId, list[tuple[PredicateId, "EntityId | Timestamp"]]] = {}
    cvts: set[EntityId] = set()
    starts: dict[EntityId, Timestamp] = {}
    ends: dict[EntityId, Timestamp] = {}
    errors: list[LoadError] = []

    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(p.strip() for p in parts):
            errors.append(LoadError(line_no, line, "expected 3 tab-separated fields"))
            continue
        subj, pred, obj_text = (p.strip() for p in parts)
        obj: "EntityId | Timestamp"
        if obj_text.startswith("@"):
            try:
                obj = Timestamp.from_iso(obj_text[1:])
            except ValueError:
                errors.append(LoadError(line_no, line, f"unparseable timestamp {obj_text!r}"))
                continue
        else:
            obj = obj_text
        adjacency.setdefault(subj, []).append((pred, obj))
        if isinstance(obj, str):
            adjacency.setdefault(obj, [])
            if pred in cvt_marking:
                cvts.add(obj)
        else:
            if pred in start_preds:
                prev = starts.get(subj)
                if prev is None or obj < prev:
                    starts[subj] = obj
            if pred in end_preds:
                prev = ends.get(subj)
                if prev is None or obj > prev:
                    ends[subj] = obj

    existence: dict[EntityId, ExistencePeriod] = {}
    for entity in sorted(set(starts) | set(ends)):
        start = starts.get(entity)
        end = ends.get(entity)
        if start is not None and end is not None and end < start:
            logger.warning("existence end before start for %s; dropping end", entity)
            end = None
        existence[entity] = ExistencePeriod(start=start, end=end)

    frozen = {
        subj: tuple(sorted(edges, key=_edge_sort_key)) for subj, edges in adjacency.items()
    }
    graph = KnowledgeGraph(adjacency=frozen, cvt_nodes=frozenset(cvts), existence=existence)
    return graph, errors


def _role_predicates(
    mapping: Mapping[str, "PredicateId | Iterable[PredicateId]"] | None, role: str
) -> frozenset[PredicateId]:
    if not mapping or role not in mapping:
        return frozenset()
    value = mapping[role]
    if isinstance(value, str):
        return frozenset((value,))
    return frozenset(value)


def _iter_lines(source: "IO[bytes] | IO[str] | Iterable[str]") -> Iterable[str]:
    for raw in source:
        if isinstance(raw, bytes):
            yield raw.decode("utf-8")
        else:
            yield raw


def resolve_cvt_identity(g: KnowledgeGraph, incoming: PredicateId) -> PredicateId:
    """Outgoing predicate whose objects best identify CVTs reached via ``incoming``.

    Over every instance a --incoming--> CVT --p2--> b (entity-valued b only),
    picks the p2 minimizing the maximum number of instances that share one
    object b, i.e. the predicate leading to the most diverse object set.
    Ties break to the lexicographically smaller predicate.
    """
    per_pred: dict[PredicateId, dict[EntityId, int]] = {}
    found = False
    for subj in g.adjacency:
        for pred, obj in g.adjacency[subj]:
            if pred != incoming or not isinstance(obj, str) or obj not in g.cvt_nodes:
                continue
            found = True
            for p2, target in g.adjacency.get(obj, ()):
                if isinstance(target, str):
                    counts = per_pred.setdefault(p2, {})
                    counts[target] = counts.get(target, 0) + 1
    if not found:
        raise ValueError(f"unknown predicate: {incoming!r} does not reach any CVT node")
    if not per_pred:
        raise ValueError(f"predicate {incoming!r} reaches CVTs without entity-valued edges")
    return min(per_pred, key=lambda p2: (max(per_pred[p2].values()), p2))


def collapse_cvt_nodes(g: KnowledgeGraph) -> KnowledgeGraph:
    """Replace every a --p1--> CVT --p2--> b path by a --"p1.p2"--> b.

    CVT nodes disappear from the adjacency; non-CVT edges are preserved.
    CVT chains are collapsed to fixpoint. A CVT without outgoing edges is
    dropped with a warning. For CVTs that carry both an identity entity and
    timestamp leaves, reified bindings are recorded (see
    :class:`ReifiedBinding`) so the original 2-hop event structure survives.
    """
    if not g.cvt_nodes:
        return g

    adjacency = {subj: list(edges) for subj, edges in g.adjacency.items()}
    bindings: dict[EntityId, list[ReifiedBinding]] = {
        subj: list(items) for subj, items in g.reified.items()
    }

    # Identity predicate per incoming predicate, computed on the pre-collapse
    # graph where all CVT instances are still visible.
    incoming_preds = sorted(
        {
            pred
            for subj in g.adjacency
            for pred, obj in g.adjacency[subj]
            if isinstance(obj, str) and obj in g.cvt_nodes
        }
    )
    identity_pred: dict[PredicateId, PredicateId | None] = {}
    for pred in incoming_preds:
        try:
            identity_pred[pred] = resolve_cvt_identity(g, pred)
        except ValueError:
            identity_pred[pred] = None

    remaining = set(g.cvt_nodes)
    # CVT chains collapse bottom-up: in each round, splice every CVT whose
    # outgoing edges no longer reference an unresolved CVT into its incomers.
    while remaining:
        ready = sorted(
            c
            for c in remaining
            if not any(isinstance(o, str) and o in remaining for _, o in adjacency.get(c, ()))
        )
        if not ready:  # cyclic CVT chain; nothing sensible to emit
            logger.warning("unresolvable CVT cycle among %s; nodes dropped", sorted(remaining))
            break
        ready_set = set(ready)
        incoming: dict[EntityId, list[tuple[EntityId, PredicateId]]] = {c: [] for c in ready}
        for subj in adjacency:
            if subj in ready_set:
                continue
            for pred, obj in adjacency[subj]:
                if isinstance(obj, str) and obj in ready_set:
                    incoming[obj].append((subj, pred))
        for cvt in ready:
            out_edges = list(adjacency.get(cvt, []))
            if not out_edges:
                logger.warning("dropping CVT node %s with no outgoing edges", cvt)
            for a, p1 in sorted(incoming[cvt]):
                ident = identity_pred.get(p1)
                ident_obj: EntityId | None = None
                if ident is not None:
                    targets = sorted(
                        obj for p2, obj in out_edges if p2 == ident and isinstance(obj, str)
                    )
                    ident_obj = targets[0] if targets else None
                for p2, obj in out_edges:
                    label = f"{p1}.{p2}"
                    adjacency[a].append((label, obj))
                    if (
                        isinstance(obj, Timestamp)
                        and ident_obj is not None
                        and a not in g.cvt_nodes
                    ):
                        bindings.setdefault(a, []).append(
                            ReifiedBinding(
                                subject=a,
                                path_to_re=p1,
                                related_entity=ident_obj,
                                time_label=label,
                                timestamp=obj,
                            )
                        )
        for cvt in ready:
            remaining.discard(cvt)
            adjacency.pop(cvt, None)
        for subj in adjacency:
            adjacency[subj] = [
                (p, o) for p, o in adjacency[subj] if not (isinstance(o, str) and o in ready_set)
            ]
    if remaining:
        for cvt in remaining:
            adjacency.pop(cvt, None)
        for subj in adjacency:
            adjacency[subj] = [
                (p, o) for p, o in adjacency[subj] if not (isinstance(o, str) and o in remaining)
            ]

    frozen = {
        subj: tuple(sorted(edges, key=_edge_sort_key)) for subj, edges in adjacency.items()
    }
    frozen_bindings = {
        subj: tuple(
            sorted(
                items,
                key=lambda b: (b.timestamp.days, b.related_entity, b.path_to_re, b.time_label),
            )
        )
        for subj, items in bindings.items()
        if items
    }
    return KnowledgeGraph(
        adjacency=frozen,
        cvt_nodes=frozenset(),
        existence=g.existence,
        reified=frozen_bindings,
    )


def existence_of(g: KnowledgeGraph, entity: EntityId) -> ExistencePeriod | None:
    return g.existence.get(entity)
