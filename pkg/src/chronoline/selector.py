"""Timeline selection.

Greedy maximization of the relevance objective over the layout-feasible
family, a lazy variant that reuses stale gains as upper bounds, a brute
force oracle for small instances, the default-span heuristic and stateless
zoom re-selection, plus the six model-variant presets used for ablation.
"""

from __future__ import annotations

import bisect
import math
import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .event_gen import CandidateSet, Event
from .kb_graph import EntityId, ExistencePeriod, Timestamp
from .layout import LayoutSpec, TimeSpan, can_add
from .relevance import (
    CooccurrenceStore,
    CoverageState,
    EventValue,
    ImportanceStore,
    RelevanceModel,
    event_value,
    rel,
)

BRUTE_FORCE_MAX = 16
DEFAULT_SPAN_COVERAGE = Fraction(9, 10)

VARIANT_NAMES = ("Full", "Base", "Full-E2D", "Full-E2E", "Full-TD", "Full-CD")


@dataclass(frozen=True)
class ModelVariant:
    """One row of the experimental-configuration table."""

    name: str
    w_e: tuple[float, float, float]
    w_d: tuple[float, float]
    temporal_diversity: bool
    content_diversity: bool
    lam: float = 0.75

    def model(
        self,
        path_avg_e2e: dict[str, float] | None = None,
        path_avg_e2d: dict[str, float] | None = None,
    ) -> RelevanceModel:
        return RelevanceModel(
            lam=self.lam,
            w_e=self.w_e,
            w_d=self.w_d,
            content_diversity=self.content_diversity,
            path_avg_e2e=path_avg_e2e or {},
            path_avg_e2d=path_avg_e2d or {},
        )

    @property
    def hard_entity_dedup(self) -> bool:
        # Duplicate related entities are removed everywhere except in the
        # configuration that measures content diversity itself.
        return self.content_diversity


_PRESETS: dict[str, ModelVariant] = {
    "Full": ModelVariant("Full", (1.0, 1e-2, 1e-4), (1.0, 1e-2), True, True),
    "Base": ModelVariant("Base", (0.0, 0.0, 1.0), (0.0, 0.0), True, True),
    "Full-E2D": ModelVariant("Full-E2D", (1.0, 1e-2, 1e-4), (0.0, 0.0), True, True),
    "Full-E2E": ModelVariant("Full-E2E", (0.0, 0.0, 1e-4), (1.0, 1e-2), True, True),
    "Full-TD": ModelVariant("Full-TD", (1.0, 1e-2, 1e-4), (1.0, 1e-2), False, True),
    "Full-CD": ModelVariant("Full-CD", (1.0, 1e-2, 1e-4), (1.0, 1e-2), True, False),
}


def ablation_preset(name: str) -> ModelVariant:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown variant {name!r}; expected one of {', '.join(VARIANT_NAMES)}"
        )


class EvalCounter:
    """Counts marginal-gain evaluations for the lazy-vs-naive comparison."""

    def __init__(self) -> None:
        self.evaluations = 0

    def tick(self) -> None:
        self.evaluations += 1


@dataclass(frozen=True)
class TimelineEvent:
    event: Event
    gain: float
    description: str = ""


@dataclass(frozen=True)
class Timeline:
    subject: EntityId
    span: TimeSpan
    spec: LayoutSpec
    t_w: Fraction
    events: tuple[TimelineEvent, ...]
    objective: float

    def to_json_dict(self) -> dict:
        return {
            "subject": self.subject,
            "span": self.span.to_json_dict(),
            "spec": {
                "W": self.spec.screen_width,
                "H": self.spec.screen_height,
                "w": self.spec.box_width,
                "h": self.spec.box_height,
                "n": self.spec.stack_limit,
                "t_w": float(self.t_w),
            },
            "objective": self.objective,
            "events": [
                {
                    "re": te.event.related_entity,
                    "timestamp": te.event.timestamp.iso,
                    "path_to_re": te.event.entity_path,
                    "path_to_ts": te.event.time_path,
                    "description": te.description,
                    "gain": te.gain,
                }
                for te in self.events
            ],
        }


@dataclass(frozen=True)
class SelectionResult:
    """Raw selector output before rendering into a Timeline.

    ``selected`` is in selection order. Without the temporal constraint the
    displayed set is the post-overlap-filter subset ``displayed``; the two
    coincide otherwise. Gains are the marginal values at pick time.
    """

    selected: tuple[Event, ...]
    displayed: tuple[Event, ...]
    gains: dict[str, float]
    evaluations: int


class _Scorer:
    """Per-event value components, precomputed once per selection run."""

    def __init__(
        self,
        s: EntityId,
        events: Iterable[Event],
        m: RelevanceModel,
        cooc: CooccurrenceStore,
        imp: ImportanceStore,
    ) -> None:
        self.m = m
        self.values: dict[str, EventValue] = {
            e.key: event_value(s, e, m, cooc, imp) for e in events
        }

    def gain(self, e: Event, covered: CoverageState, counter: EvalCounter) -> float:
        counter.tick()
        return covered.gain(self.values[e.key], self.m.content_diversity)


class _Feasibility:
    """Layout-or-budget feasibility plus optional related-entity dedup."""

    def __init__(
        self,
        t_w: "Fraction | int",
        n: int,
        dedup: bool,
        budget: int | None = None,
    ) -> None:
        self.t_w = t_w
        self.n = n
        self.dedup = dedup
        self.budget = budget
        self.days: list[int] = []
        self.used_entities: set[EntityId] = set()

    def allows(self, e: Event) -> bool:
        if self.dedup and e.related_entity in self.used_entities:
            return False
        if self.budget is not None:
            return len(self.days) < self.budget
        return can_add(self.days, e.timestamp.days, self.t_w, self.n)

    def commit(self, e: Event) -> None:
        bisect.insort(self.days, e.timestamp.days)
        self.used_entities.add(e.related_entity)


def _ordered_candidates(candidates: Iterable[Event]) -> list[Event]:
    unique: dict[str, Event] = {}
    for e in sorted(candidates, key=lambda ev: ev.sort_key):
        unique.setdefault(e.key, e)
    return list(unique.values())


def select_naive_greedy(
    candidates: Iterable[Event],
    s: EntityId,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    t_w: "Fraction | int",
    n: int,
    *,
    dedup: bool = True,
    budget: int | None = None,
    counter: EvalCounter | None = None,
) -> tuple[list[Event], dict[str, float]]:
    """Textbook greedy: re-evaluate every feasible candidate each round.

    Adds the feasible candidate with the largest marginal gain until none
    remains; ties break to the earlier timestamp, then the smaller event id.
    """
    counter = counter if counter is not None else EvalCounter()
    pool = _ordered_candidates(candidates)
    scorer = _Scorer(s, pool, m, cooc, imp)
    feas = _Feasibility(t_w, n, dedup, budget)
    covered = CoverageState()
    selected: list[Event] = []
    gains: dict[str, float] = {}
    remaining = list(pool)
    while True:
        feasible = [e for e in remaining if feas.allows(e)]
        if not feasible:
            break
        best = min(
            feasible,
            key=lambda e: (-scorer.gain(e, covered, counter), e.timestamp.days, e.key),
        )
        gain = covered.gain(scorer.values[best.key], m.content_diversity)
        selected.append(best)
        gains[best.key] = gain
        covered.add(scorer.values[best.key])
        feas.commit(best)
        remaining = [e for e in remaining if e.key != best.key]
    return selected, gains


def select_lazy_greedy(
    candidates: Iterable[Event],
    s: EntityId,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    t_w: "Fraction | int",
    n: int,
    *,
    dedup: bool = True,
    budget: int | None = None,
    counter: EvalCounter | None = None,
) -> tuple[list[Event], dict[str, float]]:
    """Greedy with lazy evaluations.

    Previously computed gains are upper bounds (gains only shrink as the
    selection grows), so only the top of a priority queue is re-evaluated.
    Produces exactly the same selection as the naive version. Candidates
    that become infeasible are discarded permanently: feasibility is
    downward closed in the growing selection.
    """
    counter = counter if counter is not None else EvalCounter()
    pool = _ordered_candidates(candidates)
    scorer = _Scorer(s, pool, m, cooc, imp)
    feas = _Feasibility(t_w, n, dedup, budget)
    covered = CoverageState()
    selected: list[Event] = []
    gains: dict[str, float] = {}

    heap: list[tuple[float, int, str, int]] = []
    by_key: dict[str, Event] = {e.key: e for e in pool}
    for e in pool:
        heap.append((-scorer.gain(e, covered, counter), e.timestamp.days, e.key, 0))
    heapq.heapify(heap)

    while heap:
        neg_gain, days, key, stamp = heapq.heappop(heap)
        e = by_key[key]
        if not feas.allows(e):
            continue
        if stamp == len(selected):
            gain = -neg_gain
            selected.append(e)
            gains[key] = gain
            covered.add(scorer.values[key])
            feas.commit(e)
        else:
            fresh = scorer.gain(e, covered, counter)
            heapq.heappush(heap, (-fresh, days, key, len(selected)))
    return selected, gains


def _overlap_filter(
    selected: Iterable[Event],
    gains: dict[str, float],
    t_w: "Fraction | int",
    n: int,
) -> list[Event]:
    """Drop temporally overlapping boxes, keeping higher-scored events."""
    kept_days: list[int] = []
    kept: list[Event] = []
    ordered = sorted(
        selected, key=lambda e: (-gains.get(e.key, 0.0), e.timestamp.days, e.key)
    )
    for e in ordered:
        if can_add(kept_days, e.timestamp.days, t_w, n):
            bisect.insort(kept_days, e.timestamp.days)
            kept.append(e)
    return kept


def select_events(
    candidates: Iterable[Event],
    s: EntityId,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    t_w: "Fraction | int",
    n: int,
    *,
    temporal_diversity: bool = True,
    dedup: bool = True,
    lazy: bool = True,
    counter: EvalCounter | None = None,
) -> SelectionResult:
    """Full selection flow for one variant.

    With the temporal constraint the layout family bounds the greedy run
    directly. Without it, the budget is the constrained run's count and
    overlapping boxes are filtered post-hoc by score.
    """
    algo = select_lazy_greedy if lazy else select_naive_greedy
    counter = counter if counter is not None else EvalCounter()
    if temporal_diversity:
        selected, gains = algo(
            candidates, s, m, cooc, imp, t_w, n, dedup=dedup, counter=counter
        )
        return SelectionResult(
            selected=tuple(selected),
            displayed=tuple(selected),
            gains=gains,
            evaluations=counter.evaluations,
        )
    pool = list(candidates)
    constrained, _ = algo(
        pool, s, m, cooc, imp, t_w, n, dedup=dedup, counter=EvalCounter()
    )
    budget = len(constrained)
    selected, gains = algo(
        pool, s, m, cooc, imp, t_w, n, dedup=dedup, budget=budget, counter=counter
    )
    displayed = _overlap_filter(selected, gains, t_w, n)
    return SelectionResult(
        selected=tuple(selected),
        displayed=tuple(displayed),
        gains=gains,
        evaluations=counter.evaluations,
    )


def brute_force_select(
    candidates: Iterable[Event],
    s: EntityId,
    m: RelevanceModel,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    t_w: "Fraction | int",
    n: int,
    *,
    dedup: bool = False,
    budget: int | None = None,
) -> tuple[tuple[Event, ...], float]:
    """Exhaustive maximizer over the feasible family (oracle, <= 16 events)."""
    pool = _ordered_candidates(candidates)
    if len(pool) > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX} candidates")
    scorer = _Scorer(s, pool, m, cooc, imp)
    best_set: list[Event] = []
    best_value = 0.0

    days: list[int] = []
    used: set[EntityId] = set()
    chosen: list[Event] = []
    covered = CoverageState()

    def feasible(e: Event) -> bool:
        if dedup and e.related_entity in used:
            return False
        if budget is not None:
            return len(chosen) < budget
        return can_add(days, e.timestamp.days, t_w, n)

    def dfs(start: int, value: float) -> None:
        nonlocal best_set, best_value
        if value > best_value:
            best_value = value
            best_set = list(chosen)
        for i in range(start, len(pool)):
            e = pool[i]
            if not feasible(e):
                continue
            v = scorer.values[e.key]
            gain = covered.gain(v, m.content_diversity)
            added = _coverage_add(covered, v)
            bisect.insort(days, e.timestamp.days)
            was_used = e.related_entity in used
            used.add(e.related_entity)
            chosen.append(e)
            dfs(i + 1, value + gain)
            chosen.pop()
            if not was_used:
                used.discard(e.related_entity)
            days.remove(e.timestamp.days)
            _coverage_remove(covered, v, added)

    dfs(0, 0.0)
    final = tuple(sorted(best_set, key=lambda e: e.sort_key))
    return final, rel(s, final, m, cooc, imp)


def _coverage_add(state: CoverageState, v: EventValue) -> tuple[bool, bool, bool, bool]:
    added = (
        v.re_key not in state.res,
        v.path_key not in state.paths,
        v.date_key not in state.dates,
        v.tpath_key not in state.tpaths,
    )
    state.add(v)
    return added


def _coverage_remove(
    state: CoverageState, v: EventValue, added: tuple[bool, bool, bool, bool]
) -> None:
    if added[0]:
        state.res.discard(v.re_key)
    if added[1]:
        state.paths.discard(v.path_key)
    if added[2]:
        state.dates.discard(v.date_key)
    if added[3]:
        state.tpaths.discard(v.tpath_key)


def _span_filtered(E: CandidateSet, span: TimeSpan) -> list[Event]:
    return [e for e in E.events if span.contains(e.timestamp)]


def _build_timeline(
    E: CandidateSet,
    s: EntityId,
    m: RelevanceModel,
    spec: LayoutSpec,
    span: TimeSpan,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    *,
    temporal_diversity: bool = True,
    dedup: bool | None = None,
    lazy: bool = True,
    prune_zero_gains: bool = False,
    describe: Callable[[Event], str] | None = None,
    counter: EvalCounter | None = None,
) -> Timeline:
    t_w = spec.time_window(span)
    n = spec.stack_limit
    pool = _span_filtered(E, span)
    if dedup is None:
        dedup = m.content_diversity
    result = select_events(
        pool,
        s,
        m,
        cooc,
        imp,
        t_w,
        n,
        temporal_diversity=temporal_diversity,
        dedup=dedup,
        lazy=lazy,
        counter=counter,
    )
    shown = list(result.displayed)
    if prune_zero_gains:
        shown = [e for e in shown if result.gains.get(e.key, 0.0) > 0.0]
    shown.sort(key=lambda e: e.sort_key)
    objective = rel(s, shown, m, cooc, imp)
    entries = tuple(
        TimelineEvent(
            event=e,
            gain=result.gains.get(e.key, 0.0),
            description=describe(e) if describe is not None else "",
        )
        for e in shown
    )
    return Timeline(
        subject=s, span=span, spec=spec, t_w=t_w, events=entries, objective=objective
    )


def greedy_timeline(
    E: CandidateSet,
    s: EntityId,
    m: RelevanceModel,
    spec: LayoutSpec,
    span: TimeSpan,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    **kwargs,
) -> Timeline:
    """Solve the timeline selection with the naive greedy algorithm."""
    return _build_timeline(E, s, m, spec, span, cooc, imp, lazy=False, **kwargs)


def lazy_greedy_timeline(
    E: CandidateSet,
    s: EntityId,
    m: RelevanceModel,
    spec: LayoutSpec,
    span: TimeSpan,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    **kwargs,
) -> Timeline:
    """Same selection as greedy_timeline via lazy evaluations."""
    return _build_timeline(E, s, m, spec, span, cooc, imp, lazy=True, **kwargs)


def brute_force_timeline(
    E: CandidateSet,
    s: EntityId,
    m: RelevanceModel,
    spec: LayoutSpec,
    span: TimeSpan,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    *,
    dedup: bool = False,
) -> Timeline:
    """Exhaustive reference solution for small candidate sets."""
    t_w = spec.time_window(span)
    pool = _span_filtered(E, span)
    best, objective = brute_force_select(
        pool, s, m, cooc, imp, t_w, spec.stack_limit, dedup=dedup
    )
    entries = tuple(TimelineEvent(event=e, gain=0.0) for e in best)
    return Timeline(
        subject=s, span=span, spec=spec, t_w=t_w, events=entries, objective=objective
    )


def default_timespan(E: CandidateSet, existence: ExistencePeriod | None = None) -> TimeSpan:
    """Shortest span covering at least 90% of the candidate events.

    Events outside the subject's lifetime are excluded first; if none are
    left the window is computed over all events. Ties break to the earliest
    start; a degenerate span widens by one day on each side.
    """
    if not E.events:
        raise ValueError("cannot compute a default span without events")
    days = sorted(e.timestamp.days for e in E.events)
    if existence is not None:
        lo = existence.start.days if existence.start is not None else None
        hi = existence.end.days if existence.end is not None else None
        restricted = [
            d for d in days if (lo is None or d >= lo) and (hi is None or d <= hi)
        ]
        if restricted:
            days = restricted
    need = max(1, math.ceil(DEFAULT_SPAN_COVERAGE * len(days)))
    best_start = days[0]
    best_end = days[need - 1]
    for i in range(len(days) - need + 1):
        start, end = days[i], days[i + need - 1]
        if end - start < best_end - best_start:
            best_start, best_end = start, end
    if best_start == best_end:
        best_start -= 1
        best_end += 1
    return TimeSpan(Timestamp(best_start), Timestamp(best_end))


def zoom(
    E: CandidateSet,
    s: EntityId,
    m: RelevanceModel,
    spec: LayoutSpec,
    new_span: TimeSpan,
    cooc: CooccurrenceStore,
    imp: ImportanceStore,
    **kwargs,
) -> Timeline:
    """Re-select for a new span; stateless with respect to previous output."""
    return lazy_greedy_timeline(E, s, m, spec, new_span, cooc, imp, **kwargs)
