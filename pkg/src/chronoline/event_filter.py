"""Statistical path filtering.

Two corpus-level heuristics drop whole time-path types: the frequency filter
removes paths whose (related entity, timestamp) targets are shared by many
subjects, and the existence filter removes paths whose events predominantly
precede the subject's existence period. Also reports candidate coverage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .event_gen import KIND_COMPOUND, CandidateSet
from .kb_graph import KnowledgeGraph

DEFAULT_COVERAGE_THRESHOLDS = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)


@dataclass(frozen=True)
class FilterConfig:
    theta1: int = 50
    theta2: float = 0.5
    theta3: float = 0.5
    drop_pre_existence_instances: bool = True

    def __post_init__(self) -> None:
        if self.theta1 < 0:
            raise ValueError("theta1 must be >= 0")
        for name in ("theta2", "theta3"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass
class PathStats:
    """Counts for one time path.

    ``n_subjects`` maps each (related entity, timestamp-days) pair to the
    number of distinct subjects reaching it via this path; ``n_pairs`` is the
    number of such pairs and ``c_heavy(theta1)`` the number of pairs exceeding
    the subject-count threshold.
    """

    path: str
    n_subjects: dict[tuple[str, int], int] = field(default_factory=dict)

    @property
    def n_pairs(self) -> int:
        return len(self.n_subjects)

    def c_heavy(self, theta1: int) -> int:
        return sum(1 for count in self.n_subjects.values() if count > theta1)


def compute_path_stats(all_candidates: Iterable[CandidateSet]) -> dict[str, PathStats]:
    """Exact per-time-path counts over the whole candidate corpus."""
    seen: dict[str, dict[tuple[str, int], set[str]]] = {}
    for cs in all_candidates:
        for event in cs.events:
            pairs = seen.setdefault(event.time_path, {})
            pairs.setdefault((event.related_entity, event.timestamp.days), set()).add(
                event.subject
            )
    stats: dict[str, PathStats] = {}
    for path in sorted(seen):
        stats[path] = PathStats(
            path=path,
            n_subjects={pair: len(subjects) for pair, subjects in sorted(seen[path].items())},
        )
    return stats


def frequency_filter(stats: Mapping[str, PathStats], cfg: FilterConfig) -> set[str]:
    """Paths with C/N strictly above theta2 are dropped for all subjects."""
    theta2 = Fraction(cfg.theta2)
    dropped: set[str] = set()
    for path, ps in stats.items():
        if ps.n_pairs == 0:
            continue
        if Fraction(ps.c_heavy(cfg.theta1), ps.n_pairs) > theta2:
            dropped.add(path)
    return dropped


@dataclass(frozen=True)
class ExistenceDecision:
    dropped_paths: frozenset[str]
    flagged_events: frozenset[tuple]  # dedup keys of pre-existence instances
    # per path: (flagged instances, instances with known subject existence)
    per_path: Mapping[str, tuple[int, int]]


def existence_filter(
    all_candidates: Iterable[CandidateSet],
    g: KnowledgeGraph,
    cfg: FilterConfig,
) -> ExistenceDecision:
    """Flag events preceding their subject's existence; vote per path.

    An instance counts when its subject has a known existence start. A path
    whose flagged fraction strictly exceeds theta3 is dropped everywhere.
    """
    theta3 = Fraction(cfg.theta3)
    flagged: set[tuple] = set()
    per_path: dict[str, list[int]] = {}
    for cs in all_candidates:
        period = g.existence.get(cs.subject)
        start = period.start if period is not None else None
        for event in cs.events:
            if start is None:
                continue
            counts = per_path.setdefault(event.time_path, [0, 0])
            counts[1] += 1
            if event.timestamp < start:
                counts[0] += 1
                flagged.add(event.dedup_key)
    dropped = {
        path
        for path, (pre, known) in per_path.items()
        if known > 0 and Fraction(pre, known) > theta3
    }
    return ExistenceDecision(
        dropped_paths=frozenset(dropped),
        flagged_events=frozenset(flagged),
        per_path={path: (pre, known) for path, (pre, known) in sorted(per_path.items())},
    )


def apply_filters(
    cs: CandidateSet,
    dropped: Iterable[str],
    flagged_events: Iterable[tuple] = (),
) -> CandidateSet:
    """Remove events whose time path was dropped, preserving order.

    ``flagged_events`` optionally removes individual pre-existence instances
    of surviving paths (the per-instance refinement; pass () to reproduce the
    path-level-only behavior).
    """
    dropped_set = set(dropped)
    flagged_set = set(flagged_events)
    kept = tuple(
        e
        for e in cs.events
        if e.time_path not in dropped_set and e.dedup_key not in flagged_set
    )
    return CandidateSet(subject=cs.subject, events=kept)


def coverage_report(
    all_candidates: Iterable[CandidateSet],
    thresholds: Iterable[int] = DEFAULT_COVERAGE_THRESHOLDS,
) -> dict[int, tuple[int, int]]:
    """Entities with at least X candidate events, per threshold X.

    Returns {X: (count using simple events only, count using all events)};
    both curves are non-increasing in X and the combined curve dominates.
    """
    simple_counts: list[int] = []
    all_counts: list[int] = []
    for cs in all_candidates:
        n_all = len(cs.events)
        n_simple = sum(1 for e in cs.events if e.kind != KIND_COMPOUND)
        simple_counts.append(n_simple)
        all_counts.append(n_all)
    report: dict[int, tuple[int, int]] = {}
    for x in sorted(set(int(t) for t in thresholds)):
        report[x] = (
            sum(1 for c in simple_counts if c >= x),
            sum(1 for c in all_counts if c >= x),
        )
    return report


def frequency_report_rows(
    stats: Mapping[str, PathStats], cfg: FilterConfig, dropped: set[str]
) -> list[dict]:
    rows = []
    for path in sorted(stats):
        ps = stats[path]
        if ps.n_pairs == 0:
            continue
        rows.append(
            {
                "path": path,
                "N": ps.n_pairs,
                "C": ps.c_heavy(cfg.theta1),
                "ratio": ps.c_heavy(cfg.theta1) / ps.n_pairs,
                "decision": "drop" if path in dropped else "keep",
                "filter": "frequency",
            }
        )
    return rows


def existence_report_rows(decision: ExistenceDecision) -> list[dict]:
    rows = []
    for path in sorted(decision.per_path):
        pre, known = decision.per_path[path]
        rows.append(
            {
                "path": path,
                "N": known,
                "C": pre,
                "ratio": (pre / known) if known else 0.0,
                "decision": "drop" if path in decision.dropped_paths else "keep",
                "filter": "existence",
            }
        )
    return rows
