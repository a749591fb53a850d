"""Temporal layout constraint.

An event set is feasible when no half-open time window of length t_w holds
more than n timestamps, where t_w is the time span covered by one box width
on screen and n the number of boxes stackable in the screen height. The
family of feasible sets is downward closed and its maximal-subset sizes
never differ by more than a factor of two, which is what gives the greedy
selector its guarantee. All comparisons are exact (integer days against a
rational t_w).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .kb_graph import Timestamp

ORACLE_MAX_ELEMENTS = 20
BASES_MAX_ELEMENTS = 16


@dataclass(frozen=True)
class TimeSpan:
    """Inclusive day-resolution time range."""

    start: Timestamp
    end: Timestamp

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError("span end before start")

    @property
    def length_days(self) -> int:
        return self.end.days - self.start.days

    def contains(self, ts: Timestamp) -> bool:
        return self.start <= ts <= self.end

    def to_json_dict(self) -> dict:
        return {"start": self.start.iso, "end": self.end.iso}


@dataclass(frozen=True)
class LayoutSpec:
    """Screen geometry in pixels: full canvas (W, H) and one event box (w, h)."""

    screen_width: int = 1000
    screen_height: int = 100
    box_width: int = 100
    box_height: int = 50

    def __post_init__(self) -> None:
        if self.box_width <= 0 or self.box_height <= 0:
            raise ValueError("box dimensions must be positive")
        if self.screen_width < self.box_width:
            raise ValueError("screen narrower than one box")
        if self.screen_height < self.box_height:
            raise ValueError("screen shorter than one box")

    @property
    def stack_limit(self) -> int:
        """n: boxes stackable vertically."""
        return self.screen_height // self.box_height

    def time_window(self, span: TimeSpan) -> Fraction:
        return compute_tw(self.screen_width, self.box_width, span)


def compute_tw(screen_width: int, box_width: int, span: TimeSpan) -> Fraction:
    """Days covered by one box width: w * (end - start) / W, exact."""
    if span.length_days <= 0:
        raise ValueError("empty span")
    if not 0 < box_width <= screen_width:
        raise ValueError("need 0 < box width <= screen width")
    return Fraction(box_width * span.length_days, screen_width)


def _sorted_days(timestamps: Iterable[int]) -> list[int]:
    return sorted(timestamps)


def is_independent(timestamps: Iterable[int], t_w: "Fraction | int", n: int) -> bool:
    """True iff every half-open window of length t_w holds <= n timestamps.

    Sorted sweep: any n+1 consecutive timestamps must span at least t_w.
    """
    days = _sorted_days(timestamps)
    for i in range(len(days) - n):
        if days[i + n] - days[i] < t_w:
            return False
    return True


def is_independent_interval_form(
    timestamps: Iterable[int], t_w: "Fraction | int", n: int
) -> bool:
    """Subset-enumeration oracle: every (n+1)+-subset spans at least t_w.

    Exponential; refuses more than ORACLE_MAX_ELEMENTS timestamps. Used only
    for differential testing against the sweep implementation.
    """
    days = list(timestamps)
    if len(days) > ORACLE_MAX_ELEMENTS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_ELEMENTS} elements")
    for size in range(n + 1, len(days) + 1):
        for subset in combinations(days, size):
            if max(subset) - min(subset) < t_w:
                return False
    return True


def can_add(
    sorted_timestamps: Sequence[int], day: int, t_w: "Fraction | int", n: int
) -> bool:
    """Whether inserting ``day`` keeps an already-independent set independent.

    Only windows containing the insertion point can become violated, so only
    the n-apart pairs straddling it are checked.
    """
    days = sorted_timestamps
    k = bisect.bisect_left(days, day)
    new_len = len(days) + 1

    def at(i: int) -> int:
        if i < k:
            return days[i]
        if i == k:
            return day
        return days[i - 1]

    lo = max(0, k - n)
    hi = min(new_len - 1 - n, k)
    for i in range(lo, hi + 1):
        if at(i + n) - at(i) < t_w:
            return False
    return True


def enumerate_bases(
    timestamps: Sequence[int], t_w: "Fraction | int", n: int
) -> list[tuple[int, ...]]:
    """All maximal independent subsets of the ground set (test oracle).

    Elements are addressed by index so duplicate timestamps stay distinct;
    returned bases are sorted value tuples. Refuses ground sets larger than
    BASES_MAX_ELEMENTS.
    """
    if len(timestamps) > BASES_MAX_ELEMENTS:
        raise ValueError(f"base enumeration limited to {BASES_MAX_ELEMENTS} elements")
    indices = range(len(timestamps))
    independent: list[tuple[int, ...]] = []
    for size in range(len(timestamps) + 1):
        for subset in combinations(indices, size):
            values = [timestamps[i] for i in subset]
            if is_independent(values, t_w, n):
                independent.append(subset)
    independent_set = set(independent)
    bases: list[tuple[int, ...]] = []
    for subset in independent:
        chosen = set(subset)
        maximal = True
        for extra in indices:
            if extra in chosen:
                continue
            if tuple(sorted(chosen | {extra})) in independent_set:
                maximal = False
                break
        if maximal:
            bases.append(tuple(sorted(timestamps[i] for i in subset)))
    return bases


def filter_to_span(days: Iterable[int], span: TimeSpan) -> list[int]:
    return [d for d in days if span.start.days <= d <= span.end.days]
