"""Finite unions of closed rational intervals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


class IntervalSet:
    """Sorted list of closed intervals.

    Intervals may touch or overlap until :meth:`normalized` merges them; covers
    keep their members separate so counts like ``(b-1)**n`` stay visible.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval | tuple] = ()):
        items = [iv if isinstance(iv, Interval) else Interval(*iv) for iv in intervals]
        self.intervals: tuple[Interval, ...] = tuple(sorted(items))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __getitem__(self, i) -> Interval:
        return self.intervals[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __repr__(self) -> str:
        body = ", ".join(f"[{iv.lo}, {iv.hi}]" for iv in self.intervals[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"IntervalSet({len(self)}: {body}{more})"

    def __contains__(self, x) -> bool:
        return any(x in iv for iv in self.intervals)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    @property
    def total_length(self) -> Fraction:
        """Lebesgue measure of the union."""
        return sum((iv.length for iv in self.normalized()), Fraction(0))

    def normalized(self) -> "IntervalSet":
        merged: list[Interval] = []
        for iv in self.intervals:
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        return IntervalSet(merged)

    def interiors_disjoint(self) -> bool:
        """True when consecutive members overlap in at most an endpoint."""
        return all(a.hi <= b.lo for a, b in zip(self.intervals, self.intervals[1:]))
