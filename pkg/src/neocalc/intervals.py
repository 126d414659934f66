"""Closed real intervals with a distinguished empty value.

Intervals are the value type of every r-limit / r-derivative set in this
package.  They are immutable; the empty set is the module-level singleton
``EMPTY`` (canonically stored as [+inf, -inf] so that equality and hashing
behave).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi], or the empty set (``EMPTY``)."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == math.inf and hi == -math.inf:
            return  # canonical empty interval
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"invalid interval: lo={lo} > hi={hi}")

    @staticmethod
    def make(lo: float, hi: float) -> "Interval":
        """[lo, hi] when lo <= hi, otherwise the empty interval."""
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            return EMPTY
        return Interval(lo, hi)

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.is_empty else self.hi - self.lo

    @property
    def midpoint(self) -> float:
        if self.is_empty:
            raise ValueError("the empty interval has no midpoint")
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return (not self.is_empty) and (self.lo - tol <= x <= self.hi + tol)

    def contains_interval(self, other: "Interval", tol: float = 0.0) -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return self.lo - tol <= other.lo and other.hi <= self.hi + tol

    def intersect(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval.make(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        """Smallest interval containing both operands."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other: "Interval") -> "Interval":
        """Minkowski sum."""
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        """Minkowski difference A + (-B)."""
        return self + (-other)

    def scale(self, k: float) -> "Interval":
        if self.is_empty:
            return EMPTY
        a, b = k * self.lo, k * self.hi
        return Interval(min(a, b), max(a, b))

    def inflate(self, r: float) -> "Interval":
        """The r-neighborhood [lo - r, hi + r] (r >= 0)."""
        if r < 0:
            raise ValueError("inflation radius must be nonnegative")
        if self.is_empty:
            return EMPTY
        return Interval(self.lo - r, self.hi + r)

    def distance_to(self, x: float) -> float:
        """Distance from the point x to the interval (inf when empty)."""
        if self.is_empty:
            return math.inf
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return 0.0

    def to_json(self):
        """[lo, hi] for plain intervals, None for the empty set."""
        return None if self.is_empty else [self.lo, self.hi]

    def __repr__(self):
        if self.is_empty:
            return "Interval.EMPTY"
        return f"Interval({self.lo!r}, {self.hi!r})"


EMPTY = Interval(math.inf, -math.inf)


def merge_intervals(parts, tol: float = 0.0) -> tuple[Interval, ...]:
    """Union of intervals as a sorted tuple, merging overlaps and gaps <= tol."""
    kept = sorted((p for p in parts if not p.is_empty), key=lambda p: p.lo)
    if not kept:
        return ()
    merged = [kept[0]]
    for part in kept[1:]:
        last = merged[-1]
        if part.lo <= last.hi + tol:
            merged[-1] = Interval(last.lo, max(last.hi, part.hi))
        else:
            merged.append(part)
    return tuple(merged)
