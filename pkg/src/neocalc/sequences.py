"""r-limit analysis of real sequences given as finite prefixes.

A point a is an r-limit of a sequence when all but finitely many elements
stay within r (up to an arbitrarily small slack) of a; the machinery below
realizes that through tail-window envelopes: with S and s the estimated
limit superior / limit inferior of the prefix tail, the defect of a is
max(S - a, a - s) and the set of r-limits is [S - r, s + r].

Everything here certifies the *prefix*, not the infinite sequence: each
``TailBounds`` records the window it used, whether nested sub-windows agreed
(``stable``) and whether the growth heuristic judged the prefix to be
escaping to infinity (``bounded``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .intervals import EMPTY, Interval

DEFAULT_TAIL_FRACTION = 0.25
DEFAULT_STABILITY_TOL = 1e-9
# Resolution slack of the boolean prefix queries.  It mirrors the finest k
# probed by the direct definition checkers (see neocalc.oracles): a finite
# prefix cannot separate defects closer to r than this.
DEFAULT_BOUNDARY_TOL = 1e-3

# Growth heuristic: how many trailing blocks must set fresh records, and how
# much of the overall envelope the escape must cover, before a prefix is
# declared unbounded.
_ESCAPE_BLOCKS = 8
_ESCAPE_RUN = 3
_ESCAPE_SHARE = 0.1


class SequenceWindow:
    """A finite prefix of a real sequence with 1-based index metadata."""

    __slots__ = ("values", "start_index")

    def __init__(self, values, start_index: int = 1):
        arr = np.array(values, dtype=float, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("sequence window must be non-empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sequence values must be finite")
        if int(start_index) < 1:
            raise ValueError("start_index must be >= 1")
        arr.flags.writeable = False
        self.values = arr
        self.start_index = int(start_index)

    def __len__(self) -> int:
        return int(self.values.size)

    def index_at(self, position: int) -> int:
        """Sequence index of the element at 0-based prefix position."""
        return self.start_index + position

    def tail(self, count: int) -> np.ndarray:
        return self.values[-count:]

    def __repr__(self):
        return (f"SequenceWindow(n={len(self)}, start_index={self.start_index}, "
                f"first={self.values[0]!r}, last={self.values[-1]!r})")


@dataclass(frozen=True)
class TailBounds:
    """Tail-window envelope of a prefix: sup/inf estimates plus diagnostics."""

    sup_estimate: float
    inf_estimate: float
    window_size: int
    stable: bool
    bounded: bool


@dataclass(frozen=True)
class LimitReport:
    """Bundle of r-limit results for one sequence prefix."""

    bounds: TailBounds
    measure_of_convergence: float
    best_point: float
    requested_sets: dict[float, Interval] = field(default_factory=dict)


def _looks_unbounded(values: np.ndarray, tolerance: float) -> bool:
    """Monotone-escape heuristic over consecutive blocks of the prefix.

    Fires when each of the last few blocks sets a fresh max (or min) record
    and the total escape is a substantial share of the overall envelope.
    A finite prefix cannot prove divergence; this is an explicit verdict,
    not a certificate.
    """
    n = values.size
    if n < 2 * _ESCAPE_BLOCKS:
        return False
    lo, hi = values.min(), values.max()
    span = hi - lo
    if span <= 0.0:
        return False
    edges = np.linspace(0, n, _ESCAPE_BLOCKS + 1).astype(int)
    maxes = np.array([values[a:b].max() for a, b in zip(edges[:-1], edges[1:])])
    mins = np.array([values[a:b].min() for a, b in zip(edges[:-1], edges[1:])])
    slack = tolerance * max(1.0, abs(hi), abs(lo))

    def escaping(extremes: np.ndarray) -> bool:
        base = extremes[: _ESCAPE_BLOCKS - _ESCAPE_RUN].max()
        running = base
        for value in extremes[_ESCAPE_BLOCKS - _ESCAPE_RUN:]:
            if value <= running + slack:
                return False
            running = value
        return (running - base) >= _ESCAPE_SHARE * span

    return escaping(maxes) or escaping(-mins)


def tail_bounds(seq: SequenceWindow,
                tail_fraction: float = DEFAULT_TAIL_FRACTION,
                tolerance: float = DEFAULT_STABILITY_TOL) -> TailBounds:
    """Estimate limsup/liminf over the trailing ``tail_fraction`` of a prefix.

    ``stable`` is True when the trailing half of the window reproduces the
    same envelope within ``tolerance`` (relative).  ``bounded`` is False when
    the growth heuristic judges the prefix to be escaping.
    """
    if not (0.0 < tail_fraction <= 1.0):
        raise ValueError("tail_fraction must be in (0, 1]")
    if tolerance < 0.0:
        raise ValueError("tolerance must be nonnegative")
    n = len(seq)
    m = int(math.ceil(tail_fraction * n))
    if m < 2:
        raise ValueError(
            f"window too short: tail of {m} element(s), need at least 2")
    window = seq.tail(m)
    sup, inf = float(window.max()), float(window.min())

    half = window[-max(2, m // 2):]
    scale = max(1.0, abs(sup), abs(inf))
    stable = (abs(sup - float(half.max())) <= tolerance * scale
              and abs(inf - float(half.min())) <= tolerance * scale)

    bounded = not _looks_unbounded(seq.values, tolerance)
    return TailBounds(sup_estimate=sup, inf_estimate=inf, window_size=m,
                      stable=stable and bounded, bounded=bounded)


def limit_defect(bounds: TailBounds, a: float) -> float:
    """Minimal r for which a is an r-limit: max(S - a, a - s); inf if unbounded."""
    if not bounds.bounded:
        return math.inf
    return max(bounds.sup_estimate - a, a - bounds.inf_estimate)


def is_r_limit(bounds: TailBounds, a: float, r: float,
               boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> bool:
    """Whether a is an r-limit of the prefix, at estimator resolution.

    Accepts when the defect does not exceed r by more than ``boundary_tol``,
    the same slack the direct definition checker grants through its finest
    probed k.  Unbounded prefixes have no r-limits for any r.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if not bounds.bounded:
        return False
    return limit_defect(bounds, a) <= r + boundary_tol


def r_limit_set(bounds: TailBounds, r: float) -> Interval:
    """The interval of all r-limits, [S - r, s + r], possibly empty."""
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if not bounds.bounded:
        return EMPTY
    return Interval.make(bounds.sup_estimate - r, bounds.inf_estimate + r)


def measure_of_convergence(bounds: TailBounds) -> tuple[float, float]:
    """Minimal radius with a non-empty r-limit set, and the point attaining it.

    Returns ((S - s) / 2, (S + s) / 2); (inf, nan) for unbounded prefixes.
    Zero exactly when the window has settled on a single value.
    """
    if not bounds.bounded:
        return math.inf, math.nan
    half_gap = 0.5 * (bounds.sup_estimate - bounds.inf_estimate)
    center = 0.5 * (bounds.sup_estimate + bounds.inf_estimate)
    return half_gap, center


def is_r_fundamental(bounds: TailBounds, r: float,
                     boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> bool:
    """Cauchy-with-slack: tail elements pairwise within 2r (at resolution).

    Equivalent to the r-limit set being non-empty (extended Cauchy
    criterion); false for every r on unbounded prefixes.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if not bounds.bounded:
        return False
    return (bounds.sup_estimate - bounds.inf_estimate) <= 2.0 * r + boundary_tol


def fuzzy_converges(bounds: TailBounds) -> bool:
    """Whether the prefix has an r-limit for some finite r (= boundedness)."""
    return bounds.bounded


def membership_lim(bounds: TailBounds, a: float) -> float:
    """Fuzzy-limit membership grade 1 / (1 + defect(a)); 0 when unbounded.

    Equals 1 exactly when a is the (classical) limit of the window.
    """
    if not bounds.bounded:
        return 0.0
    return 1.0 / (1.0 + limit_defect(bounds, a))


def combine(l: SequenceWindow, h: SequenceWindow | None, op: str,
            r: float, q: float = 0.0, k: float | None = None,
            tail_fraction: float = DEFAULT_TAIL_FRACTION,
            tolerance: float = DEFAULT_STABILITY_TOL,
            ) -> tuple[SequenceWindow, Interval]:
    """Element-wise combination with its predicted limit set.

    For ``add``/``sub`` the prediction is the Minkowski sum/difference of the
    operands' r- and q-limit sets, valid at radius r + q; for ``scale`` it is
    the k-scaled r-limit set of ``l``, valid at radius ``abs(k) * r``.  The
    prediction is always contained in the combined prefix's own limit set at
    the corresponding radius.
    """
    if r < 0.0 or q < 0.0:
        raise ValueError("radii must be nonnegative")
    bounds_l = tail_bounds(l, tail_fraction, tolerance)
    if op == "scale":
        if k is None:
            raise ValueError("scale requires the factor k")
        combined = SequenceWindow(k * l.values, l.start_index)
        predicted = r_limit_set(bounds_l, r).scale(k)
        return combined, predicted
    if op not in ("add", "sub"):
        raise ValueError(f"unknown combination op: {op!r}")
    if h is None:
        raise ValueError(f"{op} requires a second sequence")
    if len(l) != len(h) or l.start_index != h.start_index:
        raise ValueError("sequences must have equal lengths and start indices")
    bounds_h = tail_bounds(h, tail_fraction, tolerance)
    set_l = r_limit_set(bounds_l, r)
    set_h = r_limit_set(bounds_h, q)
    if op == "add":
        combined = SequenceWindow(l.values + h.values, l.start_index)
        predicted = set_l + set_h
    else:
        combined = SequenceWindow(l.values - h.values, l.start_index)
        predicted = set_l - set_h
    return combined, predicted


def analyze_sequence(seq: SequenceWindow, r_values=(),
                     tail_fraction: float = DEFAULT_TAIL_FRACTION,
                     tolerance: float = DEFAULT_STABILITY_TOL) -> LimitReport:
    """Full limit report: envelope, measure of convergence, requested sets."""
    bounds = tail_bounds(seq, tail_fraction, tolerance)
    measure, best = measure_of_convergence(bounds)
    sets = {float(r): r_limit_set(bounds, float(r)) for r in r_values}
    return LimitReport(bounds=bounds, measure_of_convergence=measure,
                       best_point=best, requested_sets=sets)
