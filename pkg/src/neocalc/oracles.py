"""Definition-level brute-force checkers for differential testing.

These walk the raw quantifier structure ("for every slack k there is a cutoff
past which all elements comply") instead of using the closed-form envelopes,
so they can confirm or refute the envelope implementations independently.
They are deliberately naive; performance is not a goal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import SequenceWindow

DEFAULT_K_GRID = (1.0, 0.1, 0.01, 0.001)
# The compliant tail must begin inside the first 90% of the prefix, so that
# at least the trailing 10% actually witnesses it.
TAIL_ATTAINMENT = 0.9
# Pairwise checks subsample tails beyond this many elements.
PAIRWISE_CAP = 2000


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of a direct check.

    When ``holds`` is True, ``witness_index`` is the sequence index from
    which the tightest-slack inequality holds through the end of the prefix.
    When False, it points at a concrete violating element past the
    attainment cutoff.
    """

    holds: bool
    witness_index: int | None
    k_grid: tuple[float, ...]


def _validated_grid(k_grid) -> tuple[float, ...]:
    grid = tuple(float(k) for k in k_grid)
    if not grid:
        raise ValueError("k_grid must be non-empty")
    if any(k <= 0.0 for k in grid):
        raise ValueError("k_grid entries must be strictly positive")
    if list(grid) != sorted(grid, reverse=True):
        raise ValueError("k_grid must be sorted in descending order")
    return grid


def is_r_limit_direct(seq: SequenceWindow, a: float, r: float,
                      k_grid=DEFAULT_K_GRID) -> OracleVerdict:
    """Scan for the cutoff past which |a - a_i| <= r + k, for every k.

    Holds iff for each k some cutoff within the first 90% of the prefix
    leaves only compliant elements behind it.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    grid = _validated_grid(k_grid)
    deviations = np.abs(seq.values - a)
    n = len(seq)
    max_cutoff = int(TAIL_ATTAINMENT * n)

    first_tail_pos = 0
    for k in grid:
        violations = np.nonzero(deviations > r + k)[0]
        if violations.size == 0:
            continue
        needed_cutoff = int(violations[-1]) + 1
        if needed_cutoff > max_cutoff:
            return OracleVerdict(holds=False,
                                 witness_index=seq.index_at(int(violations[-1])),
                                 k_grid=grid)
        # grid is descending, so the last (smallest) k decides the tail start
        first_tail_pos = needed_cutoff
    return OracleVerdict(holds=True, witness_index=seq.index_at(first_tail_pos),
                         k_grid=grid)


def _subsample(tail: np.ndarray) -> np.ndarray:
    if tail.size <= PAIRWISE_CAP:
        return tail
    picks = np.linspace(0, tail.size - 1, PAIRWISE_CAP).astype(int)
    return tail[picks]


def _max_pairwise(tail: np.ndarray) -> tuple[float, int]:
    """Largest |a_i - a_j| over a (subsampled) tail and one member's offset."""
    sub = _subsample(tail)
    diffs = np.abs(np.subtract.outer(sub, sub))
    flat = int(np.argmax(diffs))
    i, j = divmod(flat, sub.size)
    spread = float(diffs[i, j])
    # map the subsample offset back onto the original tail
    if tail.size <= PAIRWISE_CAP:
        original = max(i, j)
    else:
        picks = np.linspace(0, tail.size - 1, PAIRWISE_CAP).astype(int)
        original = int(picks[max(i, j)])
    return spread, original


def is_r_fundamental_direct(seq: SequenceWindow, r: float,
                            k_grid=DEFAULT_K_GRID) -> OracleVerdict:
    """Pairwise tail check of |a_i - a_j| <= 2r + k for every k.

    Shrinking the tail can only shrink its pairwise spread, so some
    admissible cutoff works if and only if the largest admissible cutoff
    does; that single tail is checked pair by pair (subsampled beyond the
    cap).  Passing the tightest slack certifies every looser one.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    grid = _validated_grid(k_grid)
    n = len(seq)
    cutoff = int(TAIL_ATTAINMENT * n)
    tail = seq.values[cutoff:]
    if tail.size < 2:
        return OracleVerdict(holds=True, witness_index=seq.index_at(cutoff),
                             k_grid=grid)
    spread, offset = _max_pairwise(tail)
    if spread <= 2.0 * r + grid[-1]:
        return OracleVerdict(holds=True, witness_index=seq.index_at(cutoff),
                             k_grid=grid)
    return OracleVerdict(holds=False,
                         witness_index=seq.index_at(cutoff + offset),
                         k_grid=grid)


def weak_quotient_limit_direct(quotients: SequenceWindow, b: float, r: float,
                               k_grid=DEFAULT_K_GRID) -> OracleVerdict:
    """Direct r-limit check on a caller-materialized difference-quotient sequence.

    This is how weak derivatives along an explicitly chosen approach sequence
    are tested when the underlying function cannot be sampled meaningfully.
    """
    return is_r_limit_direct(quotients, b, r, k_grid)
