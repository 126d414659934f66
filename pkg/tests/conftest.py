"""Shared fixtures: bounded random prefixes for the differential-test corpus."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from neocalc import SequenceWindow, tail_bounds

CORPUS_SEED = 20260810
# Queries are drawn at least this far from the measured decision boundary:
# inside that band the prefix data genuinely cannot decide and the checkers'
# stated resolutions (1e-3) are allowed to differ.
SEPARATION = 2e-3


@dataclasses.dataclass
class CorpusEntry:
    seq: SequenceWindow
    bounds: object
    # sup-window deviations are computed per query point, lazily
    tail10_start: int

    def tail10(self) -> np.ndarray:
        return self.seq.values[self.tail10_start:]

    def window25(self) -> np.ndarray:
        return self.seq.values[-self.bounds.window_size:]


def _bounded_sequence(rng: np.random.Generator) -> np.ndarray:
    n = int(rng.integers(1000, 10001))
    family = rng.integers(0, 5)
    center = float(rng.uniform(-5.0, 5.0))
    amp = float(rng.uniform(0.1, 3.0))
    i = np.arange(1, n + 1, dtype=float)
    if family == 0:
        # iid noise
        return center + amp * rng.uniform(-1.0, 1.0, n)
    if family == 1:
        # quantized oscillator over a small value set (tail extremes settle)
        levels = center + amp * np.array([-1.0, -0.25, 0.3, 1.0])
        return levels[rng.integers(0, len(levels), n)]
    if family == 2:
        # two-level alternation with decaying perturbation
        return center + amp * (-1.0) ** i * (1.0 + 1.0 / i)
    if family == 3:
        # sinusoid with incommensurate frequency
        omega = float(rng.uniform(0.1, 2.0))
        phase = float(rng.uniform(0.0, 6.28))
        return center + amp * np.sin(omega * i + phase)
    # convergent with decaying noise
    return center + amp / i + amp * rng.uniform(-1.0, 1.0, n) * 0.5 ** np.minimum(i, 60)


@pytest.fixture(scope="session")
def corpus() -> list[CorpusEntry]:
    rng = np.random.default_rng(CORPUS_SEED)
    entries = []
    for _ in range(1000):
        values = _bounded_sequence(rng)
        seq = SequenceWindow(values)
        bounds = tail_bounds(seq)
        entries.append(CorpusEntry(seq=seq, bounds=bounds,
                                   tail10_start=int(0.9 * len(seq))))
    return entries


@pytest.fixture(scope="session")
def corpus_rng() -> np.random.Generator:
    return np.random.default_rng(CORPUS_SEED + 1)
