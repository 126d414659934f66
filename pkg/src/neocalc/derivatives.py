"""Difference-quotient envelopes and interval-valued derivative sets.

For each approach mode (left, right, centered, two-sided straddles) the
quotients (f(x) - f(y)) / (x - y) are sampled over a geometric ladder of
scales, grouped into bands of consecutive scales, and summarized by the
envelope of the finest bands.  With D- and D+ the extreme subsequential
limit estimates of the cloud:

* the strong r-derivative set is [D+ - r, D- + r] (possibly empty),
* the derivative defect is (D+ - D-) / 2, the least radius with a
  non-empty strong set,
* the membership grade of a candidate slope z is 1 / (1 + m(z)) with
  m(z) = max(D+ - z, z - D-).

Envelopes are estimates with stability diagnostics, not certified bounds.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .functions import BudgetExhausted, Evaluator, FunctionOracle
from .intervals import EMPTY, Interval, merge_intervals

# Straddle mixing ratios: position of x inside the straddle span.  The
# near-0/near-1 entries let straddles approach one-sided behavior, which the
# envelope needs at discontinuities.
MIX_RATIOS = (1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 0.9999)

# Band envelopes widening by this factor over each of the trailing
# transitions mean the quotient cloud is escaping: declared unbounded.
DIVERGENCE_FACTOR = 2.0
DIVERGENCE_RUN = 3

BAND_AGREEMENT_TOL = 1e-6
# Classification threshold: defects below this (relative) level count as a
# vanishing defect, i.e. a classical derivative.
CLASSICAL_DEFECT_TOL = 1e-4
WEAK_MERGE_TOL = 1e-6


class ApproachMode(Enum):
    """Which approach sequences the quotients range over."""

    CENTERED = "centered"
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"

    @staticmethod
    def parse(text: str) -> "ApproachMode":
        normalized = text.strip().lower().replace("_", "-")
        for mode in ApproachMode:
            if mode.value == normalized:
                return mode
        raise ValueError(f"unknown approach mode: {text!r}")


class Classification(Enum):
    CLASSICALLY_DIFFERENTIABLE = "classically_differentiable"
    FUZZY_DIFFERENTIABLE = "fuzzy_differentiable"
    NOT_FUZZY_DIFFERENTIABLE = "not_fuzzy_differentiable"


@dataclass(frozen=True)
class ScaleLadder:
    """Geometric ladder of evaluation offsets around the analysis point.

    Scales run from ``base * max(1, |x|)`` down by ``factor`` per rung, for at
    most ``count`` rungs, floored at ``floor * max(1, |x|)`` to keep quotient
    numerators clear of rounding noise.  Consecutive groups of ``band`` scales
    form the bands the envelope statistics are taken over.
    """

    base: float = 0.1
    factor: float = 0.5
    count: int = 41
    floor: float = 1e-7
    band: int = 4

    def __post_init__(self):
        if not (0.0 < self.factor < 1.0):
            raise ValueError("factor must be in (0, 1)")
        if not (0.0 < self.floor < self.base):
            raise ValueError("need 0 < floor < base")
        if self.count < 1 or self.band < 1:
            raise ValueError("count and band must be positive")

    def scales(self, x: float) -> np.ndarray:
        local = max(1.0, abs(x))
        hs = self.base * local * self.factor ** np.arange(self.count)
        return hs[hs >= self.floor * local]


@dataclass(frozen=True)
class QuotientBounds:
    """Envelope summary of one mode's difference-quotient cloud at x.

    ``left_cluster`` / ``right_cluster`` are the per-side band envelopes
    (empty when that side is unavailable or divergent).  They are interval
    hulls of the true cluster sets, exact when the one-sided quotient is
    continuous in the scale (``cluster_is_hull`` records the caveat).
    ``scale_diagnostics`` lists (scale, band_min, band_max) per band.
    """

    mode: ApproachMode
    x: float
    d_lower: float
    d_upper: float
    left_cluster: Interval
    right_cluster: Interval
    bounded: bool
    scale_diagnostics: tuple = ()
    stable: bool = False
    cluster_is_hull: bool = True
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class DerivativeReport:
    """Per-point derivative analysis across all available approach modes."""

    x: float
    per_mode: dict
    defect: float
    derivative_estimate: float
    classification: Classification
    continuity_defect: float
    strong_sets: dict = field(default_factory=dict)
    weak_sets: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()
    evaluations: int = 0


@dataclass(frozen=True)
class ProfilePoint:
    x: float
    strong: Interval
    defect: float
    mu_band: Interval
    error: str | None = None


@dataclass(frozen=True)
class CombinedPrediction:
    """Envelope bounds predicted for a pointwise combination of two functions."""

    x: float
    per_mode: dict
    defect_bound: float
    derivative_estimate: float

    def predicted_strong(self, mode: ApproachMode, r: float) -> Interval:
        d_lower, d_upper, bounded = self.per_mode[mode]
        if not bounded:
            return EMPTY
        return Interval.make(d_upper - r, d_lower + r)


# ---------------------------------------------------------------------------
# sampling


class _Samples:
    """Quotient samples grouped per nominal ladder scale (descending)."""

    def __init__(self):
        self.scales: list[float] = []
        self.groups: list[list[float]] = []

    def add(self, scale: float, values: list[float]):
        if values:
            self.scales.append(scale)
            self.groups.append(values)

    def __bool__(self):
        return bool(self.scales)

    def pairs(self) -> list[tuple[float, float]]:
        return [(h, q) for h, group in zip(self.scales, self.groups)
                for q in group]


def _side_samples(ev: Evaluator, x: float, sign: int, scales,
                  flags: set) -> _Samples:
    out = _Samples()
    try:
        fx = ev(x)
    except BudgetExhausted:
        flags.add("budget_exhausted")
        return out
    seen = set()
    for h in scales:
        z = ev.snap(x + sign * h)
        if z == x or z in seen:
            if ev.oracle.snap is not None:
                flags.add("mesh_limited")
            continue
        if not ev.in_domain(z):
            flags.add("domain_clipped")
            continue
        seen.add(z)
        try:
            q = (fx - ev(z)) / (x - z)
        except BudgetExhausted:
            flags.add("budget_exhausted")
            break
        out.add(abs(x - z), [q])
    return out


def _straddle_samples(ev: Evaluator, x: float, scales, flags: set) -> _Samples:
    # quotients use the actual (snapped) pair coordinates, so any pair that
    # straddles x strictly is honest; the ladder floor already bounds the span
    out = _Samples()
    seen = set()
    for s in scales:
        values = []
        for lam in MIX_RATIOS:
            u, v = ev.snap(x - lam * s), ev.snap(x + (1.0 - lam) * s)
            if not (u < x < v) or (u, v) in seen:
                continue
            if not (ev.in_domain(u) and ev.in_domain(v)):
                flags.add("domain_clipped")
                continue
            seen.add((u, v))
            try:
                values.append((ev(v) - ev(u)) / (v - u))
            except BudgetExhausted:
                flags.add("budget_exhausted")
                out.add(s, values)
                return out
        out.add(s, values)
    return out


def quotient_samples(f: FunctionOracle, x: float, mode: ApproachMode,
                     ladder: ScaleLadder = ScaleLadder(),
                     ) -> list[tuple[float, float]]:
    """Raw (scale, quotient) samples for one approach mode at x."""
    if not f.domain.contains(x):
        raise ValueError(f"x={x} is outside the oracle domain")
    ev = Evaluator(f)
    scales = ladder.scales(x)
    flags: set = set()
    if mode is ApproachMode.LEFT:
        return _side_samples(ev, x, -1, scales, flags).pairs()
    if mode is ApproachMode.RIGHT:
        return _side_samples(ev, x, +1, scales, flags).pairs()
    if mode is ApproachMode.CENTERED:
        left = _side_samples(ev, x, -1, scales, flags)
        right = _side_samples(ev, x, +1, scales, flags)
        return sorted(left.pairs() + right.pairs(), key=lambda p: -p[0])
    return _straddle_samples(ev, x, scales, flags).pairs()


# ---------------------------------------------------------------------------
# band envelopes


@dataclass(frozen=True)
class _Envelope:
    d_lower: float
    d_upper: float
    bounded: bool
    stable: bool
    bands: tuple


def _band_stats(samples: _Samples, band_size: int) -> list[tuple[float, float, float]]:
    bands = []
    for start in range(0, len(samples.scales), band_size):
        chunk_scales = samples.scales[start:start + band_size]
        chunk = [q for group in samples.groups[start:start + band_size]
                 for q in group]
        if not chunk:
            continue
        h_mid = math.sqrt(chunk_scales[0] * chunk_scales[-1])
        bands.append((h_mid, min(chunk), max(chunk)))
    return bands


def _hull_bands(a: list, b: list) -> list:
    """Per-band hull of two band lists, aligned at the finest scale."""
    ra, rb = a[::-1], b[::-1]
    out = []
    for i in range(max(len(ra), len(rb))):
        if i < len(ra) and i < len(rb):
            (ha, lo_a, hi_a), (hb, lo_b, hi_b) = ra[i], rb[i]
            out.append((math.sqrt(ha * hb), min(lo_a, lo_b), max(hi_a, hi_b)))
        else:
            out.append(ra[i] if i < len(ra) else rb[i])
    return out[::-1]


def _envelope_from_bands(bands: list, noise_scale: float) -> _Envelope | None:
    """Envelope of the finest two bands, with a rounding-noise floor.

    Quotients carry roundoff of order eps * |f| / h, so band spreads below
    ``noise_scale / h`` are measurement noise, not evidence of a defect (the
    envelope collapses to its midpoint) nor of divergence.
    """
    if not bands:
        return None
    tail = bands[-2:]
    d_lower = min(lo for _, lo, _ in tail)
    d_upper = max(hi for _, _, hi in tail)
    noise = noise_scale / bands[-1][0]

    widths = [hi - lo for _, lo, hi in bands]
    diverging = False
    if len(widths) >= DIVERGENCE_RUN + 1:
        trailing = widths[-(DIVERGENCE_RUN + 1):]
        diverging = (trailing[-1] > max(noise, 1e-9 * (1.0 + abs(d_upper)
                                                       + abs(d_lower)))
                     and all(b >= DIVERGENCE_FACTOR * a
                             for a, b in zip(trailing, trailing[1:])))

    stable = False
    if len(bands) >= 2 and not diverging:
        _, prev_lo, prev_hi = bands[-2]
        _, last_lo, last_hi = bands[-1]
        tol = max(BAND_AGREEMENT_TOL * (1.0 + max(abs(d_lower), abs(d_upper))),
                  noise)
        # refinement containment: the finest band must not escape the
        # previous one (shrinking under refinement is expected and fine)
        stable = (last_lo >= prev_lo - tol) and (last_hi <= prev_hi + tol)

    if 0.0 < d_upper - d_lower <= noise:
        mid = 0.5 * (d_lower + d_upper)
        d_lower = d_upper = mid

    return _Envelope(d_lower=d_lower, d_upper=d_upper, bounded=not diverging,
                     stable=stable, bands=tuple(bands))


def _cluster(env: _Envelope | None) -> Interval:
    if env is None or not env.bounded:
        return EMPTY
    return Interval(env.d_lower, env.d_upper)


def _mode_analysis(f: FunctionOracle, x: float, ladder: ScaleLadder):
    """Sample every mode once (shared evaluator) and build envelopes."""
    if not f.domain.contains(x):
        raise ValueError(f"x={x} is outside the oracle domain")
    ev = Evaluator(f)
    scales = ladder.scales(x)
    flags: set = set()
    left = _side_samples(ev, x, -1, scales, flags)
    right = _side_samples(ev, x, +1, scales, flags)
    straddle = _straddle_samples(ev, x, scales, flags)

    try:
        noise_scale = 32.0 * sys.float_info.epsilon * (1.0 + abs(ev(x)))
    except BudgetExhausted:
        noise_scale = 32.0 * sys.float_info.epsilon

    left_bands = _band_stats(left, ladder.band)
    right_bands = _band_stats(right, ladder.band)
    straddle_bands = _band_stats(straddle, ladder.band)
    left_env = _envelope_from_bands(left_bands, noise_scale)
    right_env = _envelope_from_bands(right_bands, noise_scale)
    if left_env is None or right_env is None:
        flags.add("boundary_degraded")

    per_mode: dict[ApproachMode, QuotientBounds] = {}

    def bounds_for(mode, env, left_cluster, right_cluster) -> QuotientBounds:
        return QuotientBounds(
            mode=mode, x=x, d_lower=env.d_lower, d_upper=env.d_upper,
            left_cluster=left_cluster, right_cluster=right_cluster,
            bounded=env.bounded, scale_diagnostics=env.bands,
            stable=env.stable, flags=tuple(sorted(flags)))

    if left_env is not None:
        per_mode[ApproachMode.LEFT] = bounds_for(
            ApproachMode.LEFT, left_env, _cluster(left_env), EMPTY)
    if right_env is not None:
        per_mode[ApproachMode.RIGHT] = bounds_for(
            ApproachMode.RIGHT, right_env, EMPTY, _cluster(right_env))

    # centered: pool both sides band-by-band; degrade to the available side
    # at a domain boundary
    centered_bands = _hull_bands(left_bands, right_bands)
    centered_env = _envelope_from_bands(centered_bands, noise_scale)
    if centered_env is not None:
        per_mode[ApproachMode.CENTERED] = bounds_for(
            ApproachMode.CENTERED, centered_env,
            _cluster(left_env), _cluster(right_env))

    # two-sided: straddle envelope; when the one-sided cloud is bounded
    # (continuity at ladder resolution) extreme straddles realize one-sided
    # behavior, so the pooled hull is the honest envelope
    if straddle_bands:
        if centered_env is not None and centered_env.bounded:
            two_env = _envelope_from_bands(
                _hull_bands(straddle_bands, centered_bands), noise_scale)
        else:
            two_env = _envelope_from_bands(straddle_bands, noise_scale)
        per_mode[ApproachMode.TWO_SIDED] = bounds_for(
            ApproachMode.TWO_SIDED, two_env,
            _cluster(left_env), _cluster(right_env))
    elif centered_env is not None:
        per_mode[ApproachMode.TWO_SIDED] = replace(
            per_mode[ApproachMode.CENTERED], mode=ApproachMode.TWO_SIDED,
            flags=tuple(sorted(flags | {"boundary_degraded"})))

    if not per_mode:
        raise ValueError(f"no admissible evaluation scales around x={x}")

    # oscillation of f at x over the finest two bands: |q| * h recovers
    # |f(y) - f(x)| without extra evaluations
    cont = 0.0
    tail = 2 * ladder.band
    for side in (left, right):
        for h, group in zip(side.scales[-tail:], side.groups[-tail:]):
            cont = max(cont, max(abs(q) * h for q in group))
    return per_mode, cont, ev.calls


def dini_bounds(f: FunctionOracle, x: float, mode: ApproachMode,
                ladder: ScaleLadder = ScaleLadder()) -> QuotientBounds:
    """Envelope (liminf/limsup estimate) of one mode's quotient cloud at x."""
    per_mode, _, _ = _mode_analysis(f, x, ladder)
    if mode not in per_mode:
        raise ValueError(f"mode {mode.value} unavailable at x={x} "
                         "(domain boundary)")
    return per_mode[mode]


# ---------------------------------------------------------------------------
# derivative sets


def strong_set(bounds: QuotientBounds, r: float) -> Interval:
    """Set of strong r-derivatives: [D+ - r, D- + r], empty when 2r < D+ - D-."""
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    if not bounds.bounded:
        return EMPTY
    return Interval.make(bounds.d_upper - r, bounds.d_lower + r)


def weak_set(bounds: QuotientBounds, r: float) -> tuple[Interval, ...]:
    """Weak r-derivative set as a union of closed intervals.

    Centered mode may be disconnected (one component per side); the
    two-sided mode is the convex hull of the envelope.  Divergent sides
    contribute nothing.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    scale = 1.0 + max(abs(bounds.d_lower), abs(bounds.d_upper)) \
        if bounds.bounded else 1.0
    tol = WEAK_MERGE_TOL * scale
    if bounds.mode is ApproachMode.LEFT:
        parts = [bounds.left_cluster]
    elif bounds.mode is ApproachMode.RIGHT:
        parts = [bounds.right_cluster]
    elif bounds.mode is ApproachMode.CENTERED:
        parts = [bounds.left_cluster, bounds.right_cluster]
    else:
        if not bounds.bounded:
            return ()
        parts = [Interval(bounds.d_lower, bounds.d_upper)]
    inflated = [p.inflate(r) for p in parts if not p.is_empty]
    return merge_intervals(inflated, tol=tol)


def derivative_defect(bounds: QuotientBounds) -> float:
    """Least r with a non-empty strong set: (D+ - D-) / 2; inf if unbounded."""
    if not bounds.bounded:
        return math.inf
    return 0.5 * (bounds.d_upper - bounds.d_lower)


def _membership(d_lower: float, d_upper: float, bounded: bool, z: float) -> float:
    if not bounded:
        return 0.0
    m = max(d_upper - z, z - d_lower, 0.0)
    return 1.0 / (1.0 + m)


def membership_mu(report: DerivativeReport, mode: ApproachMode, z: float) -> float:
    """Grade 1 / (1 + m(z)) of z as a derivative value; 1 iff z is classical."""
    bounds = report.per_mode[mode]
    return _membership(bounds.d_lower, bounds.d_upper, bounds.bounded, z)


def classify(f: FunctionOracle, x: float,
             ladder: ScaleLadder = ScaleLadder(),
             r_values=()) -> DerivativeReport:
    """Full per-point report: envelopes, defect, sets and classification.

    Classification: classically differentiable when the centered defect
    vanishes at tolerance; fuzzy differentiable when the centered quotient
    cloud is bounded; not fuzzy differentiable otherwise.
    """
    per_mode, cont_defect, calls = _mode_analysis(f, x, ladder)
    centered = per_mode[ApproachMode.CENTERED]
    defect = derivative_defect(centered)
    if centered.bounded:
        estimate = 0.5 * (centered.d_lower + centered.d_upper)
        if defect <= CLASSICAL_DEFECT_TOL * (1.0 + abs(estimate)):
            label = Classification.CLASSICALLY_DIFFERENTIABLE
        else:
            label = Classification.FUZZY_DIFFERENTIABLE
    else:
        estimate = math.nan
        label = Classification.NOT_FUZZY_DIFFERENTIABLE

    strong_sets = {}
    weak_sets = {}
    for r in r_values:
        for mode, bounds in per_mode.items():
            strong_sets[(mode, float(r))] = strong_set(bounds, float(r))
            weak_sets[(mode, float(r))] = weak_set(bounds, float(r))

    flags = tuple(sorted({flag for b in per_mode.values() for flag in b.flags}))
    return DerivativeReport(
        x=x, per_mode=per_mode, defect=defect, derivative_estimate=estimate,
        classification=label, continuity_defect=cont_defect,
        strong_sets=strong_sets, weak_sets=weak_sets, flags=flags,
        evaluations=calls)


def combine_reports(rf: DerivativeReport, rg: DerivativeReport | None, op: str,
                    k: float | None = None) -> CombinedPrediction:
    """Envelope bounds for f+g, f-g or k*f predicted from per-operand reports.

    The combined function's directly computed envelope is contained in the
    prediction; the predicted defect is an upper bound (it can be strict,
    e.g. when two kinks cancel).
    """
    if op == "scale":
        if k is None:
            raise ValueError("scale requires the factor k")
        per_mode = {}
        for mode, b in rf.per_mode.items():
            lo, hi = sorted((k * b.d_lower, k * b.d_upper))
            per_mode[mode] = (lo, hi, b.bounded)
        defect_bound = abs(k) * rf.defect
        estimate = k * rf.derivative_estimate
        return CombinedPrediction(x=rf.x, per_mode=per_mode,
                                  defect_bound=defect_bound,
                                  derivative_estimate=estimate)
    if op not in ("add", "sub"):
        raise ValueError(f"unknown combination op: {op!r}")
    if rg is None:
        raise ValueError(f"{op} requires a second report")
    if rf.x != rg.x:
        raise ValueError("reports must be at the same point")
    common = rf.per_mode.keys() & rg.per_mode.keys()
    if not common:
        raise ValueError("reports share no approach mode")
    sign = 1.0 if op == "add" else -1.0
    per_mode = {}
    for mode in common:
        bf, bg = rf.per_mode[mode], rg.per_mode[mode]
        if op == "add":
            lo, hi = bf.d_lower + bg.d_lower, bf.d_upper + bg.d_upper
        else:
            lo, hi = bf.d_lower - bg.d_upper, bf.d_upper - bg.d_lower
        per_mode[mode] = (lo, hi, bf.bounded and bg.bounded)
    return CombinedPrediction(
        x=rf.x, per_mode=per_mode, defect_bound=rf.defect + rg.defect,
        derivative_estimate=rf.derivative_estimate + sign * rg.derivative_estimate)


def global_profile(f: FunctionOracle, grid, r: float,
                   ladder: ScaleLadder = ScaleLadder()) -> list[ProfilePoint]:
    """Centered strong r-set, defect and mu >= 1/2 band along a grid.

    Per-point failures are recorded in the row and the profile continues.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    points = [float(x) for x in grid]
    outside = [x for x in points if not f.domain.contains(x)]
    if outside:
        raise ValueError(f"grid points outside domain: {outside[:3]}")
    rows = []
    for x in points:
        try:
            bounds = dini_bounds(f, x, ApproachMode.CENTERED, ladder)
            rows.append(ProfilePoint(
                x=x, strong=strong_set(bounds, r),
                defect=derivative_defect(bounds),
                mu_band=strong_set(bounds, 1.0)))
        except (ValueError, ArithmeticError) as exc:
            rows.append(ProfilePoint(x=x, strong=EMPTY, defect=math.nan,
                                     mu_band=EMPTY, error=str(exc)))
    return rows
