"""Function oracles and the built-in gallery of test functions.

A ``FunctionOracle`` wraps a deterministic real function together with its
domain and a per-analysis evaluation budget.  Oracles built from sampled
data snap evaluation points to the sample mesh, so difference quotients are
always honest secant slopes of the data.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .intervals import Interval

DEFAULT_EVAL_BUDGET = 100_000
BUDGET_ENV_VAR = "NEOCALC_EVAL_BUDGET"


def default_eval_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_EVAL_BUDGET
    try:
        budget = int(raw)
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc
    if budget < 1:
        raise ValueError(f"{BUDGET_ENV_VAR} must be positive")
    return budget


@dataclass(eq=False)
class FunctionOracle:
    """A deterministic point-evaluable function on a closed interval.

    ``snap`` maps a requested abscissa to the nearest admissible one (the
    identity for analytic functions, nearest sample for mesh data);
    ``mesh_spacing`` is the smallest gap between admissible points, when the
    oracle is mesh-limited.
    """

    fn: Callable[[float], float]
    domain: Interval
    eval_budget: int = field(default_factory=default_eval_budget)
    name: str = ""
    snap: Callable[[float], float] | None = None
    mesh_spacing: float | None = None

    def __post_init__(self):
        if self.domain.is_empty:
            raise ValueError("oracle domain must be non-empty")
        if self.eval_budget < 1:
            raise ValueError("eval_budget must be positive")

    def __call__(self, x: float) -> float:
        return float(self.fn(x))


class BudgetExhausted(Exception):
    """Raised internally when an analysis exceeds the oracle's eval budget."""


class Evaluator:
    """Per-analysis wrapper: counts, caches and domain-checks evaluations.

    One instance is created per analysis call, so oracles themselves stay
    stateless and safe for concurrent use.
    """

    __slots__ = ("oracle", "calls", "_cache", "budget_exhausted")

    def __init__(self, oracle: FunctionOracle):
        self.oracle = oracle
        self.calls = 0
        self._cache: dict[float, float] = {}
        self.budget_exhausted = False

    def in_domain(self, x: float) -> bool:
        return self.oracle.domain.contains(x)

    def snap(self, x: float) -> float:
        if self.oracle.snap is None:
            return x
        return self.oracle.snap(x)

    def __call__(self, x: float) -> float:
        if x in self._cache:
            return self._cache[x]
        if not self.in_domain(x):
            raise ValueError(f"evaluation outside domain: x={x}")
        if self.calls >= self.oracle.eval_budget:
            self.budget_exhausted = True
            raise BudgetExhausted(self.oracle.name or "oracle")
        self.calls += 1
        value = float(self.oracle.fn(x))
        if math.isnan(value):
            raise ValueError(f"oracle returned NaN at x={x}")
        self._cache[x] = value
        return value


def _sawtooth(x: float) -> float:
    """1-periodic extension of |x| from [-1/2, 1/2]: distance to nearest integer."""
    return abs(x - round(x))


def _van_der_waerden(depth: int) -> Callable[[float], float]:
    weights = [4.0 ** -(n - 1) for n in range(1, depth + 1)]

    def f(x: float) -> float:
        return sum(w * _sawtooth(x / w) for w in weights)

    return f


def _skew_tent(a: float, b: float) -> Callable[[float], float]:
    rising = (1.0 - b) / a
    falling = 1.0 / (1.0 - a)

    def f(x: float) -> float:
        if x < a:
            return b + rising * x
        return (1.0 - x) * falling

    return f


def _spike33(x: float) -> float:
    return 1.0 if x == 0.0 else abs(x)


_GALLERY = {
    "abs": {
        "arity": 0,
        "signature": "abs",
        "domain": Interval(-4.0, 4.0),
        "summary": "absolute value; kink at 0 with one-sided slopes -1/+1",
    },
    "square": {
        "arity": 0,
        "signature": "square",
        "domain": Interval(-10.0, 10.0),
        "summary": "x**2; smooth everywhere",
    },
    "linear": {
        "arity": 2,
        "signature": "linear:m,c",
        "domain": Interval(-10.0, 10.0),
        "summary": "m*x + c; constant slope m",
    },
    "skew_tent": {
        "arity": 2,
        "signature": "skew_tent:a,b",
        "domain": Interval(0.0, 1.0),
        "summary": "piecewise-linear tent on [0, 1] rising from b to 1 at x=a",
    },
    "van_der_waerden": {
        "arity": 1,
        "signature": "vdw:depth",
        "domain": Interval(-4.0, 4.0),
        "summary": "partial sum of scaled sawtooths; kinks densify with depth",
    },
    "spike33": {
        "arity": 0,
        "signature": "spike33",
        "domain": Interval(-4.0, 4.0),
        "summary": "abs(x) away from 0 with an isolated value 1 at x=0",
    },
}

_ALIASES = {"vdw": "van_der_waerden"}


def gallery(name: str, *params: float,
            eval_budget: int | None = None) -> FunctionOracle:
    """Build a gallery oracle by name.

    Names: abs, square, linear(m, c), skew_tent(a, b) with 0 < a < 1,
    van_der_waerden(depth) with depth >= 1 (alias vdw), spike33.
    """
    key = _ALIASES.get(name, name)
    if key not in _GALLERY:
        raise ValueError(f"unknown gallery function: {name!r}")
    meta = _GALLERY[key]
    if len(params) != meta["arity"]:
        raise ValueError(
            f"{key} takes {meta['arity']} parameter(s), got {len(params)}")
    budget = default_eval_budget() if eval_budget is None else eval_budget

    if key == "abs":
        fn, label = abs, "abs"
    elif key == "square":
        fn, label = lambda x: x * x, "square"
    elif key == "linear":
        m, c = float(params[0]), float(params[1])
        fn, label = lambda x: m * x + c, f"linear:{m},{c}"
    elif key == "skew_tent":
        a, b = float(params[0]), float(params[1])
        if not (0.0 < a < 1.0):
            raise ValueError("skew_tent requires 0 < a < 1")
        fn, label = _skew_tent(a, b), f"skew_tent:{a},{b}"
    elif key == "van_der_waerden":
        depth = int(params[0])
        if depth < 1 or depth != params[0]:
            raise ValueError("van_der_waerden depth must be an integer >= 1")
        fn, label = _van_der_waerden(depth), f"vdw:{depth}"
    else:
        fn, label = _spike33, "spike33"
    return FunctionOracle(fn=fn, domain=meta["domain"], eval_budget=budget,
                          name=label)


def gallery_list() -> list[dict]:
    """Metadata for every built-in, in stable order."""
    return [{"name": key, "signature": meta["signature"],
             "domain": meta["domain"].to_json(), "summary": meta["summary"]}
            for key, meta in _GALLERY.items()]


def parse_gallery_spec(spec: str, eval_budget: int | None = None) -> FunctionOracle:
    """Parse CLI specs like ``abs``, ``linear:3,1``, ``skew_tent:0.5,0``, ``vdw:8``."""
    name, _, arg_str = spec.partition(":")
    if not arg_str:
        return gallery(name, eval_budget=eval_budget)
    try:
        params = tuple(float(part) for part in arg_str.split(","))
    except ValueError as exc:
        raise ValueError(f"bad gallery parameters in {spec!r}") from exc
    return gallery(name, *params, eval_budget=eval_budget)


def oracle_from_samples(xs, ys, eval_budget: int | None = None,
                        name: str = "samples") -> FunctionOracle:
    """Oracle over sampled (x, y) data; evaluations snap to the nearest sample."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.size < 2 or xs.shape != ys.shape:
        raise ValueError("need at least two samples with matching x and y")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("samples must be finite")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")

    def snap(x: float) -> float:
        pos = int(np.searchsorted(xs, x))
        best = max(0, min(pos, xs.size - 1))
        if pos > 0 and abs(xs[pos - 1] - x) <= abs(xs[best] - x):
            best = pos - 1
        return float(xs[best])

    lookup = {float(x): float(y) for x, y in zip(xs, ys)}

    def fn(x: float) -> float:
        return lookup[snap(x)]

    budget = default_eval_budget() if eval_budget is None else eval_budget
    return FunctionOracle(fn=fn, domain=Interval(float(xs[0]), float(xs[-1])),
                          eval_budget=budget, name=name, snap=snap,
                          mesh_spacing=float(np.min(np.diff(xs))))


def combine_oracles(f: FunctionOracle, g: FunctionOracle | None, op: str,
                    k: float | None = None) -> FunctionOracle:
    """Pointwise f+g, f-g or k*f on the intersected domain."""
    if op == "scale":
        if k is None:
            raise ValueError("scale requires the factor k")
        return FunctionOracle(fn=lambda x: k * f.fn(x), domain=f.domain,
                              eval_budget=f.eval_budget,
                              name=f"scale({f.name},{k})")
    if op not in ("add", "sub"):
        raise ValueError(f"unknown combination op: {op!r}")
    if g is None:
        raise ValueError(f"{op} requires a second oracle")
    domain = f.domain.intersect(g.domain)
    if domain.is_empty:
        raise ValueError("oracle domains do not overlap")
    sign = 1.0 if op == "add" else -1.0
    return FunctionOracle(fn=lambda x: f.fn(x) + sign * g.fn(x), domain=domain,
                          eval_budget=min(f.eval_budget, g.eval_budget),
                          name=f"{op}({f.name},{g.name})")
