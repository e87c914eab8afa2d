"""Discrete-time systems x(k+1) = f(x(k)), trajectory simulation, and the four worked examples."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .exceptions import NonFiniteOutput
from .numerics import All, Box, Region, as_batch, as_state, norms

__all__ = [
    "DiscreteSystem",
    "Outcome",
    "Classification",
    "TrajectoryRecord",
    "step",
    "verify_equilibrium",
    "simulate",
    "simulate_batch",
    "builtin_example",
    "EXAMPLES",
    "write_trajectory_csv",
    "read_trajectory_csv",
]


@dataclass(frozen=True)
class DiscreteSystem:
    """A time-invariant map on R^n with its declared domain S.

    ``map`` takes an ``(N, n)`` batch and returns an ``(N, n)`` batch.
    """

    dim: int
    map: Callable[[np.ndarray], np.ndarray]
    domain: Region
    label: str = "f"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.domain.dim != self.dim:
            raise ValueError("domain dimension differs from system dimension")

    def apply(self, X) -> np.ndarray:
        X = as_batch(X, self.dim)
        with np.errstate(all="ignore"):
            Y = np.asarray(self.map(X), dtype=float)
        if Y.shape != X.shape:
            raise ValueError(f"{self.label}: map changed shape {X.shape} -> {Y.shape}")
        return Y

    @classmethod
    def from_expressions(cls, sources, domain: Region | None = None, label: str | None = None):
        from .expr import VectorExpression

        sources = [sources] if isinstance(sources, str) else list(sources)
        dim = len(sources)
        vec = VectorExpression(sources, dim)
        return cls(dim, vec, domain or All(dim), label or "; ".join(sources))


def step(sys: DiscreteSystem, x) -> np.ndarray:
    x = as_state(x, sys.dim)
    y = sys.apply(x[None, :])[0]
    if not np.all(np.isfinite(y)):
        raise NonFiniteOutput(f"{sys.label}: f({x.tolist()}) = {y.tolist()}")
    return y


def verify_equilibrium(sys: DiscreteSystem, tol: float = 1e-15) -> bool:
    if not tol > 0:
        raise ValueError("tol must be positive")
    y = sys.apply(np.zeros((1, sys.dim)))[0]
    return bool(np.linalg.norm(y) <= tol)


class Outcome(str, enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Classification:
    outcome: Outcome
    step: int | None = None  # first step of the converged run, or the exit step

    def __str__(self):
        return self.outcome.value if self.step is None else f"{self.outcome.value}({self.step})"


@dataclass
class TrajectoryRecord:
    x0: np.ndarray
    states: np.ndarray
    classification: Classification
    g_values: np.ndarray | None = None

    def __eq__(self, other):
        if not isinstance(other, TrajectoryRecord):
            return NotImplemented
        same_g = (self.g_values is None and other.g_values is None) or (
            self.g_values is not None and other.g_values is not None
            and np.array_equal(self.g_values, other.g_values))
        return (np.array_equal(self.x0, other.x0) and np.array_equal(self.states, other.states)
                and self.classification == other.classification and same_g)


_CONV, _DIV, _OPEN = 0, 1, 2


def _fixed_zero(sys):
    return bool(np.all(sys.apply(np.zeros((1, sys.dim))) == 0.0))


def _run(sys, X0, max_steps, conv_tol, div_bound, conv_persist, record=False):
    """Iterate every row of X0 until it is classified or max_steps is reached.

    Returns (codes, steps, finals, history) where history is a list of
    ``(N, n)`` arrays (only when ``record``).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if not 0 < conv_tol < div_bound:
        raise ValueError("need 0 < conv_tol < div_bound")
    if conv_persist < 1:
        raise ValueError("conv_persist must be >= 1")
    zero_fixed = _fixed_zero(sys)
    X = as_batch(X0, sys.dim).copy()
    N = X.shape[0]
    codes = np.full(N, _OPEN)
    steps = np.full(N, -1)
    run_start = np.full(N, -1)
    active = np.ones(N, dtype=bool)
    history = [X.copy()] if record else None
    for k in range(max_steps + 1):
        idx = np.nonzero(active)[0]
        nrm = np.linalg.norm(X[idx], axis=1)
        div = nrm > div_bound
        codes[idx[div]] = _DIV
        steps[idx[div]] = k
        small = nrm < conv_tol
        rs = run_start[idx]
        rs = np.where(small, np.where(rs < 0, k, rs), -1)
        run_start[idx] = rs
        done = small & ((k - rs + 1 >= conv_persist) | (zero_fixed & (nrm == 0)))
        codes[idx[done]] = _CONV
        steps[idx[done]] = rs[done]
        active[idx[div | done]] = False
        if k == max_steps or not active.any():
            break
        idx = np.nonzero(active)[0]
        Y = sys.apply(X[idx])
        bad = ~np.all(np.isfinite(Y), axis=1)
        codes[idx[bad]] = _DIV
        steps[idx[bad]] = k + 1
        active[idx[bad]] = False
        good = idx[~bad]
        X[good] = Y[~bad]
        if record and good.size:
            history.append(X.copy())
    return codes, steps, X, history


def _classification(code, step_):
    if code == _CONV:
        return Classification(Outcome.CONVERGED, int(step_))
    if code == _DIV:
        return Classification(Outcome.DIVERGED, int(step_))
    return Classification(Outcome.INCONCLUSIVE)


def simulate(sys: DiscreteSystem, x0, max_steps: int = 100_000, conv_tol: float = 1e-6,
             div_bound: float = 1e9, g=None, conv_persist: int = 10) -> TrajectoryRecord:
    """Iterate the map from ``x0`` and classify the motion.

    Converged(K): ``|x(k)| < conv_tol`` for ``conv_persist`` consecutive steps
    starting at K (an exact landing on a fixed origin ends the run at once).
    Diverged(k): ``|x(k)| > div_bound`` or the map left the float range at k.
    Otherwise Inconclusive after ``max_steps``.
    """
    x0 = as_state(x0, sys.dim)
    codes, steps, _, history = _run(sys, x0[None], max_steps, conv_tol, div_bound, conv_persist, record=True)
    states = np.array([h[0] for h in history])
    g_values = g.evaluate(states) if g is not None else None
    return TrajectoryRecord(x0, states, _classification(codes[0], steps[0]), g_values)


def simulate_batch(sys: DiscreteSystem, X0, max_steps: int = 100_000, conv_tol: float = 1e-6,
                   div_bound: float = 1e9, conv_persist: int = 10):
    """Classify many starts at once; returns (classifications, final states)."""
    codes, steps, finals, _ = _run(sys, X0, max_steps, conv_tol, div_bound, conv_persist)
    return [_classification(c, s) for c, s in zip(codes, steps)], finals


# ---------------------------------------------------------------------------
# Worked examples


def tanh_minus_identity(x):
    """``tanh(x) - x`` without cancellation for small |x|."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = x * x2 * (-1 / 3 + x2 * (2 / 15 + x2 * (-17 / 315 + x2 * (62 / 2835 - x2 * 1382 / 155925))))
    return np.where(np.abs(x) < 0.05, series, np.tanh(x) - x)


def _ex1(X):
    return np.sin(X) * tanh_minus_identity(X)


def _ex2(X):
    return np.sin(X) / (2.0 * np.cos(X / 3.0) ** 3)


def _ex3(alpha):
    def f(X):
        x, y = X[:, 0], X[:, 1]
        return np.stack([x * y * np.exp(-y * y), alpha * x], axis=1)
    return f


def _ex4(alpha, f_choice):
    if f_choice == "Quadratic":
        def scalar(r):
            return r * r
    elif f_choice == "ExpShift":
        def scalar(r):
            return np.exp(r * r) + 1.0 - math.e
    else:
        raise ValueError(f"f_choice must be 'Quadratic' or 'ExpShift', got {f_choice!r}")
    ea = math.exp(alpha)

    def f(X):
        r = norms(X)
        return (scalar(r) / (1.0 + np.abs(r - ea)))[:, None] * X
    return f


EXAMPLES = ("Ex1", "Ex2", "Ex3", "Ex4")


def builtin_example(name: str, alpha: float | None = None, f_choice: str = "Quadratic",
                    dim: int = 1) -> DiscreteSystem:
    """The four worked systems.

    Ex1: sin(x)(tanh x - x) on (-1, 1).
    Ex2: sin(x) / (2 cos^3(x/3)) on (-pi, pi).
    Ex3(alpha): (x y exp(-y^2), alpha x) on R^2.
    Ex4(alpha, f_choice, dim): f(|x|) x / (1 + ||x| - e^alpha|) on R^dim, with
    f(r) = r^2 (Quadratic) or exp(r^2) + 1 - e (ExpShift).
    """
    if name == "Ex1":
        return DiscreteSystem(1, _ex1, Box((-1.0,), (1.0,), closed=False), "Ex1: sin(x)(tanh(x)-x)")
    if name == "Ex2":
        return DiscreteSystem(1, _ex2, Box((-math.pi,), (math.pi,), closed=False),
                              "Ex2: sin(x)/(2cos^3(x/3))")
    if name == "Ex3":
        a = 0.3 if alpha is None else float(alpha)
        return DiscreteSystem(2, _ex3(a), All(2), f"Ex3(alpha={a:g})")
    if name == "Ex4":
        a = 0.0 if alpha is None else float(alpha)
        return DiscreteSystem(dim, _ex4(a, f_choice), All(dim), f"Ex4(alpha={a:g}, {f_choice})")
    raise ValueError(f"unknown example {name!r}; choose from {EXAMPLES}")


# ---------------------------------------------------------------------------
# Trajectory CSV


def _fmt(v: float) -> str:
    if v == -math.inf:
        return "-inf"
    return repr(float(v))


def write_trajectory_csv(record: TrajectoryRecord, path) -> None:
    """Write ``k,x_1..x_n,g`` rows after a ``# classification=...`` comment line.

    The g column is empty when no G-function was supplied; -inf is written
    as the token ``-inf``.
    """
    from .reporting import atomic_write_text
    import io

    n = record.states.shape[1]
    buf = io.StringIO()
    c = record.classification
    buf.write(f"# classification={c.outcome.value} step={'' if c.step is None else c.step}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k"] + [f"x_{i + 1}" for i in range(n)] + ["g"])
    for k, s in enumerate(record.states):
        g = "" if record.g_values is None else _fmt(record.g_values[k])
        w.writerow([k] + [repr(float(v)) for v in s] + [g])
    atomic_write_text(path, buf.getvalue())


def read_trajectory_csv(path) -> TrajectoryRecord:
    lines = Path(path).read_text().splitlines()
    head = dict(kv.split("=", 1) for kv in lines[0].lstrip("# ").split())
    outcome = Outcome(head["classification"])
    step_ = int(head["step"]) if head.get("step") else None
    rows = list(csv.reader(lines[1:]))
    n = len(rows[0]) - 2
    body = rows[1:]
    states = np.array([[float(v) for v in r[1:1 + n]] for r in body]).reshape(-1, n)
    g_col = [r[-1] for r in body]
    g_values = None if all(v == "" for v in g_col) else np.array([float(v) for v in g_col])
    return TrajectoryRecord(states[0].copy(), states, Classification(outcome, step_), g_values)
