"""Sampling checks of the G-function stability conditions.

Every check evaluates a quantified condition on a finite sample and reports
``pass_on_samples`` or the witnesses that contradict it; nothing here is a
proof. The one-step variation is ``dg(x) = g(f(x)) - g(x)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .exceptions import (
    DimensionMismatch,
    DimensionTooHigh,
    EmptyRegion,
    InsufficientSamples,
    NonFiniteOutput,
    NoFeasibleLambda,
    UndefinedDifference,
)
from .gfunctions import GFunctionSpec
from .numerics import (
    Box,
    Complement,
    ExtendedReal,
    Region,
    SamplingPlan,
    SubLevel,
    as_batch,
    as_state,
    sample_region,
    xr_from_json,
    xr_to_json,
)
from .reporting import atomic_write_text, dumps
from .systems import DiscreteSystem, Outcome, simulate_batch

__all__ = [
    "Verdict",
    "Violation",
    "CheckReport",
    "ClassKFit",
    "LambdaSearch",
    "delta_g",
    "delta_g_batch",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "check_invariance",
    "find_largest_lambda",
    "check_connected",
    "check_global",
    "verify_attraction",
    "write_witness_csv",
    "read_witness_csv",
]

MAX_WITNESSES = 1000


class Verdict(str, enum.Enum):
    PASS = "pass_on_samples"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"
    PRECONDITION_FAILED = "precondition_failed"


_SEVERITY = {Verdict.PASS: 0, Verdict.INCONCLUSIVE: 1, Verdict.PRECONDITION_FAILED: 2, Verdict.VIOLATED: 3}


@dataclass
class Violation:
    x: tuple
    value: float
    detail: str = ""

    def to_dict(self):
        return {"x": [float(v) for v in self.x], "value": xr_to_json(self.value), "detail": self.detail}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["x"]), xr_from_json(d["value"]), d.get("detail", ""))


@dataclass
class CheckReport:
    """Outcome of one sampling check.

    ``violations`` holds at most ``MAX_WITNESSES`` witnesses, worst first;
    ``violation_count`` is the total. ``verdict`` is VIOLATED exactly when
    there is at least one violation.
    """

    check: str
    verdict: Verdict
    samples_tested: int
    violations: list
    margin_min: float | None
    margin_max: float | None
    lambda_: float | None
    config_echo: SamplingPlan | None
    window: Box | None = None
    violation_count: int = 0
    precondition_witnesses: list = field(default_factory=list)
    escaped: int = 0
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def merge(self, other: "CheckReport") -> "CheckReport":
        """Combine partial reports of the same check over disjoint samples."""
        if other.check != self.check:
            raise ValueError("cannot merge reports of different checks")
        viol = sorted(self.violations + other.violations, key=_violation_key)[:MAX_WITNESSES]
        count = self.violation_count + other.violation_count
        pre = (self.precondition_witnesses + other.precondition_witnesses)[:MAX_WITNESSES]
        verdict = max(self.verdict, other.verdict, key=_SEVERITY.__getitem__)
        return CheckReport(
            self.check, verdict, self.samples_tested + other.samples_tested, viol,
            _combine(min, self.margin_min, other.margin_min),
            _combine(max, self.margin_max, other.margin_max),
            self.lambda_, self.config_echo, self.window, count, pre,
            self.escaped + other.escaped, self.notes + other.notes, {**self.details, **other.details},
        )

    def to_dict(self) -> dict:
        return {
            "kind": "check",
            "check": self.check,
            "verdict": self.verdict.value,
            "samples_tested": self.samples_tested,
            "violation_count": self.violation_count,
            "violations": [v.to_dict() for v in self.violations],
            "margin_min": xr_to_json(self.margin_min),
            "margin_max": xr_to_json(self.margin_max),
            "lambda": xr_to_json(self.lambda_),
            "config": None if self.config_echo is None else self.config_echo.to_dict(),
            "window": None if self.window is None else self.window.to_dict(),
            "precondition_witnesses": [[float(c) for c in x] for x in self.precondition_witnesses],
            "escaped": self.escaped,
            "notes": list(self.notes),
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, d) -> "CheckReport":
        w = d.get("window")
        return cls(
            d["check"], Verdict(d["verdict"]), int(d["samples_tested"]),
            [Violation.from_dict(v) for v in d["violations"]],
            xr_from_json(d["margin_min"]), xr_from_json(d["margin_max"]), xr_from_json(d["lambda"]),
            None if d.get("config") is None else SamplingPlan.from_dict(d["config"]),
            None if w is None else Box(w["lower"], w["upper"], w.get("closed", True)),
            int(d["violation_count"]), [tuple(x) for x in d.get("precondition_witnesses", [])],
            int(d.get("escaped", 0)), list(d.get("notes", [])), dict(d.get("details", {})),
        )

    def to_json(self, timestamp: bool = True) -> str:
        return dumps(self.to_dict(), timestamp)


def _combine(op, a, b):
    if a is None:
        return b
    if b is None:
        return a
    return op(a, b)


def _violation_key(v: Violation):
    # NaN first, then largest value
    return (0 if math.isnan(v.value) else 1, -v.value if not math.isnan(v.value) else 0.0)


def _violations(X, values, mask, detail):
    idx = np.nonzero(mask)[0]
    vals = values[idx]
    order = np.lexsort((-np.nan_to_num(vals, nan=0.0), ~np.isnan(vals)))
    idx = idx[order][:MAX_WITNESSES]
    return [Violation(tuple(float(c) for c in X[i]), float(values[i]), detail) for i in idx], int(mask.sum())


def _margins(values):
    v = values[~np.isnan(values)]
    if v.size == 0:
        return None, None
    return float(v.min()), float(v.max())


def _verdict(n_viol, n_pre=0, inconclusive=False):
    if n_viol:
        return Verdict.VIOLATED
    if n_pre:
        return Verdict.PRECONDITION_FAILED
    if inconclusive:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


# ---------------------------------------------------------------------------
# One-step variation


def delta_g_batch(g: GFunctionSpec, sys: DiscreteSystem, X):
    """Return ``(dg, FX, escaped)`` for a batch.

    ``escaped`` marks rows whose image left the float range; their ``dg`` is
    NaN. When g carries an excess form the difference is taken between
    excesses, which keeps its sign near the origin.
    """
    if g.dim != sys.dim:
        raise DimensionMismatch(f"g has dimension {g.dim}, system has {sys.dim}")
    X = as_batch(X, g.dim)
    FX = sys.apply(X)
    escaped = ~np.all(np.isfinite(FX), axis=1)
    with np.errstate(all="ignore"):
        if g.excess is not None:
            dg = g.evaluate_excess(FX) - g.evaluate_excess(X)
        else:
            gx = g.evaluate(X)
            if np.any(gx == -np.inf):
                i = int(np.argmax(gx == -np.inf))
                raise UndefinedDifference(f"g(x) = -inf at x = {X[i].tolist()} != 0")
            dg = g.evaluate(FX) - gx
    dg[escaped] = np.nan
    return dg, FX, escaped


def delta_g(g: GFunctionSpec, sys: DiscreteSystem, x) -> ExtendedReal:
    x = as_state(x, g.dim)
    if not np.any(x):
        raise ValueError("delta_g is only evaluated at x != 0")
    dg, FX, escaped = delta_g_batch(g, sys, x[None])
    if escaped[0] or math.isnan(dg[0]) or dg[0] == math.inf:
        raise NonFiniteOutput(f"dg undefined at {x.tolist()} (f(x) = {FX[0].tolist()})")
    return ExtendedReal(dg[0])


# ---------------------------------------------------------------------------
# Helpers


def _check_lambda(g, lambda_):
    lam = float(lambda_)
    if math.isnan(lam) or not lam > float(g.zeta_m):
        raise ValueError(f"lambda must exceed zeta_m = {float(g.zeta_m)}, got {lam}")
    return lam


def _resolve_window(sys: DiscreteSystem, window) -> Box:
    """The sampling window: as given, else the domain's box enlarged 1.5x so
    that samples can expose sub-level points outside the domain."""
    if window is not None:
        box = window if isinstance(window, Box) else window.bounding_box()
        if box is None:
            raise ValueError("window must be bounded")
        if box.dim != sys.dim:
            raise DimensionMismatch("window dimension differs from system dimension")
        return box
    bb = sys.domain.bounding_box()
    if bb is None:
        raise ValueError(f"{sys.label}: domain is unbounded; pass a bounded sampling window")
    return bb.scaled(1.5).bounding_box()


# ---------------------------------------------------------------------------
# Theorem-level checks


def check_theorem1(g: GFunctionSpec, sys: DiscreteSystem, lambda_, plan: SamplingPlan,
                   window: Region | None = None) -> CheckReport:
    """Sample ``G_lambda = {g < lambda}`` and require ``dg < 0`` at every sample.

    Sample points of ``G_lambda`` lying outside the system domain are
    precondition witnesses (the sub-level set must sit inside S).
    """
    lam = _check_lambda(g, lambda_)
    win = _resolve_window(sys, window)
    X = sample_region(SubLevel(g, lam), plan, window=win)
    in_dom = sys.domain.contains(X)
    pre = [tuple(float(c) for c in x) for x in X[~in_dom][:MAX_WITNESSES]]
    Xd = X[in_dom]
    dg = delta_g_batch(g, sys, Xd)[0] if Xd.size else np.empty(0)
    bad = ~(dg < 0)
    viol, count = _violations(Xd, dg, bad, "dg >= 0 inside G_lambda")
    lo, hi = _margins(dg)
    notes = []
    if pre:
        notes.append(f"{int((~in_dom).sum())} sample(s) of G_lambda lie outside the domain of {sys.label}")
    return CheckReport("theorem1", _verdict(count, len(pre)), int(Xd.shape[0]), viol, lo, hi, lam, plan,
                       win, count, pre, notes=notes)


@dataclass
class ClassKFit:
    """A piecewise-linear class-K lower envelope of ``-dg`` over radius.

    ``knots`` starts at (0, 0); knot i+1 sits at the outer edge of radial bin
    i with a value at most the smallest ``-dg`` seen in bins i and beyond, so
    ``dg(x) <= -phi(|x|)`` holds at every fitted sample.
    """

    knots: tuple
    valid: bool
    bin_edges: np.ndarray
    bin_minima: np.ndarray
    minorant: np.ndarray
    samples: int
    lambda_: float

    def phi(self, r):
        r_k, v_k = np.array(self.knots).T
        return np.interp(r, r_k, v_k)

    def to_dict(self):
        return {
            "kind": "class_k_fit",
            "valid": self.valid,
            "samples": self.samples,
            "lambda": xr_to_json(self.lambda_),
            "knots": [[float(r), float(v)] for r, v in self.knots],
            "bin_edges": [float(v) for v in self.bin_edges],
            "bin_minima": [xr_to_json(v) for v in self.bin_minima],
        }


def check_theorem2(g: GFunctionSpec, sys: DiscreteSystem, lambda_, plan: SamplingPlan,
                   window: Region | None = None, n_bins: int = 24) -> ClassKFit:
    lam = _check_lambda(g, lambda_)
    win = _resolve_window(sys, window)
    X = sample_region(SubLevel(g, lam), plan, window=win)
    X = X[sys.domain.contains(X)]
    if X.shape[0] == 0:
        raise EmptyRegion("no sample of G_lambda inside the domain")
    dg = delta_g_batch(g, sys, X)[0]
    decrease = np.where(np.isnan(dg), -np.inf, -dg)
    r = np.linalg.norm(X, axis=1)
    r_min, r_max = float(r.min()), float(r.max())
    if not r_max > r_min:
        raise InsufficientSamples("samples span a single radius")
    edges = np.geomspace(r_min, r_max, n_bins + 1)
    which = np.clip(np.searchsorted(edges, r, side="right") - 1, 0, n_bins - 1)
    counts = np.bincount(which, minlength=n_bins)
    if np.any(counts == 0):
        empty = int(np.argmax(counts == 0))
        raise InsufficientSamples(
            f"radial bin [{edges[empty]:.3g}, {edges[empty + 1]:.3g}) holds no sample")
    minima = np.full(n_bins, np.inf)
    np.minimum.at(minima, which, decrease)
    minorant = np.minimum.accumulate(minima[::-1])[::-1]
    valid = bool(np.all(minorant > 0))
    finite = minorant[np.isfinite(minorant)]
    cap = float(finite.max()) if finite.size else 1.0
    weights = 0.5 + 0.5 * np.arange(1, n_bins + 1) / n_bins
    values = np.where(np.isfinite(minorant), minorant, cap) * weights
    if not valid:
        values = np.maximum(values, 0.0)
    knots = ((0.0, 0.0),) + tuple((float(e), float(v)) for e, v in zip(edges[1:], values))
    return ClassKFit(knots, valid, edges, minima, minorant, int(X.shape[0]), lam)


def check_theorem3(g: GFunctionSpec, sys: DiscreteSystem, lambda_, window: Region,
                   plan: SamplingPlan) -> CheckReport:
    """Require ``dg >= 0`` on samples of ``window`` outside ``G_lambda``.

    Only the window is examined; the verdict says nothing about the rest of
    the complement. Images that overflow count as consistent when g grows
    with |x|, otherwise they make the verdict inconclusive.
    """
    lam = _check_lambda(g, lambda_)
    box = window if isinstance(window, Box) else window.bounding_box()
    if box is None:
        raise ValueError("theorem3 window must be bounded")
    X = sample_region(Complement(SubLevel(g, lam), box), plan)
    dg, _, escaped = delta_g_batch(g, sys, X)
    bad = ~(dg >= 0) & ~escaped
    viol, count = _violations(X, dg, bad, "dg < 0 outside G_lambda")
    n_esc = int(escaped.sum())
    inconclusive = n_esc > 0 and not g.radially_increasing
    lo, hi = _margins(dg)
    notes = [f"complement examined only within window {box.to_dict()}"]
    if n_esc:
        notes.append(f"{n_esc} image(s) left the float range"
                     + ("; counted as consistent since g grows with |x|" if g.radially_increasing else ""))
    return CheckReport("theorem3", _verdict(count, inconclusive=inconclusive), int(X.shape[0]), viol,
                       lo, hi, lam, plan, box, count, escaped=n_esc, notes=notes)


def check_invariance(g: GFunctionSpec, sys: DiscreteSystem, zeta, plan: SamplingPlan,
                     steps: int = 100, direction: str = "sublevel",
                     window: Region | None = None) -> CheckReport:
    """Brute-force positive invariance by simulation.

    ``direction="sublevel"``: starts in ``{g < zeta}`` must keep ``g <= zeta``.
    ``direction="complement"``: starts in the window outside ``{g < zeta}``
    must keep ``g >= zeta``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    z = _check_lambda(g, zeta)
    win = _resolve_window(sys, window)
    if direction == "sublevel":
        X0 = sample_region(SubLevel(g, z), plan, window=win)
    elif direction == "complement":
        X0 = sample_region(Complement(SubLevel(g, z), win), plan)
    else:
        raise ValueError("direction must be 'sublevel' or 'complement'")
    N = X0.shape[0]
    X = X0.copy()
    alive = np.ones(N, dtype=bool)
    exit_step = np.full(N, -1)
    exit_value = np.full(N, np.nan)
    escaped = np.zeros(N, dtype=bool)
    for k in range(1, steps + 1):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        Y = sys.apply(X[idx])
        out = ~np.all(np.isfinite(Y), axis=1)
        vals = g.evaluate(Y)
        with np.errstate(invalid="ignore"):
            stays = vals <= z if direction == "sublevel" else vals >= z
        if direction == "complement" and g.radially_increasing:
            escaped[idx[out]] = True
            alive[idx[out]] = False
            stays |= out
        left = ~stays
        exit_step[idx[left]] = k
        exit_value[idx[left]] = vals[left]
        alive[idx[left]] = False
        X[idx] = np.where(out[:, None], X[idx], Y)
    bad = exit_step > 0
    idx = np.nonzero(bad)[0]
    viol = [Violation(tuple(float(c) for c in X0[i]), float(exit_value[i]), f"left the set at step {exit_step[i]}")
            for i in idx[:MAX_WITNESSES]]
    check = f"invariance_{direction}"
    notes = [f"{steps} steps from each start"]
    if escaped.any():
        notes.append(f"{int(escaped.sum())} motion(s) left the float range (g grows with |x|)")
    return CheckReport(check, _verdict(len(idx)), N, viol, None, None, z, plan, win, int(bad.sum()),
                       escaped=int(escaped.sum()), notes=notes)


# ---------------------------------------------------------------------------
# Connectedness and lambda search


_CONNECT_POINTS = {1: 4001, 2: 401, 3: 81}


def check_connected(g: GFunctionSpec, lambda_, window: Region, grid_step: float | None = None) -> bool:
    """Flood-fill the rasterized ``G_lambda ∩ window`` from the origin cell.

    True iff every member cell is reached (face connectivity).
    """
    if g.dim > 3:
        raise DimensionTooHigh(f"connectedness is only checked up to 3 dimensions, got {g.dim}")
    box = window.bounding_box()
    if box is None:
        raise ValueError("window must be bounded")
    if grid_step is None:
        grid_step = float(np.max(np.subtract(box.upper, box.lower))) / (_CONNECT_POINTS[g.dim] - 1)
    lam = float(lambda_)
    axes, origin = [], []
    for lo, hi in zip(box.lower, box.upper):
        k0, k1 = math.ceil(lo / grid_step), math.floor(hi / grid_step)
        if not k0 <= 0 <= k1:
            raise ValueError("window must contain the origin")
        axes.append(np.arange(k0, k1 + 1) * grid_step)
        origin.append(-k0)
    mesh = np.meshgrid(*axes, indexing="ij")
    P = np.stack([m.ravel() for m in mesh], axis=1)
    with np.errstate(invalid="ignore"):
        member = (g.evaluate(P) < lam) & window.contains(P)
    member = member.reshape(mesh[0].shape)
    origin = tuple(origin)
    if not member[origin]:
        return False
    labels, _ = ndimage.label(member)
    return bool(np.all(labels[member] == labels[origin]))


@dataclass
class LambdaSearch:
    value: float
    bracket: tuple
    iterations: int
    tolerance: float
    probes: list
    non_monotone: list
    connectivity_checked: bool
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "kind": "lambda_search",
            "lambda": xr_to_json(self.value),
            "bracket": [xr_to_json(v) for v in self.bracket],
            "iterations": self.iterations,
            "tolerance": self.tolerance,
            "probes": [{"zeta": xr_to_json(z), "feasible": f, "reason": r} for z, f, r in self.probes],
            "non_monotone": [xr_to_json(v) for v in self.non_monotone],
            "connectivity_checked": self.connectivity_checked,
            "notes": list(self.notes),
        }


def find_largest_lambda(g: GFunctionSpec, sys: DiscreteSystem, search_lo, search_hi, plan: SamplingPlan,
                        iters: int = 30, window: Region | None = None, floor: float | None = None,
                        connect_step: float | None = None) -> LambdaSearch:
    """Bisect for the largest level whose sub-level set passes the sampled
    decrease check and is connected.

    Feasibility is assumed monotone in the level (sub-level sets nest); a
    post-search audit of lower levels reports any probe that contradicts it.
    """
    lo = float(search_lo)
    hi = float(search_hi)
    if lo == -math.inf:
        if floor is None:
            raise ValueError("search_lo is -inf; a finite floor is required")
        lo = float(floor)
    if lo < float(g.zeta_m):
        raise ValueError("search_lo must be >= zeta_m")
    if lo == float(g.zeta_m):
        lo = math.nextafter(lo, math.inf)
    if not hi > lo:
        raise ValueError("search_hi must exceed search_lo")
    win = _resolve_window(sys, window)
    check_conn = g.dim <= 3
    probes = []

    def feasible(z):
        try:
            rep = check_theorem1(g, sys, z, plan, window=win)
        except EmptyRegion:
            probes.append((z, False, "empty sample"))
            return False
        if not rep.passed:
            probes.append((z, False, rep.verdict.value))
            return False
        if check_conn and not check_connected(g, z, win, connect_step):
            probes.append((z, False, "disconnected"))
            return False
        probes.append((z, True, "ok"))
        return True

    lo0, hi0 = lo, hi
    if not feasible(lo):
        raise NoFeasibleLambda(f"level {lo} already fails; no feasible lambda in [{lo0}, {hi0}]")
    notes = []
    if not check_conn:
        notes.append("connectedness unchecked (dimension > 3)")
    if feasible(hi):
        notes.append("upper bracket end is feasible; the largest feasible level may lie above it")
        value, done = hi, 0
    else:
        done = 0
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                lo = mid
            else:
                hi = mid
            done += 1
        value = lo
    non_mono = [z for z in (lo0 + (value - lo0) * t for t in (0.25, 0.5, 0.75)) if not feasible(z)]
    return LambdaSearch(value, (lo0, hi0), done, (hi0 - lo0) / 2 ** iters, probes, non_mono, check_conn, notes)


# ---------------------------------------------------------------------------
# Global and attraction checks


def _is_growing(windows):
    for a, b in zip(windows, windows[1:]):
        if not (all(x <= y for x, y in zip(b.lower, a.lower)) and all(x >= y for x, y in zip(b.upper, a.upper))
                and (b.lower != a.lower or b.upper != a.upper)):
            return False
    return True


def check_global(g: GFunctionSpec, sys: DiscreteSystem, windows, plan: SamplingPlan) -> CheckReport:
    """The decrease check over a growing schedule of windows.

    For each window the level is set one unit above the largest sampled g,
    so the sub-level set covers the window and the check reduces to
    ``dg < 0`` on the whole window. A window reaching outside the domain
    fails the precondition.
    """
    windows = [w if isinstance(w, Box) else w.bounding_box() for w in windows]
    if not windows:
        raise ValueError("need at least one window")
    if not _is_growing(windows):
        raise ValueError("windows must be strictly increasing")
    merged = None
    per_window = []
    for w in windows:
        vals = g.evaluate(sample_region(w, plan))
        lam = float(np.max(vals[np.isfinite(vals)])) + 1.0
        rep = check_theorem1(g, sys, lam, plan, window=w)
        per_window.append({"window": w.to_dict(), "lambda": lam, "verdict": rep.verdict.value,
                           "samples": rep.samples_tested, "violations": rep.violation_count})
        merged = rep if merged is None else merged.merge(rep)
    merged.check = "global"
    merged.lambda_ = None
    merged.window = windows[-1]
    merged.details = {"windows": per_window}
    if merged.precondition_witnesses:
        merged.notes.append("G_lambda is not contained in the system domain for some window")
    return merged


def verify_attraction(sys: DiscreteSystem, estimate: Region, plan: SamplingPlan, max_steps: int = 10_000,
                      conv_tol: float = 1e-6, div_bound: float = 1e9, conv_persist: int = 10,
                      window: Region | None = None, samples=None) -> CheckReport:
    """Simulate from every sample of ``estimate``; pass iff all converge."""
    if samples is None:
        X0 = sample_region(estimate, plan, window=window)
    else:
        X0 = as_batch(samples, sys.dim)
    classes, finals = simulate_batch(sys, X0, max_steps, conv_tol, div_bound, conv_persist)
    bad = np.array([c.outcome != Outcome.CONVERGED for c in classes])
    idx = np.nonzero(bad)[0]
    viol = [Violation(tuple(float(c) for c in X0[i]), float(np.linalg.norm(finals[i])), str(classes[i]))
            for i in idx[:MAX_WITNESSES]]
    counts = {o.value: sum(c.outcome == o for c in classes) for o in Outcome}
    box = window.bounding_box() if window is not None else estimate.bounding_box()
    return CheckReport("attraction", _verdict(len(idx)), int(X0.shape[0]), viol, None, None, None, plan,
                       box, int(bad.sum()), details={"outcomes": counts, "max_steps": max_steps,
                                                     "conv_tol": conv_tol})


# ---------------------------------------------------------------------------
# Witness CSV


def write_witness_csv(report: CheckReport, path) -> None:
    n = len(report.violations[0].x) if report.violations else (report.window.dim if report.window else 1)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x_{i + 1}" for i in range(n)] + ["value", "detail"])
    for v in report.violations:
        val = xr_to_json(v.value)
        w.writerow([repr(float(c)) for c in v.x] + [val if isinstance(val, str) else repr(val), v.detail])
    atomic_write_text(path, buf.getvalue())


def read_witness_csv(path) -> list:
    rows = list(csv.reader(io.StringIO(Path(path).read_text())))
    n = len(rows[0]) - 2
    return [Violation(tuple(float(c) for c in r[:n]), xr_from_json(r[n]) if r[n] in ("-inf", "inf", "nan")
                      else float(r[n]), r[n + 1]) for r in rows[1:]]
