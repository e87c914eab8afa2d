"""G-functions: extended-real functions whose strict sub-level sets shrink to the origin.

A G-function has its global minimum at the origin (``zeta_m = g(0)``) or tends
to -inf there (``zeta_m = -inf``), never tends to +inf at a finite point, and
its sub-level sets ``{g < zeta}`` nest. They need not be continuous or sign
definite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import NonFiniteOutput
from .numerics import (
    NEG_INF,
    Box,
    ExtendedReal,
    Region,
    SamplingPlan,
    SubLevel,
    as_batch,
    as_state,
    norms,
    ray_directions,
    sample_region,
    xr_to_json,
)

__all__ = [
    "GFunctionSpec",
    "CATALOG",
    "builtin_gfunction",
    "eval_g",
    "ConditionResult",
    "ValidationReport",
    "validate_gfunction",
    "one_minus_sinc",
]


@dataclass(frozen=True)
class GFunctionSpec:
    """A candidate G-function.

    ``func`` maps an ``(N, n)`` batch to ``N`` extended-real values (``-inf``
    allowed). When ``zeta_m`` is finite, ``excess`` may supply
    ``g(x) - zeta_m`` computed without cancellation; the checkers then use it
    for one-step differences near the origin, where ``g`` itself sits within
    one ulp of ``zeta_m``.
    """

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    zeta_m: ExtendedReal
    label: str = "g"
    excess: Callable[[np.ndarray], np.ndarray] | None = None
    radially_increasing: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "zeta_m", ExtendedReal(self.zeta_m))
        if self.excess is not None and self.zeta_m.is_neg_inf:
            raise ValueError("an excess form needs a finite zeta_m")

    def evaluate(self, X) -> np.ndarray:
        """Vectorized evaluation; returns a float array (may hold -inf/NaN)."""
        X = as_batch(X, self.dim)
        with np.errstate(all="ignore"):
            return np.asarray(self.func(X), dtype=float).reshape(X.shape[0])

    def evaluate_excess(self, X) -> np.ndarray:
        X = as_batch(X, self.dim)
        with np.errstate(all="ignore"):
            if self.excess is not None:
                return np.asarray(self.excess(X), dtype=float).reshape(X.shape[0])
            return self.evaluate(X) - float(self.zeta_m)

    def __call__(self, x) -> ExtendedReal:
        return eval_g(self, x)

    @classmethod
    def from_expression(cls, source: str, dim: int, zeta_m=None, label: str | None = None,
                        radially_increasing: bool = False) -> "GFunctionSpec":
        """Build a G-function from the expression grammar in :mod:`gstab.expr`.

        Without ``zeta_m`` the value at the origin is used (NaN there is an
        error). With ``zeta_m`` the origin is pinned to that value, so
        removable singularities such as ``-sin(norm())/norm()`` work.
        """
        from .expr import Expression

        expr = Expression(source, dim)
        if zeta_m is None:
            v0 = float(expr(np.zeros((1, dim)))[0])
            if math.isnan(v0) or v0 == math.inf:
                raise ValueError(f"{source!r} is undefined at the origin; give zeta_m explicitly")
            return cls(dim, expr, ExtendedReal(v0), label or source,
                       radially_increasing=radially_increasing)
        zm = float(zeta_m)

        def func(X):
            v = np.asarray(expr(X), dtype=float)
            return np.where(np.all(X == 0, axis=1), zm, v)

        return cls(dim, func, ExtendedReal(zm), label or source,
                   radially_increasing=radially_increasing)


def eval_g(g: GFunctionSpec, x) -> ExtendedReal:
    x = as_state(x, g.dim)
    v = float(g.evaluate(x[None, :])[0])
    if math.isnan(v) or v == math.inf:
        raise NonFiniteOutput(f"{g.label} returned {v} at {x.tolist()}")
    return ExtendedReal(v)


# ---------------------------------------------------------------------------
# Catalog


def one_minus_sinc(r):
    """``1 - sin(r)/r`` accurate down to r -> 0 (Taylor series below 0.1)."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    series = r2 / 6 * (1 - r2 / 20 * (1 - r2 / 42 * (1 - r2 / 72 * (1 - r2 / 110))))
    with np.errstate(all="ignore"):
        direct = 1.0 - np.sin(r) / r
    return np.where(np.abs(r) < 0.1, series, direct)


def _norm(X):
    return norms(X)


def _log_norm(X):
    return np.log(_norm(X))


def _log_over_norm(X):
    r = _norm(X)
    return np.where(r > 0, np.log(r) / r, -np.inf)


def _neg_sinc_excess(X):
    return one_minus_sinc(_norm(X))


def _neg_sinc(X):
    return -1.0 + _neg_sinc_excess(X)


def _neg_cos_exp_excess(X):
    r2 = np.sum(X * X, axis=1)
    s = np.sum(X, axis=1)
    # 1 - cos(s) e^{-r^2} = (1 - e^{-r^2}) + e^{-r^2} * 2 sin^2(s/2)
    return -np.expm1(-r2) + np.exp(-r2) * 2.0 * np.sin(0.5 * s) ** 2


def _neg_cos_exp(X):
    return -1.0 + _neg_cos_exp_excess(X)


def _piecewise_log_norm(X):
    r = _norm(X)
    return np.where(r < 1.0, np.log(r), r)


def _log_l1_norm(X):
    return np.log(np.sum(np.abs(X), axis=1))


CATALOG = {
    "LogNorm": dict(func=_log_norm, zeta_m=NEG_INF, label="ln|x|", radially_increasing=True),
    "LogOverNorm": dict(func=_log_over_norm, zeta_m=NEG_INF, label="ln|x|/|x|"),
    "NegSinc": dict(func=_neg_sinc, zeta_m=-1.0, label="-sin|x|/|x|", excess=_neg_sinc_excess),
    "NegCosExp": dict(func=_neg_cos_exp, zeta_m=-1.0, label="-cos(sum x)exp(-|x|^2)",
                      excess=_neg_cos_exp_excess),
    "PiecewiseLogNorm": dict(func=_piecewise_log_norm, zeta_m=NEG_INF,
                             label="ln|x| (|x|<1), |x| (|x|>=1)", radially_increasing=True),
    # not part of the five-function catalog; used by the two-dimensional example
    "LogL1Norm": dict(func=_log_l1_norm, zeta_m=NEG_INF, label="ln(|x|_1)", radially_increasing=True),
}


def builtin_gfunction(name: str, dim: int = 1) -> GFunctionSpec:
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown G-function {name!r}; choose from {sorted(CATALOG)}") from None
    return GFunctionSpec(dim=dim, **entry)


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ConditionResult:
    passed: bool
    count: int
    witness: tuple | None = None
    detail: str = ""

    def to_dict(self):
        return {
            "status": "pass_on_samples" if self.passed else "violated",
            "count": self.count,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d):
        w = d.get("witness")
        return cls(d["status"] == "pass_on_samples", int(d["count"]),
                   None if w is None else tuple(w), d.get("detail", ""))


@dataclass
class ValidationReport:
    condition1: ConditionResult
    condition2: ConditionResult
    condition3: ConditionResult
    condition4: ConditionResult
    label: str = ""
    config_echo: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.conditions())

    def conditions(self):
        return (self.condition1, self.condition2, self.condition3, self.condition4)

    def to_dict(self) -> dict:
        return {
            "kind": "validation",
            "label": self.label,
            "overall": self.overall,
            "condition1": self.condition1.to_dict(),
            "condition2": self.condition2.to_dict(),
            "condition3": self.condition3.to_dict(),
            "condition4": self.condition4.to_dict(),
            "config": self.config_echo,
        }

    @classmethod
    def from_dict(cls, d) -> "ValidationReport":
        return cls(*(ConditionResult.from_dict(d[f"condition{i}"]) for i in range(1, 5)),
                   label=d.get("label", ""), config_echo=d.get("config", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)


def _witness(X, i):
    return tuple(float(v) for v in X[i])


def _condition1(g, X, vals, box, dirs, floor, probe_min_radius):
    n = X.shape[0]
    if g.zeta_m.is_finite:
        zm = float(g.zeta_m)
        v0 = float(g.evaluate(np.zeros((1, g.dim)))[0])
        if v0 != zm:
            return ConditionResult(False, n, (0.0,) * g.dim, f"g(0)={v0} differs from zeta_m={zm}")
        below = np.nonzero(vals < zm)[0]
        if below.size:
            i = below[np.argmin(vals[below])]
            return ConditionResult(False, n, _witness(X, i),
                                   f"g(x)={float(vals[i])!r} < g(0)={zm!r}: minimum not at the origin")
        return ConditionResult(True, n)

    v0 = float(g.evaluate(np.zeros((1, g.dim)))[0])
    if not v0 == -math.inf:
        return ConditionResult(False, n, (0.0,) * g.dim, f"zeta_m=-inf but g(0)={v0}")
    finite_min = np.min(vals[np.isfinite(vals)]) if np.any(np.isfinite(vals)) else math.inf
    checked = 0
    for u in dirs:
        t_exit = min((hi / c if c > 0 else lo / c) for lo, hi, c in zip(box.lower, box.upper, u) if c != 0)
        r_top = min(1.0, 0.5 * t_exit)
        radii = np.geomspace(r_top, probe_min_radius, int(2 * math.log10(r_top / probe_min_radius)) + 1)
        shell = g.evaluate(radii[:, None] * u[None, :])
        checked += radii.size
        # elementwise comparison instead of diff: -inf followed by -inf is fine
        rises = np.concatenate([[False], shell[1:] > shell[:-1]])
        if np.any(np.isnan(shell)) or np.any(rises):
            k = int(np.argmax(np.isnan(shell) | rises))
            return ConditionResult(False, checked, tuple(float(c) for c in radii[k] * u),
                                   "g does not decrease monotonically along a shell toward 0")
        last = float(shell[-1])
        ten_decades_up = float(shell[max(0, radii.size - 21)])
        still_falling = last == -math.inf or last < ten_decades_up
        if not (last <= floor and last <= finite_min and still_falling):
            return ConditionResult(False, checked, tuple(float(c) for c in radii[-1] * u),
                                   f"g={last!r} at radius {radii[-1]:.1e} does not indicate a -inf limit "
                                   f"(floor {floor}, sampled minimum {float(finite_min)!r})")
    return ConditionResult(True, n + checked)


def _ascend(g, x, box, ceiling, scale):
    """Pattern-search ascent from ``x``; returns a point where g exceeds the
    ceiling (or is +inf/NaN), else None."""
    n = x.size
    D = np.concatenate([np.eye(n), -np.eye(n)])
    if n <= 3:
        corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
        D = np.concatenate([D, corners / math.sqrt(n)])
    lo, hi = np.asarray(box.lower), np.asarray(box.upper)
    v = float(g.evaluate(x[None])[0])
    for _ in range(2000):
        if scale < 1e-15 * max(1.0, float(np.linalg.norm(x))):
            break
        cand = np.clip(x + scale * D, lo, hi)
        cv = g.evaluate(cand)
        bad = np.isnan(cv) | (cv > ceiling)
        if np.any(bad):
            return cand[np.argmax(bad)], cv[np.argmax(bad)]
        j = int(np.argmax(cv))
        if cv[j] > v:
            x, v = cand[j], float(cv[j])
        else:
            scale *= 0.5
    return None


def _condition2(g, X, vals, box, ceiling, n_starts=5):
    n = X.shape[0]
    bad = np.isnan(vals) | (vals > ceiling)
    if np.any(bad):
        i = int(np.argmax(bad))
        return ConditionResult(False, n, _witness(X, i), f"g={float(vals[i])!r} exceeds ceiling {ceiling:g}")
    finite = np.where(np.isfinite(vals), vals, -np.inf)
    width = float(np.max(np.subtract(box.upper, box.lower)))
    for i in np.argsort(-finite, kind="stable")[:n_starts]:
        hit = _ascend(g, X[i].copy(), box, ceiling, 0.05 * width)
        if hit is not None:
            x, v = hit
            return ConditionResult(False, n, tuple(float(c) for c in x),
                                   f"g={float(v)!r} exceeds ceiling {ceiling:g}: blow-up near a finite point")
    return ConditionResult(True, n)


def _levels(g, vals, n_levels):
    zm = float(g.zeta_m)
    cand = np.unique(vals[np.isfinite(vals) & (vals > zm)])
    if cand.size == 0:
        return cand
    idx = np.unique(np.linspace(0, cand.size - 1, min(n_levels, cand.size)).round().astype(int))
    return cand[idx]


def _condition3(g, X, vals, levels):
    count = 0
    for zeta in levels:
        inside = vals < zeta
        member = SubLevel(g, zeta).contains(X[inside])
        count += int(inside.sum())
        if not np.all(member):
            i = np.nonzero(inside)[0][np.argmin(member)]
            return ConditionResult(False, count, _witness(X, i),
                                   f"g(x) < {zeta!r} but x is not in the sub-level set")
    return ConditionResult(True, count)


def _condition4(g, X, vals, tol, h_rel, n_levels, n_scales=5):
    """Points with g within ``tol`` of a level must sit next to that level's boundary.

    Neighbours are probed along the axes and radially at steps
    ``h_rel * 10**k`` (k < n_scales) relative to ``max(1, |x|)``, and at
    ``h_rel`` up to 1 relative to ``|x|``. Near a flat minimum the boundary of
    a low level can be a fair fraction of ``|x|`` away from a point whose value
    is merely within ``tol``; points exactly on the level get the short ladder
    only, which is what exposes plateaus. With a finite ``zeta_m`` everything is
    compared on the excess ``g - zeta_m``, so float plateaus of g near the
    minimum do not hide the boundary.
    """
    n = X.shape[1]
    D = np.concatenate([np.eye(n), -np.eye(n)])
    if g.zeta_m.is_finite:
        value, W, base = g.evaluate_excess, g.evaluate_excess(X), 0.0
    else:
        value, W, base = g.evaluate, vals, -math.inf
    cand = np.unique(W[np.isfinite(W) & (W > base)])
    if cand.size:
        cand = cand[np.unique(np.linspace(0, cand.size - 1, min(n_levels, cand.size)).round().astype(int))]
    steps = h_rel * 10.0 ** np.arange(n_scales)
    rel_steps = np.geomspace(h_rel, 1.0, int(round(-math.log10(h_rel))) + 1)
    count = 0
    for level in cand:
        for i in np.nonzero(np.abs(W - level) <= tol)[0]:
            x = X[i]
            r = float(norms(x[None])[0])
            radial = x / r if r > 0 else D[0]
            dirs = np.concatenate([D, radial[None], -radial[None]])
            on_level = W[i] == level
            rel = rel_steps[rel_steps <= 1e-2] if on_level else rel_steps
            hs = np.concatenate([rel * r, steps * max(1.0, r)]) if r > 0 else steps
            nbrs = (x[None, None, :] + hs[:, None, None] * dirs[None, :, :]).reshape(-1, n)
            with np.errstate(invalid="ignore"):
                inside = value(nbrs) < level
            count += 1
            if on_level:
                ok = bool(inside.any())
            else:
                ok = bool(np.any(inside != (W[i] < level)))
            if not ok:
                return ConditionResult(False, count, _witness(X, i),
                                       f"g(x)={float(vals[i])!r} is within {tol:g} of a level but no "
                                       f"sub-level boundary lies within {float(hs.max()):.1e}")
    return ConditionResult(True, count)


def validate_gfunction(g: GFunctionSpec, window: Region, plan: SamplingPlan, *,
                       floor: float = -500.0, ceiling: float = 1e6,
                       boundary_tol: float = 1e-9, probe_min_radius: float = 1e-300,
                       n_levels: int = 25, boundary_step: float = 1e-6) -> ValidationReport:
    """Check the four defining conditions of a G-function on samples of ``window``.

    Violations are reported, never raised. A pass means only that no sample
    contradicted the condition.
    """
    box = window.bounding_box()
    if box is None:
        raise ValueError("validation window must be bounded")
    X = sample_region(window, plan)
    vals = g.evaluate(X)
    dirs = ray_directions(g.dim, plan.shell_directions, np.random.default_rng(plan.seed))
    levels = _levels(g, vals, n_levels)
    return ValidationReport(
        _condition1(g, X, vals, box, dirs, floor, probe_min_radius),
        _condition2(g, X, vals, box, ceiling),
        _condition3(g, X, vals, levels),
        _condition4(g, X, vals, boundary_tol, boundary_step, n_levels),
        label=g.label,
        config_echo={
            "plan": plan.to_dict(),
            "window": window.to_dict(),
            "floor": floor,
            "ceiling": ceiling,
            "boundary_tol": boundary_tol,
            "probe_min_radius": probe_min_radius,
            "zeta_m": xr_to_json(g.zeta_m),
        },
    )
