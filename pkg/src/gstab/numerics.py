"""Extended reals, state vectors, regions, and the deterministic region sampler.

States are plain 1-D float64 arrays; batches of states are ``(N, n)`` arrays.
Every region exposes a vectorized ``contains`` so the checkers can filter
tens of thousands of samples in one call.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .exceptions import DimensionMismatch, EmptyRegion, UndefinedDifference

__all__ = [
    "ExtendedReal",
    "NEG_INF",
    "xr_sub",
    "xr_to_json",
    "xr_from_json",
    "as_state",
    "as_batch",
    "norms",
    "Region",
    "Ball",
    "Box",
    "SubLevel",
    "Complement",
    "All",
    "region_contains",
    "SamplingPlan",
    "sample_region",
    "ray_directions",
]


class ExtendedReal(float):
    """A value of R ∪ {-inf}.

    Subclasses ``float`` so it interoperates with numpy and ``math``; the
    constructor rejects NaN and +inf, which leaves a totally ordered set.
    """

    __slots__ = ()

    def __new__(cls, value: Any = 0.0) -> "ExtendedReal":
        v = float(value)
        if math.isnan(v):
            raise ValueError("ExtendedReal cannot be NaN")
        if v == math.inf:
            raise ValueError("ExtendedReal excludes +inf")
        return super().__new__(cls, v)

    @property
    def is_neg_inf(self) -> bool:
        return float(self) == -math.inf

    @property
    def is_finite(self) -> bool:
        return float(self) != -math.inf

    def __repr__(self) -> str:
        return "NEG_INF" if self.is_neg_inf else f"ExtendedReal({float(self)!r})"


NEG_INF = ExtendedReal(-math.inf)


def xr_sub(a, b) -> ExtendedReal:
    """Return ``a - b`` on the extended reals.

    ``-inf - finite`` is ``-inf``. A ``-inf`` subtrahend is undefined (it can
    only arise from evaluating g at a nonzero point where g should be finite).
    """
    a = ExtendedReal(a)
    b = ExtendedReal(b)
    if b.is_neg_inf:
        raise UndefinedDifference(f"{a!r} - {b!r} is undefined")
    diff = float(a) - float(b)
    if diff == math.inf:
        raise OverflowError(f"{a!r} - {b!r} overflows")
    return ExtendedReal(diff)


def xr_to_json(v):
    """Encode a float for strict JSON: -inf and NaN become string tokens."""
    if v is None:
        return None
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == -math.inf:
        return "-inf"
    if v == math.inf:
        return "inf"
    return v


def xr_from_json(v):
    if v is None:
        return None
    if isinstance(v, str):
        return {"-inf": -math.inf, "inf": math.inf, "nan": math.nan}[v]
    return float(v)


def as_state(x, dim: int | None = None) -> np.ndarray:
    """Validate ``x`` as a finite state vector and return it as float64."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch(f"state must be a non-empty 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state entries must be finite")
    return arr.copy()


def as_batch(X, dim: int | None = None) -> np.ndarray:
    """Coerce to an ``(N, n)`` float array; a single vector becomes ``(1, n)``."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a batch of shape (N, n), got {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[1]}")
    return arr


def norms(X) -> np.ndarray:
    """Row-wise Euclidean norms that neither underflow nor overflow."""
    X = np.asarray(X, dtype=float)
    scale = np.max(np.abs(X), axis=-1)
    safe = np.where((scale > 0) & np.isfinite(scale), scale, 1.0)
    with np.errstate(invalid="ignore"):
        r = safe * np.sqrt(np.sum((X / safe[..., None]) ** 2, axis=-1))
    return np.where(scale > 0, np.where(np.isfinite(scale), r, scale), 0.0)


# ---------------------------------------------------------------------------
# Regions


class Region:
    dim: int

    def contains(self, X) -> np.ndarray:
        raise NotImplementedError

    def bounding_box(self) -> "Box | None":
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(Region):
    """Open Euclidean ball about the origin."""

    radius: float
    dim: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("Ball radius must be positive")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def contains(self, X):
        X = as_batch(X, self.dim)
        return norms(X) < self.radius

    def bounding_box(self):
        r = float(self.radius)
        return Box((-r,) * self.dim, (r,) * self.dim)

    def to_dict(self):
        return {"ball": float(self.radius), "dim": self.dim}


@dataclass(frozen=True)
class Box(Region):
    """Axis-aligned box; closed unless ``closed=False``."""

    lower: tuple
    upper: tuple
    closed: bool = True

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi) or not lo:
            raise DimensionMismatch("box bounds must have equal, positive length")
        if not all(a < b for a, b in zip(lo, hi)):
            raise ValueError("box requires lower < upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, half_width: float, dim: int, closed: bool = True) -> "Box":
        return cls((-half_width,) * dim, (half_width,) * dim, closed)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, X):
        X = as_batch(X, self.dim)
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        if self.closed:
            return np.all((X >= lo) & (X <= hi), axis=1)
        return np.all((X > lo) & (X < hi), axis=1)

    def bounding_box(self):
        return self if self.closed else Box(self.lower, self.upper)

    def scaled(self, factor: float) -> "Box":
        return Box(tuple(v * factor for v in self.lower), tuple(v * factor for v in self.upper), self.closed)

    def to_dict(self):
        return {"lower": list(self.lower), "upper": list(self.upper), "closed": self.closed}


@dataclass(frozen=True)
class SubLevel(Region):
    """The strict sub-level set {x : g(x) < zeta}."""

    g: Any
    zeta: float

    @property
    def dim(self) -> int:
        return self.g.dim

    def contains(self, X):
        with np.errstate(invalid="ignore"):
            return self.g.evaluate(as_batch(X, self.dim)) < self.zeta

    def to_dict(self):
        return {"sublevel": self.g.label, "zeta": xr_to_json(self.zeta)}


@dataclass(frozen=True)
class Complement(Region):
    """Points of ``window`` that are not in ``inner``."""

    inner: Region
    window: Box

    def __post_init__(self):
        if self.inner.dim != self.window.dim:
            raise DimensionMismatch("complement window and inner region differ in dimension")

    @property
    def dim(self) -> int:
        return self.window.dim

    def contains(self, X):
        X = as_batch(X, self.dim)
        return self.window.contains(X) & ~self.inner.contains(X)

    def bounding_box(self):
        return self.window.bounding_box()

    def to_dict(self):
        return {"complement_of": self.inner.to_dict(), "window": self.window.to_dict()}


@dataclass(frozen=True)
class All(Region):
    dim: int = 1

    def contains(self, X):
        return np.ones(as_batch(X, self.dim).shape[0], dtype=bool)

    def to_dict(self):
        return {"all": self.dim}


def region_contains(r: Region, x) -> bool:
    return bool(r.contains(as_state(x, r.dim)[None, :])[0])


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class SamplingPlan:
    """How to cover a region with a finite, reproducible point set.

    The grid is anchored at the origin when ``grid_step`` is given and spans
    the box with ``grid_points`` per axis otherwise. Rays from the origin
    carry log-spaced shells toward 0 and toward the first boundary crossing.
    """

    grid_step: float | None = None
    grid_points: int = 101
    random_count: int = 1000
    seed: int = 0
    exclusion_radius: float = 1e-12
    shell_min_radius: float = 1e-12
    shells_per_decade: int = 4
    shell_directions: int = 16
    boundary_decades: int = 12
    ray_scan_points: int = 256

    def __post_init__(self):
        if self.grid_step is not None and not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if self.grid_points < 0 or self.random_count < 0:
            raise ValueError("sample counts must be non-negative")
        if self.exclusion_radius < 0:
            raise ValueError("exclusion_radius must be >= 0")
        if not self.shell_min_radius > 0:
            raise ValueError("shell_min_radius must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingPlan":
        return cls(**d)


_MAX_GRID = 5_000_000


def _axis_grid(lo: float, hi: float, plan: SamplingPlan) -> np.ndarray:
    if plan.grid_step is not None:
        step = plan.grid_step
        ks = np.arange(math.ceil(lo / step), math.floor(hi / step) + 1)
        return ks * step
    if plan.grid_points == 0:
        return np.empty(0)
    return np.linspace(lo, hi, plan.grid_points)


def _grid(box: Box, plan: SamplingPlan) -> np.ndarray:
    axes = [_axis_grid(lo, hi, plan) for lo, hi in zip(box.lower, box.upper)]
    total = math.prod(len(a) for a in axes)
    if total > _MAX_GRID:
        raise ValueError(f"grid of {total} points exceeds the {_MAX_GRID} limit; coarsen the plan")
    if total == 0:
        return np.empty((0, box.dim))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def ray_directions(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Unit directions for radial probing: ±1 in 1-D, evenly spaced in 2-D,
    coordinate axes plus seeded random directions above that."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        m = max(count, 4)
        th = 2 * np.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    eye = np.eye(dim)
    extra = rng.standard_normal((count, dim))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    return np.concatenate([eye, -eye, extra])


def _exit_distance(box: Box, u: np.ndarray) -> float:
    t = math.inf
    for lo, hi, c in zip(box.lower, box.upper, u):
        if c > 0:
            t = min(t, hi / c)
        elif c < 0:
            t = min(t, lo / c)
    return t


def _ray_shells(region: Region, box: Box, dirs: np.ndarray, plan: SamplingPlan, excl: float) -> list:
    """Points along rays: log shells toward the origin and toward each
    membership transition (and the ray end when it is still inside)."""
    lo_arr = np.asarray(box.lower)
    hi_arr = np.asarray(box.upper)
    if np.any(lo_arr > 0) or np.any(hi_arr < 0):
        return []
    r_lo = max(plan.shell_min_radius, excl * (1 + 1e-6))
    offsets = 10.0 ** -np.arange(1, plan.boundary_decades + 1)
    out = []
    # scan every ray at once
    t_max = np.array([_exit_distance(box, u) for u in dirs])
    K = max(plan.ray_scan_points, 8)
    frac = np.concatenate([np.geomspace(1e-6, 1.0, 64), np.linspace(0.0, 1.0, K)[1:]])
    frac = np.unique(frac)
    T = t_max[:, None] * frac[None, :]
    P = T[..., None] * dirs[:, None, :]
    M = region.contains(P.reshape(-1, box.dim)).reshape(T.shape)

    seg_i, seg_j = np.nonzero(M[:, :-1] != M[:, 1:])
    first_cross = t_max.copy()
    if seg_i.size:
        a = T[seg_i, seg_j].copy()
        b = T[seg_i, seg_j + 1].copy()
        in_low = M[seg_i, seg_j]
        u = dirs[seg_i]
        for _ in range(60):
            mid = 0.5 * (a + b)
            m = region.contains(mid[:, None] * u)
            same = m == in_low
            a = np.where(same, mid, a)
            b = np.where(same, b, mid)
        inside_t = np.where(in_low, a, b)
        sign = np.where(in_low, -1.0, 1.0)
        ts = inside_t[:, None] * (1.0 + sign[:, None] * offsets[None, :])
        ts = np.concatenate([inside_t[:, None], ts], axis=1)
        out.append((ts[..., None] * u[:, None, :]).reshape(-1, box.dim))
        np.minimum.at(first_cross, seg_i, inside_t)

    ends_inside = M[:, -1]
    if np.any(ends_inside):
        u = dirs[ends_inside]
        te = t_max[ends_inside]
        ts = te[:, None] * (1.0 - offsets[None, :])
        ts = np.concatenate([te[:, None], ts], axis=1)
        out.append((ts[..., None] * u[:, None, :]).reshape(-1, box.dim))

    for u, r_hi in zip(dirs, first_cross):
        if not r_hi > r_lo:
            continue
        n = max(2, int(math.ceil(math.log10(r_hi / r_lo) * plan.shells_per_decade)) + 1)
        radii = np.geomspace(r_lo, r_hi, n)
        out.append(radii[:, None] * u[None, :])
    return out


def _sampling_box(region: Region, window: Region | None) -> Box:
    bb = region.bounding_box()
    wb = window.bounding_box() if window is not None else None
    if bb is None and wb is None:
        raise ValueError("region is unbounded; a bounded sampling window is required")
    if bb is None:
        return wb
    if wb is None:
        return bb
    lo = np.maximum(bb.lower, wb.lower)
    hi = np.minimum(bb.upper, wb.upper)
    if np.any(lo >= hi):
        raise EmptyRegion("region and window do not overlap")
    return Box(tuple(lo), tuple(hi))


def sample_region(region: Region, plan: SamplingPlan, exclusion_radius: float | None = None,
                  window: Region | None = None) -> np.ndarray:
    """Return an ``(N, n)`` array of points of ``region`` with ``|x| > exclusion_radius``.

    Candidates are a grid, ``plan.random_count`` uniform draws, and radial
    shells; all are filtered by membership in ``region`` and ``window``. The
    result depends only on the arguments (the RNG is seeded from the plan).
    """
    excl = plan.exclusion_radius if exclusion_radius is None else float(exclusion_radius)
    if excl < 0:
        raise ValueError("exclusion_radius must be >= 0")
    if window is not None and window.dim != region.dim:
        raise DimensionMismatch("window and region differ in dimension")
    box = _sampling_box(region, window)
    rng = np.random.default_rng(plan.seed)
    dirs = ray_directions(box.dim, plan.shell_directions, rng)
    parts = [
        _grid(box, plan),
        rng.uniform(box.lower, box.upper, size=(plan.random_count, box.dim)),
    ]
    parts += _ray_shells(region, box, dirs, plan, excl)
    pts = np.concatenate(parts)
    keep = norms(pts) > excl
    keep &= box.contains(pts)
    if window is not None:
        keep &= window.contains(pts)
    keep[keep] = region.contains(pts[keep])
    pts = pts[keep]
    if pts.shape[0] == 0:
        raise EmptyRegion("no sample point lies in the region")
    return pts
