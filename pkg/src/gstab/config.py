"""JSON run configuration for the command-line front end.

Schema (every section optional except ``gfunction``)::

    {
      "system":     {"id": "Ex4", "alpha": 0.0, "f_choice": "Quadratic", "dim": 1}
                  | {"expr": ["2*x"], "domain": <window>, "label": "..."},
      "gfunction":  {"id": "LogNorm", "dim": 1}
                  | {"expr": "ln(norm())", "zeta_m": "-inf", "radially_increasing": true},
      "check":      {"lambda": 0.0 | "auto", "window": <window>, "windows": [<window>, ...],
                     "bracket": [lo, hi], "iterations": 30, "lambda_floor": -30.0,
                     "theorem2": false, "theorem3_window": <window>, "connected": false},
      "sampling":   {<SamplingPlan fields>},
      "simulation": {"x0": [...], "max_steps": 100000, "conv_tol": 1e-6,
                     "div_bound": 1e9, "conv_persist": 10},
      "output":     {"directory": "gstab_out", "formats": ["json", "csv"]}
    }

A ``<window>`` is ``{"lower": [...], "upper": [...]}`` (a closed box) or
``{"ball": r}``. ``-inf`` is written as the string ``"-inf"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .exceptions import ConfigError, ExpressionError
from .gfunctions import CATALOG, GFunctionSpec, builtin_gfunction
from .numerics import Ball, Box, Region, SamplingPlan
from .systems import EXAMPLES, DiscreteSystem, builtin_example

__all__ = ["RunConfig", "SimulationSettings", "load_config", "parse_config"]

_FORMATS = ("json", "csv")


@dataclass(frozen=True)
class SimulationSettings:
    x0: tuple | None = None
    max_steps: int = 100_000
    conv_tol: float = 1e-6
    div_bound: float = 1e9
    conv_persist: int = 10


@dataclass
class RunConfig:
    system: dict | None
    gfunction: dict
    check: dict = field(default_factory=dict)
    sampling: SamplingPlan = field(default_factory=SamplingPlan)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    output_dir: str = "gstab_out"
    formats: tuple = _FORMATS

    # built objects (not serialized)
    def build_system(self) -> DiscreteSystem:
        if self.system is None:
            raise ConfigError("system", "this command needs a system section")
        return _build_system(self.system)

    def build_gfunction(self) -> GFunctionSpec:
        return _build_gfunction(self.gfunction, self._dim())

    def _dim(self) -> int:
        if "dim" in self.gfunction:
            return self.gfunction["dim"]
        if self.system is not None:
            return _build_system(self.system).dim
        return 1

    def window(self, key: str = "window") -> Region | None:
        w = self.check.get(key)
        return None if w is None else _build_window(w, self._dim(), f"check.{key}")

    def windows(self) -> list:
        return [_build_window(w, self._dim(), f"check.windows[{i}]")
                for i, w in enumerate(self.check.get("windows", []))]

    def to_dict(self) -> dict:
        sim = {f.name: getattr(self.simulation, f.name) for f in fields(SimulationSettings)}
        sim["x0"] = None if sim["x0"] is None else list(sim["x0"])
        d = {
            "gfunction": dict(self.gfunction),
            "check": json.loads(json.dumps(self.check)),
            "sampling": self.sampling.to_dict(),
            "simulation": sim,
            "output": {"directory": self.output_dir, "formats": list(self.formats)},
        }
        if self.system is not None:
            d["system"] = json.loads(json.dumps(self.system))
        return d


# ---------------------------------------------------------------------------
# Field helpers


def _number(v, path, *, allow_neg_inf=False):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    if isinstance(v, str):
        if allow_neg_inf and v == "-inf":
            return -math.inf
        raise ConfigError(path, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(path, "must be finite")
    return v


def _int(v, path, minimum=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return v


def _bool(v, path):
    if not isinstance(v, bool):
        raise ConfigError(path, f"expected true or false, got {v!r}")
    return v


def _section(raw, key):
    v = raw.get(key, {})
    if not isinstance(v, dict):
        raise ConfigError(key, "must be an object")
    return v


def _reject_unknown(d, allowed, path):
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"{path}.{extra[0]}" if path else extra[0], f"unknown key (allowed: {', '.join(sorted(allowed))})")


def _build_window(w, dim, path) -> Region:
    if not isinstance(w, dict):
        raise ConfigError(path, "a window is {'lower': [...], 'upper': [...]} or {'ball': r}")
    if "ball" in w:
        _reject_unknown(w, {"ball"}, path)
        r = _number(w["ball"], f"{path}.ball")
        if r <= 0:
            raise ConfigError(f"{path}.ball", "radius must be positive")
        return Ball(r, dim)
    _reject_unknown(w, {"lower", "upper"}, path)
    try:
        lo = [_number(v, f"{path}.lower") for v in w["lower"]]
        hi = [_number(v, f"{path}.upper") for v in w["upper"]]
    except KeyError as exc:
        raise ConfigError(f"{path}.{exc.args[0]}", "missing") from None
    except TypeError:
        raise ConfigError(path, "lower and upper must be lists") from None
    if len(lo) != dim or len(hi) != dim:
        raise ConfigError(path, f"bounds must have length {dim}")
    if not all(a < b for a, b in zip(lo, hi)):
        raise ConfigError(path, "need lower < upper in every coordinate")
    return Box(lo, hi)


def _build_system(s) -> DiscreteSystem:
    if "id" in s:
        return builtin_example(s["id"], s.get("alpha"), s.get("f_choice", "Quadratic"), s.get("dim", 1))
    domain = None
    dim = len(s["expr"])
    if s.get("domain") is not None:
        domain = _build_window(s["domain"], dim, "system.domain")
    return DiscreteSystem.from_expressions(s["expr"], domain, s.get("label"))


def _build_gfunction(gs, dim) -> GFunctionSpec:
    if "id" in gs:
        return builtin_gfunction(gs["id"], dim)
    zm = gs.get("zeta_m")
    return GFunctionSpec.from_expression(gs["expr"], dim, None if zm is None else (
        -math.inf if zm == "-inf" else zm), gs.get("label"), gs.get("radially_increasing", False))


# ---------------------------------------------------------------------------
# Section parsers


def _parse_system(raw):
    if "system" not in raw or raw["system"] is None:
        return None
    s = _section(raw, "system")
    if "id" in s:
        _reject_unknown(s, {"id", "alpha", "f_choice", "dim"}, "system")
        if s["id"] not in EXAMPLES:
            raise ConfigError("system.id", f"unknown system {s['id']!r}; built-in systems are {', '.join(EXAMPLES)}"
                              " (custom maps go through system.expr)")
        out = {"id": s["id"]}
        if "alpha" in s:
            out["alpha"] = _number(s["alpha"], "system.alpha")
        if "f_choice" in s:
            if s["f_choice"] not in ("Quadratic", "ExpShift"):
                raise ConfigError("system.f_choice", "must be 'Quadratic' or 'ExpShift'")
            out["f_choice"] = s["f_choice"]
        if "dim" in s:
            out["dim"] = _int(s["dim"], "system.dim", 1)
            if s["id"] != "Ex4" and out["dim"] != (2 if s["id"] == "Ex3" else 1):
                raise ConfigError("system.dim", f"{s['id']} has a fixed dimension")
    elif "expr" in s:
        _reject_unknown(s, {"expr", "domain", "label"}, "system")
        expr = s["expr"]
        if isinstance(expr, str):
            expr = [expr]
        if not isinstance(expr, list) or not expr or not all(isinstance(e, str) for e in expr):
            raise ConfigError("system.expr", "must be a non-empty list of expression strings")
        out = {"expr": expr}
        if s.get("domain") is not None:
            _build_window(s["domain"], len(expr), "system.domain")
            out["domain"] = s["domain"]
        if "label" in s:
            out["label"] = str(s["label"])
    else:
        raise ConfigError("system", "needs either 'id' (a built-in system) or 'expr'")
    try:
        _build_system(out)
    except ExpressionError as exc:
        raise ConfigError("system.expr", str(exc)) from None
    except ValueError as exc:
        raise ConfigError("system", str(exc)) from None
    return out


def _parse_gfunction(raw, sys_dim):
    if "gfunction" not in raw:
        raise ConfigError("gfunction", "missing")
    gs = _section(raw, "gfunction")
    out = {}
    if "dim" in gs:
        out["dim"] = _int(gs["dim"], "gfunction.dim", 1)
        if sys_dim is not None and out["dim"] != sys_dim:
            raise ConfigError("gfunction.dim", f"differs from the system dimension {sys_dim}")
    dim = out.get("dim", sys_dim or 1)
    if "id" in gs:
        _reject_unknown(gs, {"id", "dim"}, "gfunction")
        if gs["id"] not in CATALOG:
            raise ConfigError("gfunction.id", f"unknown G-function {gs['id']!r}; choose from {', '.join(CATALOG)}")
        out["id"] = gs["id"]
    elif "expr" in gs:
        _reject_unknown(gs, {"expr", "zeta_m", "radially_increasing", "label", "dim"}, "gfunction")
        if not isinstance(gs["expr"], str):
            raise ConfigError("gfunction.expr", "must be an expression string")
        out["expr"] = gs["expr"]
        if gs.get("zeta_m") is not None:
            zm = _number(gs["zeta_m"], "gfunction.zeta_m", allow_neg_inf=True)
            out["zeta_m"] = "-inf" if zm == -math.inf else zm
        if "radially_increasing" in gs:
            out["radially_increasing"] = _bool(gs["radially_increasing"], "gfunction.radially_increasing")
        if "label" in gs:
            out["label"] = str(gs["label"])
    else:
        raise ConfigError("gfunction", "needs either 'id' (a catalog entry) or 'expr'")
    try:
        g = _build_gfunction(out, dim)
    except ExpressionError as exc:
        raise ConfigError("gfunction.expr", str(exc)) from None
    except ValueError as exc:
        raise ConfigError("gfunction", str(exc)) from None
    return out, g


_CHECK_KEYS = {"lambda", "window", "windows", "bracket", "iterations", "lambda_floor",
               "theorem2", "theorem3_window", "connected"}


def _parse_check(raw, g, dim):
    c = _section(raw, "check")
    _reject_unknown(c, _CHECK_KEYS, "check")
    out = {}
    if "lambda" in c:
        lam = c["lambda"]
        if lam != "auto":
            lam = _number(lam, "check.lambda")
            if not lam > float(g.zeta_m):
                raise ConfigError("check.lambda", f"must exceed zeta_m = {float(g.zeta_m)}")
        out["lambda"] = lam
    for key in ("window", "theorem3_window"):
        if c.get(key) is not None:
            _build_window(c[key], dim, f"check.{key}")
            out[key] = c[key]
    if "windows" in c:
        if not isinstance(c["windows"], list) or not c["windows"]:
            raise ConfigError("check.windows", "must be a non-empty list of windows")
        boxes = []
        for i, w in enumerate(c["windows"]):
            r = _build_window(w, dim, f"check.windows[{i}]")
            boxes.append(r.bounding_box())
        from .checker import _is_growing

        if not _is_growing(boxes):
            raise ConfigError("check.windows", "windows must be strictly increasing")
        out["windows"] = c["windows"]
    if "bracket" in c:
        b = c["bracket"]
        if not isinstance(b, list) or len(b) != 2:
            raise ConfigError("check.bracket", "must be [lo, hi]")
        lo = _number(b[0], "check.bracket[0]", allow_neg_inf=True)
        hi = _number(b[1], "check.bracket[1]")
        if not hi > lo:
            raise ConfigError("check.bracket", "need lo < hi")
        if lo < float(g.zeta_m):
            raise ConfigError("check.bracket[0]", f"must be >= zeta_m = {float(g.zeta_m)}")
        out["bracket"] = ["-inf" if lo == -math.inf else lo, hi]
    if "iterations" in c:
        out["iterations"] = _int(c["iterations"], "check.iterations", 1)
    if "lambda_floor" in c:
        out["lambda_floor"] = _number(c["lambda_floor"], "check.lambda_floor")
    for key in ("theorem2", "connected"):
        if key in c:
            out[key] = _bool(c[key], f"check.{key}")
    return out


def _parse_sampling(raw):
    s = _section(raw, "sampling")
    allowed = {f.name for f in fields(SamplingPlan)}
    _reject_unknown(s, allowed, "sampling")
    kw = {}
    for f in fields(SamplingPlan):
        if f.name not in s:
            continue
        v = s[f.name]
        path = f"sampling.{f.name}"
        if f.name == "grid_step":
            kw[f.name] = None if v is None else _number(v, path)
        elif isinstance(f.default, int):
            kw[f.name] = _int(v, path, 0)
        else:
            kw[f.name] = _number(v, path)
    try:
        return SamplingPlan(**kw)
    except ValueError as exc:
        raise ConfigError("sampling", str(exc)) from None


def _parse_simulation(raw, dim):
    s = _section(raw, "simulation")
    _reject_unknown(s, {f.name for f in fields(SimulationSettings)}, "simulation")
    kw = {}
    if s.get("x0") is not None:
        x0 = s["x0"]
        if not isinstance(x0, list):
            x0 = [x0]
        kw["x0"] = tuple(_number(v, "simulation.x0") for v in x0)
        if dim is not None and len(kw["x0"]) != dim:
            raise ConfigError("simulation.x0", f"expected {dim} components")
    if "max_steps" in s:
        kw["max_steps"] = _int(s["max_steps"], "simulation.max_steps", 1)
    if "conv_persist" in s:
        kw["conv_persist"] = _int(s["conv_persist"], "simulation.conv_persist", 1)
    for key in ("conv_tol", "div_bound"):
        if key in s:
            kw[key] = _number(s[key], f"simulation.{key}")
            if kw[key] <= 0:
                raise ConfigError(f"simulation.{key}", "must be positive")
    out = SimulationSettings(**kw)
    if not out.conv_tol < out.div_bound:
        raise ConfigError("simulation.conv_tol", "must be below simulation.div_bound")
    return out


def _parse_output(raw):
    o = _section(raw, "output")
    _reject_unknown(o, {"directory", "formats"}, "output")
    directory = o.get("directory", "gstab_out")
    if not isinstance(directory, str) or not directory:
        raise ConfigError("output.directory", "must be a non-empty string")
    formats = o.get("formats", list(_FORMATS))
    if not isinstance(formats, list) or any(f not in _FORMATS for f in formats):
        raise ConfigError("output.formats", f"must be a list drawn from {list(_FORMATS)}")
    return directory, tuple(formats)


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded config mapping; raises :class:`ConfigError`."""
    if not isinstance(raw, dict):
        raise ConfigError("", "the configuration must be a JSON object")
    _reject_unknown(raw, {"system", "gfunction", "check", "sampling", "simulation", "output"}, "")
    system = _parse_system(raw)
    sys_dim = None if system is None else _build_system(system).dim
    gfunc, g = _parse_gfunction(raw, sys_dim)
    dim = g.dim
    check = _parse_check(raw, g, dim)
    directory, formats = _parse_output(raw)
    return RunConfig(system, gfunc, check, _parse_sampling(raw), _parse_simulation(raw, dim),
                     directory, formats)


def load_config(path) -> RunConfig:
    """Read and validate a JSON config file; syntax errors carry line and column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_config(raw)
