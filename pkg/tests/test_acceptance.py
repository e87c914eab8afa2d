"""Acceptance criteria: one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` (the lines are printed
with capture disabled, so plain ``pytest`` shows them too).
"""

import math
import time

import numpy as np
import pytest

from gstab import (
    Ball,
    Box,
    GFunctionSpec,
    Outcome,
    SamplingPlan,
    builtin_example,
    builtin_gfunction,
    check_global,
    check_invariance,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    delta_g,
    find_largest_lambda,
    sample_region,
    simulate,
    validate_gfunction,
)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, msg):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {msg}")
        assert ok, msg
    return emit


def test_criterion_1_ex1_certified(verdict):
    plan = SamplingPlan(grid_points=10001, random_count=2000, shell_min_radius=1e-12)
    g, sys_ = builtin_gfunction("LogOverNorm"), builtin_example("Ex1")
    t0 = time.perf_counter()
    rep = check_theorem1(g, sys_, 0.0, plan, window=Box((-1.0,), (1.0,)))
    elapsed = time.perf_counter() - t0
    ok = (rep.passed and rep.violation_count == 0 and rep.samples_tested >= 10_000
          and rep.margin_max < 0 and elapsed < 5.0)
    verdict(1, ok, f"Ex1 decrease check: {rep.samples_tested} samples, {rep.violation_count} violations, "
                   f"margin_max={rep.margin_max:.3e}, {elapsed:.2f}s (need >=1e4, <0, <5s)")


def test_criterion_2_ex2_range_and_certificate(verdict):
    sys_, g = builtin_example("Ex2"), builtin_gfunction("NegSinc")
    plan = SamplingPlan(grid_points=20001, random_count=2000)
    half = math.pi / 2
    X = sample_region(Box((-half,), (half,), closed=False), plan)
    fmax = float(np.max(np.abs(sys_.apply(X))))
    target = 4 / (3 * math.sqrt(3))
    ok_a = abs(fmax - target) <= 1e-6

    Xj = sample_region(Box((-half,), (half,)), plan)
    vals = g.evaluate(Xj)
    ok_b = bool(np.all((vals >= -1 - 1e-12) & (vals <= -2 / math.pi + 1e-12)))

    rep = check_theorem1(g, sys_, -2 / math.pi, plan)
    ok_c = rep.passed and rep.violation_count == 0
    verdict(2, ok_a and ok_b and ok_c,
            f"Ex2: max|f|={fmax:.9f} vs 4/(3*sqrt3)={target:.9f} (|diff|={abs(fmax - target):.1e} <= 1e-6: {ok_a}); "
            f"Jordan bounds on {Xj.shape[0]} samples: {ok_b}; decrease check at -2/pi: "
            f"{rep.verdict.value}, {rep.violation_count} violations")


def test_criterion_3_ex3_threshold(verdict):
    g = builtin_gfunction("LogL1Norm", 2)
    windows = [Box.cube(1.0, 2), Box.cube(10.0, 2), Box.cube(100.0, 2)]
    plan = SamplingPlan(grid_points=201, random_count=5000)
    threshold = 1 - 1 / math.sqrt(2 * math.e)
    good = check_global(g, builtin_example("Ex3", alpha=0.5), windows, plan)
    bad = check_global(g, builtin_example("Ex3", alpha=0.6), windows, plan)
    s = 2 ** -0.5
    dg = float(delta_g(g, builtin_example("Ex3", alpha=0.6), [50.0, s]))
    expected = math.log(50 / (50 + s)) + math.log(s * math.exp(-0.5) + 0.6)
    ok = (0.5 < threshold < 0.6 and good.passed and bad.verdict.value == "violated"
          and dg > 0 and abs(dg - expected) <= 1e-3 and abs(dg - 0.0145) <= 1e-3)
    verdict(3, ok, f"Ex3 threshold {threshold:.5f}: alpha=0.5 {good.verdict.value} "
                   f"({good.samples_tested} samples); alpha=0.6 {bad.verdict.value} "
                   f"({bad.violation_count} witnesses); dg(50, 2^-1/2)={dg:.5f} vs {expected:.5f}")


def test_criterion_4_ex4_exact_domain(verdict):
    g = builtin_gfunction("LogNorm")
    plan = SamplingPlan(grid_points=4001, random_count=2000)
    step = 6.0 / (plan.grid_points - 1)
    lines, ok = [], True
    for f_choice in ("Quadratic", "ExpShift"):
        sys_ = builtin_example("Ex4", alpha=0.0, f_choice=f_choice)
        r1 = check_theorem1(g, sys_, 0.0, plan, window=Box((-1.0,), (1.0,)))
        r3 = check_theorem3(g, sys_, 0.0, Box((-3.0,), (3.0,)), plan)
        lam = find_largest_lambda(g, sys_, -5.0, 2.0, plan, window=Box((-3.0,), (3.0,))).value
        inside = simulate(sys_, [0.999999999], max_steps=100_000)
        outside = simulate(sys_, [1.00000001], max_steps=100_000)
        conv_in = (inside.classification.outcome == Outcome.CONVERGED
                   and abs(inside.states[-1, 0]) < 1e-6)
        never = outside.classification.outcome != Outcome.CONVERGED
        above_one = bool(np.all(np.abs(outside.states) >= 1.0))
        part = (r1.passed and r3.passed and abs(lam) <= 1e-3 + step and conv_in and never and above_one)
        ok &= part
        lines.append(f"{f_choice}: T1 {r1.verdict.value}, T3 {r3.verdict.value}, lambda={lam:.2e}, "
                     f"x0=0.999999999 -> {inside.classification}, x0=1.00000001 -> {outside.classification}"
                     f" with |x|>=1 throughout: {above_one}")
    verdict(4, ok, "Ex4 alpha=0; " + "; ".join(lines))


CERTIFIED = [
    ("Ex1", {}, "LogOverNorm", 1, 0.0, None),
    ("Ex2", {}, "NegSinc", 1, -2 / math.pi, None),
    ("Ex3", {"alpha": 0.5}, "LogL1Norm", 2, math.log(10.0), Box.cube(10.0, 2)),
    ("Ex4", {}, "LogNorm", 1, 0.0, Box((-3.0,), (3.0,))),
    ("Ex4", {"f_choice": "ExpShift"}, "LogNorm", 1, 0.0, Box((-3.0,), (3.0,))),
]


def test_criterion_5_invariance(verdict):
    plan = SamplingPlan(grid_points=201, random_count=500, seed=5, shells_per_decade=16)
    rng = np.random.default_rng(5)
    ok, parts = True, []
    for name, kw, gname, dim, lam, window in CERTIFIED:
        g, sys_ = builtin_gfunction(gname, dim), builtin_example(name, **kw)
        lo = float(g.zeta_m) if g.zeta_m.is_finite else lam - 10.0
        zetas = np.sort(np.append(rng.uniform(lo, lam, 4), lam))
        zetas = np.where(zetas > lo, zetas, lam)
        for z in zetas:
            rep = check_invariance(g, sys_, float(z), plan, steps=100, window=window)
            good = rep.passed and rep.samples_tested >= 100
            ok &= good
            if not good:
                parts.append(f"{name}{kw} zeta={z:.4g}: {rep.verdict.value} ({rep.samples_tested} starts)")
        if name == "Ex4":
            comp = check_invariance(g, sys_, 0.0, plan, steps=100, direction="complement", window=window)
            good = comp.passed and comp.samples_tested >= 100
            ok &= good
            parts.append(f"Ex4{kw} complement: {comp.verdict.value} ({comp.samples_tested} starts)")
    verdict(5, ok, f"sub-level invariance for 5 levels x {len(CERTIFIED)} certified pairs, 100 steps; "
            + "; ".join(parts))


def test_criterion_6_class_k_envelope(verdict):
    plan = SamplingPlan(grid_points=2001, random_count=5000)
    plan2 = SamplingPlan(grid_points=201, random_count=5000)
    cases = [
        ("Ex1", builtin_gfunction("LogOverNorm"), builtin_example("Ex1"), 0.0, None, plan),
        ("Ex2", builtin_gfunction("NegSinc"), builtin_example("Ex2"), -2 / math.pi, None, plan),
        ("Ex3(alpha=0.5)", builtin_gfunction("LogL1Norm", 2), builtin_example("Ex3", alpha=0.5),
         math.log(5.0), Box.cube(5.0, 2), plan2),
    ]
    ok, parts = True, []
    for label, g, sys_, lam, window, p in cases:
        fit = check_theorem2(g, sys_, lam, p, window=window)
        r = np.geomspace(max(1e-6, fit.bin_edges[0]), fit.bin_edges[-1], 200)
        positive = bool(np.all(fit.phi(r) > 0))
        ok &= fit.valid and positive
        parts.append(f"{label}: valid={fit.valid}, min phi on [1e-6, {fit.bin_edges[-1]:.2g}]="
                     f"{float(fit.phi(r).min()):.2e}")
    verdict(6, ok, "; ".join(parts))


def test_criterion_7_validator(verdict):
    plan = SamplingPlan(grid_points=81, random_count=2000)
    results = {}
    for name in ("LogNorm", "LogOverNorm", "NegSinc", "NegCosExp", "PiecewiseLogNorm"):
        results[name] = all(validate_gfunction(builtin_gfunction(name, d), Ball(2.0, d), plan).overall
                            for d in (1, 2))
    xs = np.array([0.5, 0.0])
    blow = GFunctionSpec(2, lambda X: 1.0 / np.linalg.norm(X - xs, axis=1), 2.0, "1/|x-x*|")
    rb = validate_gfunction(blow, Ball(2.0, 2), plan)
    blow_ok = (not rb.condition2.passed and rb.condition2.witness is not None
               and np.linalg.norm(np.subtract(rb.condition2.witness, xs)) < 1e-3)
    offmin = GFunctionSpec.from_expression("norm()**2 - norm()", 2)
    ro = validate_gfunction(offmin, Ball(2.0, 2), plan)
    off_ok = not ro.condition1.passed and ro.condition1.witness is not None
    ok = all(results.values()) and blow_ok and off_ok
    verdict(7, ok, f"catalog {results}; blow-up flags condition 2 at {rb.condition2.witness}: {blow_ok}; "
                   f"off-origin minimum flags condition 1 at {ro.condition1.witness}: {off_ok}")


def test_criterion_8_property_suite(verdict):
    import test_properties as props

    total, names = 0, []
    for attr in sorted(dir(props)):
        fn = getattr(props, attr)
        if attr.startswith("test_") and hasattr(fn, "hypothesis"):
            fn()
            total += fn._hypothesis_internal_use_settings.max_examples
            names.append(attr[5:])
    verdict(8, total >= 1000, f"{len(names)} properties, {total} generated cases: {', '.join(names)}")
