"""
Is it a G-function at all?
==========================

The validator samples a window and tests the four defining conditions: the
minimum (or the -inf limit) at the origin, no blow-up to +inf, strict
sub-level membership, and the level set forming the boundary of the
sub-level set. Five catalog functions pass; two designed counterexamples
fail on the expected condition.
"""

import numpy as np

from gstab import Ball, GFunctionSpec, SamplingPlan, builtin_gfunction, validate_gfunction

plan = SamplingPlan(grid_points=81, random_count=2000)

for name in ("LogNorm", "LogOverNorm", "NegSinc", "NegCosExp", "PiecewiseLogNorm"):
    for dim in (1, 2):
        rep = validate_gfunction(builtin_gfunction(name, dim), Ball(2.0, dim), plan)
        print(f"{name:17} dim={dim}: {'valid' if rep.overall else 'INVALID'}")

xs = np.array([0.5, 0.0])
blow = GFunctionSpec(2, lambda X: 1.0 / np.linalg.norm(X - xs, axis=1), 2.0, "1/|x - (0.5, 0)|")
offmin = GFunctionSpec.from_expression("norm()**2 - norm()", 2)
plateau = GFunctionSpec(2, lambda X: np.minimum(np.linalg.norm(X, axis=1), 1.0), 0.0, "min(|x|, 1)")

for g in (blow, offmin, plateau):
    rep = validate_gfunction(g, Ball(2.0, 2), plan)
    print(f"\n{g.label}:")
    for i, c in enumerate(rep.conditions(), 1):
        if not c.passed:
            print(f"  condition {i} violated at {c.witness}: {c.detail}")
