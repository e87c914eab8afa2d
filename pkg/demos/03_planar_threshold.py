"""
Global stability and where it breaks
====================================

The planar map (x, y) -> (x y exp(-y^2), alpha x) with g = ln(|x| + |y|).
Since |y| exp(-y^2) <= 1/sqrt(2e), the variation is bounded by
ln(1/sqrt(2e) + |alpha|), which is negative while |alpha| < 1 - 1/sqrt(2e).
Here the bound is probed on growing windows for alpha on both sides of it.
"""

import math

from gstab import Box, SamplingPlan, builtin_example, builtin_gfunction, check_global, delta_g

g = builtin_gfunction("LogL1Norm", 2)
windows = [Box.cube(1.0, 2), Box.cube(10.0, 2), Box.cube(100.0, 2)]
plan = SamplingPlan(grid_points=201, random_count=5000)

threshold = 1 - 1 / math.sqrt(2 * math.e)
print(f"threshold 1 - 1/sqrt(2e) = {threshold:.5f}\n")

for alpha in (0.3, 0.5, 0.55, 0.6, 0.7):
    rep = check_global(g, builtin_example("Ex3", alpha=alpha), windows, plan)
    per = ", ".join(w["verdict"] for w in rep.details["windows"])
    print(f"alpha={alpha:4}: {rep.verdict.value:16} windows: {per}")

# The bound is attained for large |x| and y = 1/sqrt(2): a concrete witness.
sys_ = builtin_example("Ex3", alpha=0.6)
print(f"\nalpha=0.6, dg(50, 2^-1/2) = {float(delta_g(g, sys_, [50.0, 2 ** -0.5])):+.5f}")
