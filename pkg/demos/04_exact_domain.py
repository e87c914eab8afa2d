"""
An exact domain of attraction and two trajectories near its edge
================================================================

x -> f(|x|) x / (1 + ||x| - e^alpha|) with alpha = 0 and g = ln|x|. For both
f(r) = r^2 and f(r) = exp(r^2) + 1 - e the variation is negative inside the
unit ball and non-negative outside, so {g < 0} is the whole domain of
attraction. Starting just inside or just outside the unit interval shows the
dichotomy; the CSV files are ready for plotting k against x(k).
"""

from pathlib import Path

import numpy as np

from gstab import (
    Box,
    SamplingPlan,
    builtin_example,
    builtin_gfunction,
    check_theorem1,
    check_theorem3,
    find_largest_lambda,
    simulate,
    write_trajectory_csv,
)

g = builtin_gfunction("LogNorm")
plan = SamplingPlan(grid_points=4001, random_count=2000)
out = Path("demo_out")

for f_choice in ("Quadratic", "ExpShift"):
    sys_ = builtin_example("Ex4", f_choice=f_choice)
    inside = check_theorem1(g, sys_, 0.0, plan, window=Box((-1.0,), (1.0,)))
    outside = check_theorem3(g, sys_, 0.0, Box((-3.0,), (3.0,)), plan)
    lam = find_largest_lambda(g, sys_, -5.0, 2.0, plan, window=Box((-3.0,), (3.0,)))
    print(f"{f_choice}: inside {inside.verdict.value}, outside {outside.verdict.value}, "
          f"largest level {lam.value:.2e}")
    for x0, tag in ((0.999999999, "stable"), (1.00000001, "unstable")):
        rec = simulate(sys_, [x0], g=g)
        write_trajectory_csv(rec, out / f"{f_choice}_{tag}.csv")
        print(f"   x0={x0}: {rec.classification}, min |x(k)| = {np.abs(rec.states).min():.3g}")
print(f"trajectories written to {out}/")
