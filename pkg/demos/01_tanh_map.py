"""
Certifying a one-dimensional map with a sign-indefinite certificate
===================================================================

The map x -> sin(x)(tanh(x) - x) lives on (-1, 1). The candidate
g(x) = ln|x| / |x| is negative on the whole interval and tends to -inf at the
origin, so it is no Lyapunov function in the classical sense. Its strict
sub-level set {g < 0} is exactly (-1, 1), and the one-step variation
g(f(x)) - g(x) is negative there.
"""

import numpy as np

from gstab import Box, SamplingPlan, builtin_example, builtin_gfunction, check_theorem1, check_theorem2, delta_g

sys_ = builtin_example("Ex1")
g = builtin_gfunction("LogOverNorm")

# A few hand-picked points first: the decrease is large near 0 and small near 1.
for x in (1e-8, 1e-3, 0.5, 0.99):
    print(f"dg({x:g}) = {float(delta_g(g, sys_, [x])):.4g}")

# Dense sampling: a fine grid, log-spaced shells toward 0 and toward +-1.
plan = SamplingPlan(grid_points=10001, random_count=2000)
rep = check_theorem1(g, sys_, 0.0, plan, window=Box((-1.0,), (1.0,)))
print(f"\n{rep.samples_tested} samples: {rep.verdict.value}, worst dg = {rep.margin_max:.3e}")

# A class-K lower bound for the decrease, built from radial bins.
fit = check_theorem2(g, sys_, 0.0, plan)
r = np.array([1e-6, 1e-3, 0.1, 0.9])
print("class-K minorant valid:", fit.valid)
print("phi(r) at", r, "=", np.round(fit.phi(r), 4))
