"""
Sub-level sets that trap motions, and complements that repel them
=================================================================

Whenever the decrease holds on {g < Lambda}, every smaller sub-level set is
positively invariant. For the exact-domain map the complement of {g < 0} is
invariant too: motions that start outside the unit ball never enter it.
Both facts are checked by brute-force simulation from sampled starts.
"""

from gstab import Box, SamplingPlan, builtin_example, builtin_gfunction, check_invariance

plan = SamplingPlan(grid_points=201, random_count=500, shells_per_decade=16)
g = builtin_gfunction("LogNorm")
sys_ = builtin_example("Ex4")
window = Box((-3.0,), (3.0,))

for zeta in (-4.0, -1.0, -0.1, 0.0):
    rep = check_invariance(g, sys_, zeta, plan, steps=100, window=window)
    print(f"{{g < {zeta:5}}}: {rep.verdict.value} ({rep.samples_tested} starts, 100 steps)")

rep = check_invariance(g, sys_, 0.0, plan, steps=100, direction="complement", window=window)
print(f"complement of {{g < 0}} in [-3, 3]: {rep.verdict.value} ({rep.samples_tested} starts, "
      f"{rep.escaped} left the float range)")

# A map that flips and stretches fails the same test immediately.
from gstab import DiscreteSystem

flip = DiscreteSystem.from_expressions(["-1.5*x"], Box((-2.0,), (2.0,)))
bad = check_invariance(g, flip, -0.5, plan, steps=5)
print(f"\nx -> -1.5x: {bad.verdict.value}; first witness {bad.violations[0].x} ({bad.violations[0].detail})")
