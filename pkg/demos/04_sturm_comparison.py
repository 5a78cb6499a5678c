#!/usr/bin/env python3
"""Fourth-order comparison: a strictly larger positive coefficient forces
strictly more interior zeros.

Hypothesis-bearing solution pairs are built from eigen data (nontrivial
solutions of u'''' = b u with all four boundary conditions exist only at
pencil eigenvalues), which is also how the randomized suite works.
"""

import numpy as np

from beamspec import eigen_pencil, make_grid, sample, sturm_check

grid = make_grid(1000)

print("analytic constant coefficients:")
b1 = sample(lambda t: np.pi**4 * np.ones_like(t), grid)
b2 = sample(lambda t: 16 * np.pi**4 * np.ones_like(t), grid)
u1 = sample(lambda t: np.sin(np.pi * t), grid)
u2 = sample(lambda t: np.sin(2 * np.pi * t), grid)
v = sturm_check(b1, b2, u1, u2, residual_tol=1e-2)
print(f"  b = pi^4 vs 16 pi^4: zeros {v['count1']} -> {v['count2']}, "
      f"pass = {v['pass']}")

print()
print("random smooth positive weights via eigen data:")
rng = np.random.default_rng(5)
for trial in range(4):
    c = rng.uniform(-0.5, 0.5, 3)
    fn = lambda t, c=c: 1.2 + sum(cj * np.sin((j + 1) * np.pi * t) / (j + 2)
                                  for j, cj in enumerate(c))
    m = sample(fn, grid)
    res = eigen_pencil(m, 4, 0)
    k1, k2 = 1, int(rng.integers(2, 5))
    b1 = res.positive[k1 - 1].mu * m
    b2 = res.positive[k2 - 1].mu * m
    if not np.all(b2.interior > b1.interior):
        print(f"  trial {trial}: pair rejected (no pointwise ordering)")
        continue
    v = sturm_check(b1, b2, res.positive[k1 - 1].phi, res.positive[k2 - 1].phi)
    print(f"  trial {trial}: k {k1} vs {k2}: zeros {v['count1']} -> "
          f"{v['count2']}, pass = {v['pass']}")

print()
print("negative control (second solution replaced by the first):")
try:
    sturm_check(b1, b2, res.positive[0].phi, res.positive[0].phi)
    print("  unexpectedly accepted")
except Exception as exc:
    print(f"  rejected: {type(exc).__name__}: {exc}")
