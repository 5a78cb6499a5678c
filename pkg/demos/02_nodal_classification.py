#!/usr/bin/env python3
"""Zero detection and the simple/double dichotomy.

An interior zero is generalized double when u, u', u'' and u''' all
vanish there; for solutions of the beam equation that forces u = 0, so
every zero of a nontrivial solution must be generalized simple.  The
classifier below is what the branch tracer runs after every accepted
step to certify that invariant.
"""

import numpy as np

from beamspec import (classify_zero, eigen_pencil, find_zeros, make_grid,
                      nodal_profile, sample)

grid = make_grid(1000)

print("zeros of sin(3 pi t):")
u = sample(lambda t: np.sin(3 * np.pi * t), grid)
for z in find_zeros(u):
    rec = classify_zero(u, z)
    print(f"  t* = {z:.8f}   kind = {rec.kind}   "
          f"(u', u'', u''') = ({rec.derivs[0]:+.3e}, {rec.derivs[1]:+.3e}, "
          f"{rec.derivs[2]:+.3e})")

print()
print("contrived contact zeros at t = 0.5:")
quartic = sample(lambda t: (t * (1 - t)) ** 2 * (t - 0.5) ** 4, grid)
cubic = sample(lambda t: (t * (1 - t)) ** 2 * (t - 0.5) ** 3, grid)
print("  (t(1-t))^2 (t-1/2)^4 ->", classify_zero(quartic, 0.5).kind,
      " (u = u' = u'' = u''' = 0)")
print("  (t(1-t))^2 (t-1/2)^3 ->", classify_zero(cubic, 0.5).kind,
      " (u''' = 0.375 survives)")

print()
print("profiles of eigenfunctions (weight = 1):")
res = eigen_pencil(sample(lambda t: np.ones_like(t), grid), 5, 0)
for p in res.positive:
    profile = nodal_profile(p.phi)
    print(f"  k={p.k}: {profile.count} interior zeros, sign near 0 "
          f"{'+' if profile.sigma > 0 else '-'}, all simple: {profile.is_nodal}")
