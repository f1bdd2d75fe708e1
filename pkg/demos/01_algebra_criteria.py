"""
When is W^m X an algebra on a power-cusp domain?
=================================================

Domains with isoperimetric profile I(s) = s^alpha, walked through with the
exact deciders and the numeric trend checkers side by side.
"""

import numpy as np

from ri_sobolev import IsoperimetricProfile
from ri_sobolev.criteria import (
    check_fundamental,
    check_psi_in_associate,
    decide_john,
    decide_lz_algebra,
    decide_orlicz_algebra,
)
from ri_sobolev.norms import Lebesgue, Orlicz, PowerLogYoung

# John domains first: the classical rule pm > n (or m >= n for p = 1)
print("John domains, X = L^p, n = 3")
print("  m   p=1    p=2    p=4")
for m in range(1, 5):
    row = [decide_john(m, 3, Lebesgue(p)).outcome for p in (1, 2, 4)]
    print(f"  {m}   " + "  ".join(f"{r:5s}" for r in row))

# On a cusp the exponent alpha replaces 1/n'.  The threshold is m(1-alpha) vs 1/p.
print("\nLorentz-Zygmund L^{2,2;beta}, alpha = 1/2, m = 1 (the borderline m(1-alpha) = 1/p)")
for beta in (0.0, 0.5, 0.51, 1.0):
    v = decide_lz_algebra(1, 0.5, 2, 2, beta)
    print(f"  beta = {beta:4}: {v.outcome:5s}  governing condition: {v.notes[0]}")

# Orlicz: the log power has to beat the borderline too
print("\nOrlicz A(t) = t^2 log^lam(e+t), alpha = 1/2, m = 1")
for lam in (0, 1, 2):
    print(f"  lam = {lam}: {decide_orlicz_algebra(1, 0.5, PowerLogYoung(2, lam)).outcome}")

# The trend checker sees the same thing without the closed form.
# It never claims Holds/Fails: finiteness of a sup is not decidable by sampling.
print("\nNumeric trend of ||psi||_{X'} on (delta, 1), X = L^p")
for alpha in (0.6, 0.75, 0.9):
    I = IsoperimetricProfile.power(alpha)
    for m, p in ((2, 2.0), (2, 4.0)):
        v = check_psi_in_associate(I, m, Lebesgue(p))
        exact = decide_lz_algebra(m, alpha, p, p, 0)
        grid = np.asarray(v.grid)
        print(f"  alpha={alpha:4} m={m} p={p}: {v.trend:9s} exact={exact.outcome:5s} "
              f"windows {grid[0]:.3g} .. {grid[-1]:.3g}")

# Fundamental estimate without the algebra condition:
# X = L^p with 1/p = m(1-alpha) sits exactly at the edge
print("\nFundamental estimate holds, psi still diverges")
for alpha, m in ((0.6, 2), (0.75, 2), (0.75, 3)):
    I = IsoperimetricProfile.power(alpha)
    X = Lebesgue(1 / (m * (1 - alpha)))
    f = check_fundamental(I, m, X)
    v = check_psi_in_associate(I, m, X)
    print(f"  alpha={alpha} m={m} {X.label():8s} fundamental {f.outcome} (C={f.witness:.3g}), "
          f"psi {v.trend}, log-log slope {v.slope:.3f}")
