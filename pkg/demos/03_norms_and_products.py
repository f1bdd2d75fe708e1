"""
Norms, associates and products of Hardy images
==============================================

Everything is computed on non-increasing step functions, exactly where
possible.
"""

import numpy as np

from ri_sobolev import HardyContext, IsoperimetricProfile
from ri_sobolev.extremal import verify_two_hardys
from ri_sobolev.norms import (
    Lebesgue,
    Lorentz,
    LorentzZygmund,
    Orlicz,
    PowerLogYoung,
    associate_norm_numeric,
    eval_norm,
    fundamental_function,
)
from ri_sobolev.rearrangement import PiecewiseConstantFunction, decreasing_rearrangement, indicator

f = PiecewiseConstantFunction([0, 0.1, 0.35, 1], [1.0, 7.0, 2.0])
print("f* values", decreasing_rearrangement(f).values, "on", decreasing_rearrangement(f).breakpoints)

specs = [Lebesgue(1), Lebesgue(2), Lorentz(2, 1), LorentzZygmund(2, 2, 1.0),
         LorentzZygmund(float("inf"), float("inf"), -1), Orlicz(PowerLogYoung(2, 1))]
names = ["L^1", "L^2", "L^{2,1}", "L^{2,2;1}", "L^{inf,inf;-1}", "L^2 log L"]
for name, X in zip(names, specs):
    print(f"  ||f|| in {name:15s} = {eval_norm(X, f):.6f}")

# phi_X(t) phi_X'(t) = t, with the associate norm computed by its sup definition
print("\nphi_X(t) * phi_X'(t) / t")
for name, X in (("L^{2,1}", Lorentz(2, 1)), ("L^{2,2;1}", LorentzZygmund(2, 2, 1.0)),
                ("L^2 log L", Orlicz(PowerLogYoung(2, 1)))):
    ratios = [fundamental_function(X, t) * associate_norm_numeric(X, indicator(0, t)).value / t
              for t in (1e-4, 1e-2, 0.5)]
    print(f"  {name:10s}", np.round(ratios, 6))

# The product H^k f * H^(m-k) g stays controlled exactly when the algebra criterion holds
print("\n||H f . H g|| / (||f|| ||g||), m = 2, X = L^2")
for alpha in (0.5, 0.75, 0.9):
    ctx = HardyContext(IsoperimetricProfile.power(alpha), 2)
    rep = verify_two_hardys(ctx, 1, Lebesgue(2), trials=20, rng=np.random.default_rng(1))
    ratios = ", ".join(f"{r:.3g}" for r in rep.adversarial_ratios)
    print(f"  alpha={alpha}: fundamental {rep.fundamental:5s} {rep.trend:8s} [{ratios}]")
