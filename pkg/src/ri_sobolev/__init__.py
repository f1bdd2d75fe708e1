"""Rearrangement-invariant Sobolev algebras on domains with irregular boundary.

Exact step-function rearrangements, Lorentz-Zygmund and Orlicz norms,
isoperimetric profiles with their domains of revolution, the weighted
Hardy operators they induce, and decision procedures for when the
corresponding m-th order Sobolev space is closed under multiplication.
"""

__version__ = "0.1.0"

from .verdict import FAILS, HOLDS, TREND, Verdict
from .rearrangement import (
    PiecewiseConstantFunction,
    decreasing_rearrangement,
    hl_pairing,
    integral_of_rearrangement,
    level_mean,
)
from .norms import (
    Lebesgue,
    Lorentz,
    LorentzZygmund,
    Orlicz,
    PowerLogYoung,
    associate_spec,
    eval_norm,
    fundamental_function,
    parse_norm,
)
from .isoperimetry import (
    IsoperimetricProfile,
    build_domain_profile,
    profile_from_dict,
    smooth_profile,
)
from .hardy import HardyContext, apply_H, apply_Hk, pointwise_bound_check
from .criteria import (
    check_fundamental,
    check_power_mk,
    check_psi_in_associate,
    decide_john,
    decide_lz_algebra,
    decide_lz_reduced,
    decide_orlicz_algebra,
    decide_orlicz_reduced,
)
