"""Decision procedures for the algebra and reduced-algebra conditions.

Two kinds of procedures live here.

Exact deciders work with the parameters alone (exponents compared as
rationals) and return ``Holds`` / ``Fails`` on the ``closed-form`` path.

Trend checkers evaluate the underlying quantity on nested windows
(delta_j, 1), delta_j = 10^-j, for the reported diagnostics, and decide
the trend from the integrand of the functional per unit log s, fitted near
0 as

    w(s) = c s^kappa log^(-nu)(2/s)  (times slowly varying corrections),

on s in [1e-118, 1e-8].  An integral of w ds/s is finite when kappa > 0,
or kappa = 0 and nu > 1; a sup of w is finite when kappa > 0, or
kappa = 0 and nu >= 0.  Powers with |kappa| <= 1e-3 are treated as
kappa = 0, and ties in nu are reported as ``undecided``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .isoperimetry import IsoperimetricProfile, Power
from .norms import (
    INF,
    ConjugateYoung,
    LorentzZygmund,
    Orlicz,
    PowerLogYoung,
    RiNormSpec,
    TabulatedYoung,
    YoungFunction,
    associate_spec,
    eval_norm,
    functional_density,
    fundamental_function,
    lz_admissible,
    window_contributions,
)
from .rearrangement import (
    PiecewiseConstantFunction,
    integral_of_rearrangement,
    random_step_function,
)
from .verdict import FAILS, HOLDS, TREND, Verdict, jsonable

__all__ = [
    "decide_john",
    "decide_lz_algebra",
    "decide_orlicz_algebra",
    "decide_lz_reduced",
    "decide_orlicz_reduced",
    "decide_lz_fundamental",
    "decide_orlicz_fundamental",
    "TrendFit",
    "classify_windows",
    "classify_density",
    "fit_power_log",
    "check_psi_in_associate",
    "check_power_mk",
    "check_fundamental",
    "psi_displayed_function",
    "WeightBoundReport",
    "random_probe",
    "check_weight_bound",
    "WORST_CASE_NOTE",
    "LZTuple",
    "random_lz_tuples",
]

WORST_CASE_NOTE = (
    "necessity is witnessed by the worst-case domain of revolution for the profile"
)

STANDARD_WINDOWS = tuple(range(2, 9))


def _rat(x) -> Fraction | float:
    """Exact rational for x when x is within 1e-12 of a fraction with denominator <= 10^6."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        return x
    fr = Fraction(x).limit_denominator(10**6)
    return fr if abs(float(fr) - x) <= 1e-12 * max(1.0, abs(x)) else Fraction(x)


def _inv_rat(p) -> Fraction:
    return Fraction(0) if p == INF else 1 / _rat(p)


def _require_lz(p, q, beta):
    if not lz_admissible(p, q, beta):
        raise ValueError(f"inadmissible Lorentz-Zygmund parameters (p, q, beta) = ({p}, {q}, {beta})")


def _check_m(m: int):
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")


# ---------------------------------------------------------------------------
# Exact deciders
# ---------------------------------------------------------------------------


def decide_lz_algebra(m: int, alpha, p, q, beta) -> Verdict:
    """Algebra property of V^m L^{p,q;beta} on domains with profile s^alpha."""
    _check_m(m)
    _require_lz(p, q, beta)
    a = _rat(alpha)
    if a >= 1:
        return Verdict(FAILS, "closed-form", None,
                       notes=("alpha >= 1: the integral of 1/I diverges at 0", WORST_CASE_NOTE))
    e = m * (1 - a) - _inv_rat(p)
    b = _rat(beta)
    if e > 0:
        holds, row = True, "m(1-alpha) > 1/p"
    elif e < 0:
        holds, row = False, "m(1-alpha) < 1/p"
    elif q == 1:
        holds, row = b >= 0, "m(1-alpha) = 1/p, q = 1, beta >= 0"
    else:
        holds, row = b > 1 - _inv_rat(q), "m(1-alpha) = 1/p, q > 1, beta > 1/q'"
    notes = (row,) if holds else (row, WORST_CASE_NOTE)
    return Verdict(HOLDS if holds else FAILS, "closed-form", e, notes=notes)


def _young_tail(A: YoungFunction) -> tuple[float, float]:
    """Exponent and log exponent of A at infinity."""
    if isinstance(A, PowerLogYoung):
        return A.p, A.lam
    if isinstance(A, TabulatedYoung):
        return A.growth, 0.0
    if isinstance(A, ConjugateYoung):
        return A.growth, A.log_growth
    raise TypeError("unsupported Young function")


def decide_orlicz_algebra(m: int, alpha, A: YoungFunction) -> Verdict:
    """Algebra property of V^m L^A on domains with profile s^alpha."""
    _check_m(m)
    a = _rat(alpha)
    if a >= 1:
        return Verdict(FAILS, "closed-form", None,
                       notes=("alpha >= 1: the integral of 1/I diverges at 0", WORST_CASE_NOTE))
    mm = m * (1 - a)
    if mm >= 1:
        return Verdict(HOLDS, "closed-form", mm, notes=("m >= 1/(1-alpha)",))
    r = mm / (1 - mm)
    p, lam = _young_tail(A)
    if p == INF:
        return Verdict(HOLDS, "numeric", float(r),
                       notes=("A grows faster than every power",))
    # integral at infinity of (t/A(t))^r ~ t^{(1-p) r} log^{-lam r}(t)
    expo = (1 - _rat(p)) * r
    path = "closed-form" if isinstance(A, PowerLogYoung) else "numeric"
    if expo < -1:
        holds = True
    elif expo > -1:
        holds = False
    else:
        holds = _rat(lam) * r > 1
    note = f"tail integral of (t/A)^r with r = {float(r):.6g}"
    notes = (note,) if holds else (note, WORST_CASE_NOTE)
    return Verdict(HOLDS if holds else FAILS, path, float(r), notes=notes)


def decide_lz_fundamental(j: int, alpha, p, q, beta) -> Verdict:
    """sup_t (integral_0^t ds/s^alpha)^j / phi_X(t) < inf for X = L^{p,q;beta}."""
    _require_lz(p, q, beta)
    a = _rat(alpha)
    if a >= 1:
        return Verdict(FAILS, "closed-form", None,
                       notes=("alpha >= 1: the integral of 1/I diverges at 0", WORST_CASE_NOTE))
    e = j * (1 - a) - _inv_rat(p)
    if p == INF:
        # phi_X is a power of log(2/t) with a nonpositive exponent
        holds = True
    elif e != 0:
        holds = e > 0
    else:
        holds = _rat(beta) >= 0
    notes = () if holds else (WORST_CASE_NOTE,)
    return Verdict(HOLDS if holds else FAILS, "closed-form", e, notes=notes)


def decide_lz_reduced(m: int, k: int, alpha, p, q, beta) -> Verdict:
    """Reduced algebra property (order m + k products) for L^{p,q;beta}."""
    _check_m(m)
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    return decide_lz_fundamental(m + k, alpha, p, q, beta)


def decide_orlicz_fundamental(j: int, alpha, A: YoungFunction) -> Verdict:
    a = _rat(alpha)
    if a >= 1:
        return Verdict(FAILS, "closed-form", None,
                       notes=("alpha >= 1: the integral of 1/I diverges at 0", WORST_CASE_NOTE))
    mm = j * (1 - a)
    if mm >= 1:
        return Verdict(HOLDS, "closed-form", mm, notes=("(1-alpha) j >= 1",))
    s = 1 / mm
    p, lam = _young_tail(A)
    pr = _rat(p)
    holds = pr > s or (pr == s and _rat(lam) >= 0)
    path = "closed-form" if isinstance(A, PowerLogYoung) else "numeric"
    notes = (f"A(t) compared with t^{float(s):.6g}",)
    if not holds:
        notes += (WORST_CASE_NOTE,)
    return Verdict(HOLDS if holds else FAILS, path, float(s), notes=notes)


def decide_orlicz_reduced(m: int, k: int, alpha, A: YoungFunction) -> Verdict:
    _check_m(m)
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    return decide_orlicz_fundamental(m + k, alpha, A)


def decide_john(m: int, n: int, norm: RiNormSpec) -> Verdict:
    """Algebra property of V^m X on John domains in R^n (profile s^{1/n'})."""
    _check_m(m)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if m >= n:
        return Verdict(HOLDS, "closed-form", None,
                       notes=("m >= n: r^(m/n - 1) is bounded",))
    alpha = Fraction(n - 1, n)
    if isinstance(norm, LorentzZygmund):
        if norm.down_star:
            raise ValueError("down-star spaces are not supported by the decider")
        return decide_lz_algebra(m, alpha, norm.p, norm.q, norm.beta)
    if isinstance(norm, Orlicz):
        return decide_orlicz_algebra(m, alpha, norm.A)
    raise TypeError("unsupported norm spec")


# ---------------------------------------------------------------------------
# Trend classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrendFit:
    trend: str
    kappa: float | None
    nu: float | None
    values: tuple
    cauchy_1pct: bool
    loglog_slope: float | None


def _loglog_slope(values: np.ndarray, deltas: np.ndarray) -> float | None:
    """Slope of log(value) against log log(2/delta) over the last three standard windows."""
    v = values[-3:]
    if v.size < 3 or np.any(~np.isfinite(v)) or np.any(v <= 0):
        return None
    x = np.log(np.log(2.0 / deltas[-3:]))
    return float(np.polyfit(x, np.log(v), 1)[0])


def fit_power_log(s: np.ndarray, w: np.ndarray, kappa: float | None = None
                  ) -> tuple[float, float] | None:
    """Least-squares fit of log w = c + kappa log s - nu log L + g1/L + g2 log(L)/L, L = log(2/s).

    The g terms absorb the leading corrections that integrated log weights
    and inverted Young functions carry.  With ``kappa`` given, only the
    remaining coefficients are fitted.  Returns (kappa, nu), or None
    without enough positive data.
    """
    ok = np.isfinite(w) & (w > 0)
    if ok.sum() < 6:
        return None
    ell = np.log(2.0 / s[ok])
    y = np.log(w[ok])
    cols = [np.ones(ok.sum()), -np.log(ell), 1.0 / ell, np.log(ell) / ell]
    if kappa is None:
        cols.insert(1, np.log(s[ok]))
    else:
        y = y - kappa * np.log(s[ok])
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)
    if kappa is None:
        return float(coef[1]), float(coef[2])
    return float(kappa), float(coef[1])


def classify_density(kind: str, s: np.ndarray, w: np.ndarray,
                     kappa_band: float = 1e-3, nu_tol: float = 0.02
                     ) -> tuple[str, float | None, float | None]:
    """Decide finiteness near 0 of an integral ("sum", "modular") or sup ("sup") of w.

    With w ~ s^kappa log^(-nu)(2/s): the integral of w ds/s is finite iff
    kappa > 0, or kappa = 0 and nu > 1; the sup of w is finite iff
    kappa > 0, or kappa = 0 and nu >= 0.  Over the sampled range a power
    with |kappa| <= kappa_band cannot be told apart from log corrections,
    so inside the band kappa is set to 0 and nu refitted.
    """
    if np.any(np.isinf(w)):
        return "diverges", None, None
    if np.all(w[np.isfinite(w)] == 0):
        return "converges", None, None
    fit = fit_power_log(s, w)
    if fit is None:
        return "undecided", None, None
    kappa, nu = fit
    if kappa > kappa_band:
        return "converges", kappa, nu
    if kappa < -kappa_band:
        return "diverges", kappa, nu
    kappa, nu = fit_power_log(s, w, kappa=0.0)
    edge = 0.0 if kind == "sup" else 1.0
    if kind == "sup":
        if nu >= edge - nu_tol:
            return "converges", kappa, nu
        return "diverges", kappa, nu
    if nu > edge + nu_tol:
        return "converges", kappa, nu
    if nu < edge - nu_tol:
        return "diverges", kappa, nu
    return "undecided", kappa, nu


def classify_windows(kind: str, s: np.ndarray, w: np.ndarray, values: np.ndarray,
                     deltas: np.ndarray, **tol) -> TrendFit:
    """Combine the density classification with the window diagnostics.

    ``values[j]`` is the functional restricted to (deltas[j], 1); the
    Cauchy flag and the log-log slope are read off the standard windows
    j = 2..8.
    """
    deltas = np.asarray(deltas, dtype=float)
    std = np.isin(np.round(-np.log10(deltas)).astype(int), STANDARD_WINDOWS)
    std_vals = values[std]
    cauchy = bool(std_vals.size >= 3 and np.all(np.isfinite(std_vals[-3:])) and np.all(
        np.abs(np.diff(std_vals[-3:])) <= 0.01 * np.abs(std_vals[-1])))
    slope = _loglog_slope(std_vals, deltas[std])
    trend, kappa, nu = classify_density(kind, s, w, **tol)
    return TrendFit(trend, kappa, nu, tuple(float(v) for v in std_vals), cauchy, slope)


def _windows(decades: int = 16) -> np.ndarray:
    return 10.0 ** -np.arange(1, decades + 1, dtype=float)


def _psi_edges(decades: int = 17, per_decade: int = 10, deep_decades: int = 120,
               deep_per_decade: int = 4) -> np.ndarray:
    """Cell edges for the displayed function: fine down to 10^-decades, coarser below."""
    deep = np.geomspace(10.0**-deep_decades, 10.0**-decades,
                        (deep_decades - decades) * deep_per_decade + 1)
    fine = np.geomspace(10.0**-decades, 1.0, decades * per_decade + 1)
    return np.concatenate((deep[:-1], fine))


def _fit_points(lo: float = 1e-118, hi: float = 1e-8) -> np.ndarray:
    """Geometric cell midpoints of the displayed function's grid inside [lo, hi]."""
    e = _psi_edges()
    mids = np.sqrt(e[:-1] * e[1:])
    return mids[(mids >= lo) & (mids <= hi)]


def _trend_verdict(fit: TrendFit, grid_note: str, extra: tuple = ()) -> Verdict:
    return Verdict(TREND, "numeric", {"kappa": fit.kappa, "nu": fit.nu,
                                      "cauchy_1pct": fit.cauchy_1pct},
                   grid=fit.values, trend=fit.trend, slope=fit.loglog_slope,
                   notes=(grid_note,) + extra)


# ---------------------------------------------------------------------------
# Trend checkers
# ---------------------------------------------------------------------------


def _profile_L_finite(I: IsoperimetricProfile) -> bool:
    return math.isfinite(I.L)


def psi_displayed_function(I: IsoperimetricProfile, m: int) -> PiecewiseConstantFunction:
    """Step version of (1/I(t)) (integral_0^t ds/I)^(m-1) on a geometric grid.

    Cells are 10 per decade down to 1e-17 and 4 per decade down to 1e-120.
    Each cell carries the value at its geometric midpoint; the cell at 0
    repeats the first value.
    """
    edges = _psi_edges()
    mids = np.sqrt(edges[:-1] * edges[1:])
    with np.errstate(over="ignore"):
        vals = np.asarray(I.head_integral(mids), dtype=float) ** (m - 1) / I(mids)
    bp = np.concatenate(([0.0], edges))
    return PiecewiseConstantFunction(bp, np.concatenate(([vals[0]], vals)))


def _delegate(I: IsoperimetricProfile, norm: RiNormSpec, lz, orl) -> Verdict | None:
    if not isinstance(I.form, Power):
        return None
    if isinstance(norm, LorentzZygmund) and not norm.down_star:
        return lz(I.form.alpha, norm.p, norm.q, norm.beta)
    if isinstance(norm, Orlicz):
        return orl(I.form.alpha, norm.A)
    return None


def check_psi_in_associate(I: IsoperimetricProfile, m: int, norm: RiNormSpec,
                           closed_form: bool = False, **tol) -> Verdict:
    """Finiteness of the X' norm of (1/I(t)) (integral_0^t ds/I)^(m-1)."""
    _check_m(m)
    if closed_form:
        v = _delegate(I, norm, lambda a, p, q, b: decide_lz_algebra(m, a, p, q, b),
                      lambda a, A: decide_orlicz_algebra(m, a, A))
        if v is not None:
            return v
    if not _profile_L_finite(I):
        return Verdict(TREND, "numeric", None, trend="diverges",
                       notes=("the integral of 1/I diverges at 0, so the condition fails for every norm",))
    assoc = associate_spec(norm)
    h = psi_displayed_function(I, m)
    deltas = _windows()
    # values[j] is the functional restricted to (deltas[j], 1)
    wc = window_contributions(assoc.spec, h, deltas)
    s = _fit_points()
    kind, w = functional_density(assoc.spec, h, s)
    fit = classify_windows(kind, s, w, wc.values(), deltas, **tol)
    extra = () if assoc.exact else (f"associate norm: {assoc.note}",)
    return _trend_verdict(fit, f"windows (1e-j, 1), j = 1..{deltas.size}", extra)


def _ratio_samples(I: IsoperimetricProfile, j: int, norm: RiNormSpec,
                   per_decade: int = 10, fit_depth: int = 120, fit_per_decade: int = 4):
    """Ratio (integral_0^t ds/I)^j / phi_X(t) on the standard windows and on a deep fit grid.

    The ratio is a smooth function of t, so the fit grid reaches far below
    the step resolution used for the associate check; samples where phi_X
    leaves the double range are dropped.
    """
    deltas = _windows()
    t = np.geomspace(deltas[-1], 1.0, deltas.size * per_decade + 1)

    # Lorentz-Zygmund norms integrate phi^q internally; keep that in range too
    q = getattr(norm, "q", 1.0)
    q = q if math.isfinite(q) else 1.0

    def ratio(x):
        phi = np.array([fundamental_function(norm, float(v)) for v in x])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            r = np.asarray(I.head_integral(x), dtype=float) ** j / phi
            ok = np.log10(np.where(phi > 0, phi, 1e-320)) * max(q, 1.0) > -280.0
        return np.where(ok, r, np.nan)

    r = ratio(t)
    run = np.array([np.nanmax(r[t >= d]) for d in deltas])
    # stay clear of the pre-asymptotic range where sup-type weights still peak
    tf = np.geomspace(10.0**-fit_depth, 1e-8, (fit_depth - 8) * fit_per_decade + 1)
    rf = ratio(tf)
    keep = np.isfinite(rf)
    return deltas, r, run, tf[keep], rf[keep]


def _sup_check(I: IsoperimetricProfile, j: int, norm: RiNormSpec, label: str, **tol) -> Verdict:
    if not _profile_L_finite(I):
        return Verdict(FAILS, "numeric", INF,
                       notes=("the integral of 1/I diverges at 0, so the ratio is infinite",
                              WORST_CASE_NOTE))
    deltas, r, run, tf, rf = _ratio_samples(I, j, norm)
    fit = classify_windows("sup", tf, rf, run, deltas, **tol)
    grid = fit.values
    if fit.trend == "converges":
        return Verdict(HOLDS, "numeric", float(np.nanmax(r)), grid=grid, trend="converges",
                       notes=(f"{label}: bounded near 0 (kappa = {fit.kappa}, nu = {fit.nu})",))
    if fit.trend == "diverges":
        return Verdict(FAILS, "numeric", {"kappa": fit.kappa, "nu": fit.nu}, grid=grid,
                       trend="diverges", slope=fit.loglog_slope,
                       notes=(f"{label}: unbounded near 0", WORST_CASE_NOTE))
    return _trend_verdict(fit, f"{label}: undecided trend")


def check_fundamental(I: IsoperimetricProfile, m: int, norm: RiNormSpec,
                      closed_form: bool = False, **tol) -> Verdict:
    """sup_t (integral_0^t ds/I)^m / phi_X(t) < inf; the witness is the sup."""
    _check_m(m)
    if closed_form:
        v = _delegate(I, norm, lambda a, p, q, b: decide_lz_fundamental(m, a, p, q, b),
                      lambda a, A: decide_orlicz_fundamental(m, a, A))
        if v is not None:
            return v
    return _sup_check(I, m, norm, "psi/phi_X", **tol)


def check_power_mk(I: IsoperimetricProfile, m: int, k: int, norm: RiNormSpec,
                   closed_form: bool = False, **tol) -> Verdict:
    """sup_t (integral_0^t ds/I)^(m+k) / phi_X(t) < inf."""
    _check_m(m)
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    if closed_form:
        v = _delegate(I, norm, lambda a, p, q, b: decide_lz_reduced(m, k, a, p, q, b),
                      lambda a, A: decide_orlicz_reduced(m, k, a, A))
        if v is not None:
            return v
    return _sup_check(I, m + k, norm, "power (m+k) ratio", **tol)


# ---------------------------------------------------------------------------
# Weight bound sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightBoundReport:
    """Result of sampling sup_t g**(t) psi(t) <= C ||g||_X."""

    constant: float
    fundamental_constant: float
    holder_constant: float
    product_constant: float
    trials: int
    worst_ratio: float
    holds: bool

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def random_probe(rng: np.random.Generator, max_pieces: int = 12) -> PiecewiseConstantFunction:
    """Random step function; half of the draws concentrate mass near 0 on a geometric grid."""
    if rng.uniform() < 0.5:
        return random_step_function(rng, max_pieces=max_pieces)
    k = int(rng.integers(2, max_pieces + 1))
    cuts = np.sort(10.0 ** -rng.uniform(0.5, 14.0, size=k - 1))
    bp = np.unique(np.concatenate(([0.0], cuts, [1.0])))
    widths = np.diff(bp)
    # heights roughly width^-a, so some pieces carry most of the norm
    vals = widths ** -rng.uniform(0.0, 0.9) * rng.exponential(1.0, size=widths.size)
    return PiecewiseConstantFunction(bp, vals)


def check_weight_bound(I: IsoperimetricProfile, m: int, norm: RiNormSpec,
                       rng: np.random.Generator, trials: int = 1000) -> WeightBoundReport:
    """Sample sup_t g**(t) psi(t) <= C ||g||_X where the fundamental estimate holds.

    C = C_f C_H sup_t phi_X(t) phi_Y(t) / t, with C_f the fundamental
    constant, Y the closed-form associate and C_H its Holder constant; this
    follows psi <= C_f phi_X and int_0^t g* <= C_H ||g||_X phi_Y(t).  The
    sup over t runs over the grid on which C_f was measured.
    """
    v = check_fundamental(I, m, norm)
    if not v.holds:
        raise ValueError("the fundamental estimate does not hold; there is no constant to test")
    assoc = associate_spec(norm)
    if assoc.holder_constant is None:
        raise ValueError(f"no Holder constant known for the associate of {norm.label()}")
    cf = float(v.witness)
    t = np.geomspace(1e-16, 1.0, 161)
    phi = np.array([fundamental_function(norm, float(x)) for x in t])
    phi_y = np.array([fundamental_function(assoc.spec, float(x)) for x in t])
    prod = float(np.max(phi * phi_y / t))
    C = cf * assoc.holder_constant * prod
    psi = np.asarray(I.head_integral(t), dtype=float) ** m
    worst = 0.0
    for _ in range(trials):
        g = random_probe(rng)
        lhs = float(np.max(integral_of_rearrangement(g, t) / t * psi))
        rhs = C * eval_norm(norm, g)
        worst = max(worst, lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else INF))
    return WeightBoundReport(C, cf, float(assoc.holder_constant), prod, trials, worst,
                             worst <= 1.0 + 1e-9)


# ---------------------------------------------------------------------------
# Parameter sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LZTuple:
    m: int
    alpha: float
    p: float
    q: float
    beta: float

    def norm(self) -> LorentzZygmund:
        return LorentzZygmund(self.p, self.q, self.beta)

    def as_row(self) -> dict:
        return {"m": self.m, "alpha": self.alpha, "p": self.p, "q": self.q, "beta": self.beta}


def random_lz_tuples(rng: np.random.Generator, count: int, m_max: int = 4,
                     alpha_range: tuple[float, float] = (0.5, 0.95),
                     boundary_fraction: float = 0.25) -> list[LZTuple]:
    """Random admissible (m, alpha, p, q, beta).

    A fraction of the tuples sits exactly on m(1-alpha) = 1/p, with alpha a
    multiple of 1/100 so that the equality is exact in rational arithmetic;
    there beta is kept at least 0.1 away from the threshold of its row.
    """
    out: list[LZTuple] = []
    while len(out) < count:
        m = int(rng.integers(1, m_max + 1))
        u = rng.uniform()
        if u < boundary_fraction:
            alpha = round(float(rng.uniform(*alpha_range)), 2)
            mm = m * (1 - alpha)
            if not 0 < mm <= 1:
                continue
            p = 1.0 / mm
            if p == 1:
                q, beta = 1.0, float(rng.uniform(0, 2))
            else:
                r = rng.uniform()
                q = 1.0 if r < 0.3 else (INF if r < 0.45 else float(rng.uniform(1.1, 8)))
                thr = 0.0 if q == 1 else 1.0 - (0.0 if q == INF else 1.0 / q)
                beta = float(rng.uniform(-2, 2.5))
                if abs(beta - thr) < 0.1:
                    continue
        else:
            alpha = float(rng.uniform(*alpha_range))
            r = rng.uniform()
            if r < 0.15:
                p, q, beta = 1.0, 1.0, float(rng.uniform(0, 2))
            elif r < 0.25:
                p = INF
                if rng.uniform() < 0.5:
                    q, beta = INF, float(rng.uniform(-2, 0))
                else:
                    q = float(rng.uniform(1, 6))
                    beta = -1.0 / q - float(rng.uniform(0.05, 2))
            else:
                p = float(rng.uniform(1.05, 8))
                r2 = rng.uniform()
                q = 1.0 if r2 < 0.25 else (INF if r2 < 0.4 else float(rng.uniform(1, 8)))
                beta = float(rng.uniform(-2, 2))
        if lz_admissible(p, q, beta):
            out.append(LZTuple(m, alpha, p, q, beta))
    return out
