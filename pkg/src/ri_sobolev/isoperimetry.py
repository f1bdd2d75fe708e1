"""Isoperimetric profiles, their smoothing, and the worst-case domain of revolution.

A profile I is a positive non-decreasing function on (0, 1).  Four forms
are available:

* ``Power(alpha)``:          I(t) = t^alpha
* ``PowerLog(alpha, lam)``:  I(t) = t^alpha log^lam(e/t)
* ``TabulatedMonotone``:     log-log linear interpolation of knot values,
  continued as a power below the first knot and as a constant above the
  last one.
* ``TabulatedConvex``:       linear interpolation of I^{n'} at the knots, the
  output of ``smooth_profile``.

The domain of revolution Omega_I = {(x', x_n): 0 < x_n < L, |x'| < eta(x_n)}
is described in measure coordinates by the decreasing map M, with
M(x_n) = |{x in Omega_I : x_n' > x_n}|.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate, optimize, special

from .verdict import FAILS, HOLDS, Verdict

__all__ = [
    "Power",
    "PowerLog",
    "TabulatedMonotone",
    "TabulatedConvex",
    "IsoperimetricProfile",
    "profile_from_dict",
    "psi",
    "smooth_profile",
    "smoothing_report",
    "DomainProfile",
    "build_domain_profile",
    "maz_ya_class_check",
    "unit_ball_volume",
]

INF = math.inf


def unit_ball_volume(d: int) -> float:
    """Volume of the d-dimensional unit ball."""
    return math.pi ** (d / 2.0) / special.gamma(d / 2.0 + 1.0)


# ---------------------------------------------------------------------------
# Profile forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Power:
    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError("power exponent must be finite and nonnegative")

    def value(self, t):
        return np.asarray(t, dtype=float) ** self.alpha

    def tail(self, t):
        """G(t) = integral of 1/I over (t, 1)."""
        t = np.asarray(t, dtype=float)
        a = 1.0 - self.alpha
        lt = np.log(t)
        if a == 0:
            return -lt
        return -np.expm1(a * lt) / a

    def head(self, t):
        """Phi(t) = integral of 1/I over (0, t)."""
        t = np.asarray(t, dtype=float)
        a = 1.0 - self.alpha
        if a <= 0:
            return np.full_like(t, INF)
        return t**a / a

    @property
    def total(self) -> float:
        return 1.0 / (1.0 - self.alpha) if self.alpha < 1 else INF

    @property
    def exponent_at_zero(self) -> tuple[float, float]:
        return self.alpha, 0.0

    def to_dict(self) -> dict:
        return {"form": "power", "alpha": self.alpha}


@dataclass(frozen=True)
class PowerLog:
    """I(t) = t^alpha log^lam(e/t); non-decreasing requires lam <= alpha."""

    alpha: float
    lam: float

    def __post_init__(self):
        if not (self.alpha >= 0 and math.isfinite(self.alpha) and math.isfinite(self.lam)):
            raise ValueError("invalid power-log parameters")
        if self.lam > self.alpha:
            raise ValueError("t^alpha log^lam(e/t) is not non-decreasing when lam > alpha")

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return t**self.alpha * np.log(np.e / t) ** self.lam

    # In u = log(e/r) the density dr/I(r) becomes e^{(1-alpha)(1-u)} u^{-lam} du.
    def _du(self, u):
        return math.exp((1.0 - self.alpha) * (1.0 - u)) * u ** (-self.lam)

    def _tail_scalar(self, t: float) -> float:
        U = 1.0 - math.log(t)
        if U <= 1.0:
            return 0.0
        return integrate.quad(self._du, 1.0, U, epsabs=0, epsrel=1e-13, limit=400)[0]

    def _head_scalar(self, t: float) -> float:
        if not self.finite_total:
            return INF
        U = 1.0 - math.log(t)
        return integrate.quad(self._du, U, INF, epsabs=0, epsrel=1e-13, limit=400)[0]

    def tail(self, t):
        return np.vectorize(self._tail_scalar, otypes=[float])(t)

    def head(self, t):
        return np.vectorize(self._head_scalar, otypes=[float])(t)

    @property
    def finite_total(self) -> bool:
        return self.alpha < 1 or (self.alpha == 1 and self.lam > 1)

    @property
    def total(self) -> float:
        return self._head_scalar(1.0) if self.finite_total else INF

    @property
    def exponent_at_zero(self) -> tuple[float, float]:
        return self.alpha, self.lam

    def to_dict(self) -> dict:
        return {"form": "powerlog", "alpha": self.alpha, "lambda": self.lam}


@dataclass(frozen=True, eq=False)
class TabulatedMonotone:
    """Knot table on (0, 1] with log-log linear interpolation."""

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.knots, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.size < 2 or t.size != v.size:
            raise ValueError("need at least two knots with matching values")
        if t[0] <= 0 or t[-1] > 1 or np.any(np.diff(t) <= 0):
            raise ValueError("knots must be strictly increasing in (0, 1]")
        if np.any(v <= 0) or np.any(np.diff(v) < 0):
            raise ValueError("profile values must be positive and non-decreasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "values", v)
        lt, lv = np.log(t), np.log(v)
        exps = np.diff(lv) / np.diff(lt)
        # segment j covers [knots[j], knots[j+1]]; below the first knot the
        # first exponent is continued, above the last knot I is constant.
        object.__setattr__(self, "_exps", exps)
        seg = self._seg_vec(np.arange(t.size - 1), t[:-1], t[1:])
        above = (1.0 - t[-1]) / v[-1]
        cum_tail = np.concatenate((np.cumsum(seg[::-1])[::-1], [0.0])) + above
        object.__setattr__(self, "_cum_tail", cum_tail)  # G at each knot

    def value(self, t):
        t = np.asarray(t, dtype=float)
        lt = np.log(np.minimum(t, self.knots[-1]))
        lk, lv = np.log(self.knots), np.log(self.values)
        inner = np.interp(lt, lk, lv)
        below = lv[0] + self._exps[0] * (lt - lk[0])
        return np.exp(np.where(t < self.knots[0], below, inner))

    def _seg_vec(self, j, x, y):
        """Integral of 1/I over (x, y) inside segment j (j <= 0 also covers below the first knot)."""
        j = np.maximum(j, 0)
        a = self._exps[j]
        c = self.knots[j] ** a / self.values[j]
        one = np.abs(1.0 - a) < 1e-14
        b = np.where(one, 1.0, 1.0 - a)
        with np.errstate(divide="ignore", invalid="ignore"):
            powr = (y**b - x**b) / b
            logr = np.log(y) - np.log(x)
        return c * np.where(one, logr, powr)

    def tail(self, t):
        t = np.asarray(t, dtype=float)
        k = self.knots
        j = np.clip(np.searchsorted(k, t, side="right") - 1, -1, k.size - 2)
        upper = k[np.clip(j + 1, 0, k.size - 1)]
        inner = self._seg_vec(j, np.minimum(t, upper), upper) + self._cum_tail[j + 1]
        above = (1.0 - t) / self.values[-1]
        out = np.where(t >= k[-1], above, inner)
        return out if out.ndim else float(out)

    @property
    def finite_total(self) -> bool:
        return self._exps[0] < 1

    def head(self, t):
        t = np.asarray(t, dtype=float)
        if not self.finite_total:
            return np.full_like(t, INF)
        k = self.knots
        a0 = self._exps[0]
        first = k[0] / self.values[0] / (1.0 - a0)  # integral over (0, k[0])
        seg = self._seg_vec(np.arange(k.size - 1), k[:-1], k[1:])
        cum = first + np.concatenate(([0.0], np.cumsum(seg)))  # Phi at each knot
        j = np.clip(np.searchsorted(k, t, side="right") - 1, 0, k.size - 2)
        small = first * (t / k[0]) ** (1.0 - a0)
        inner = cum[j] + self._seg_vec(j, k[j], np.minimum(t, k[j + 1]))
        above = cum[-1] + (t - k[-1]) / self.values[-1]
        out = np.where(t < k[0], small, np.where(t >= k[-1], above, inner))
        return out if out.ndim else float(out)

    @property
    def total(self) -> float:
        return float(self.head(1.0)) if self.finite_total else INF

    @property
    def exponent_at_zero(self) -> tuple[float, float]:
        return float(self._exps[0]), 0.0

    def to_dict(self) -> dict:
        return {"form": "tabulated", "knots": self.knots.tolist(), "values": self.values.tolist()}


def _pow_diff_ratio(x0, x1, c):
    """(x1^c - x0^c) / (c (x1 - x0)) for positive x0, x1, stable as x1 -> x0."""
    d = x1 - x0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = x0**c * np.expm1(c * np.log1p(d / x0)) / (c * d)
    return np.where(np.abs(d) <= 1e-14 * x0, x0 ** (c - 1.0), r)


@dataclass(frozen=True, eq=False)
class TabulatedConvex:
    """Knot table of I^{n'} with linear interpolation, so that I^{n'} stays convex.

    Below the first knot I^{n'}(t) = npower[0] (t / knots[0])^below_exponent;
    above the last knot I is constant.  This is the form produced by
    ``smooth_profile``; 1/I = (I^{n'})^(-1/n') integrates in closed form.
    """

    knots: np.ndarray
    npower: np.ndarray
    n_prime: float
    below_exponent: float

    def __post_init__(self):
        t = np.array(self.knots, dtype=float)
        F = np.array(self.npower, dtype=float)
        if t.size < 2 or t.size != F.size:
            raise ValueError("need at least two knots with matching values")
        if t[0] <= 0 or t[-1] > 1 or np.any(np.diff(t) <= 0):
            raise ValueError("knots must be strictly increasing in (0, 1]")
        if np.any(F <= 0) or np.any(np.diff(F) < 0):
            raise ValueError("profile values must be positive and non-decreasing")
        if not self.below_exponent > 0:
            raise ValueError("exponent below the first knot must be positive")
        t.setflags(write=False)
        F.setflags(write=False)
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "npower", F)
        object.__setattr__(self, "n_prime", float(self.n_prime))
        object.__setattr__(self, "below_exponent", float(self.below_exponent))
        seg = self._seg(np.arange(t.size - 1), t[:-1], t[1:])
        above = (1.0 - t[-1]) / F[-1] ** self._gamma
        object.__setattr__(self, "_cum_tail",
                           np.concatenate((np.cumsum(seg[::-1])[::-1], [0.0])) + above)
        object.__setattr__(self, "_cum_head", self._first + np.concatenate(([0.0], np.cumsum(seg))))

    @property
    def _gamma(self) -> float:
        return 1.0 / self.n_prime

    @property
    def _a0(self) -> float:
        """Exponent of I below the first knot."""
        return self.below_exponent * self._gamma

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.npower) / np.diff(self.knots)

    def _F(self, t):
        t = np.asarray(t, dtype=float)
        k, F = self.knots, self.npower
        inner = np.interp(np.minimum(t, k[-1]), k, F)
        below = F[0] * (np.minimum(t, k[0]) / k[0]) ** self.below_exponent
        return np.where(t < k[0], below, inner)

    def value(self, t):
        return self._F(t) ** self._gamma

    def _seg(self, j, x, y):
        """Integral of F^(-1/n') over (x, y) inside segment j."""
        F0 = self.npower[j] + self.slopes[j] * (x - self.knots[j])
        F1 = self.npower[j] + self.slopes[j] * (y - self.knots[j])
        return (y - x) * _pow_diff_ratio(F0, F1, 1.0 - self._gamma)

    def _below(self, x, y):
        """Integral of 1/I over (x, y) below the first knot."""
        a, k0 = self._a0, self.knots[0]
        c = k0**a / self.npower[0] ** self._gamma
        if abs(1.0 - a) < 1e-14:
            with np.errstate(divide="ignore"):
                return c * (np.log(y) - np.log(x))
        with np.errstate(divide="ignore"):
            return c * (y ** (1.0 - a) - x ** (1.0 - a)) / (1.0 - a)

    @property
    def _first(self) -> float:
        return float(self._below(0.0, self.knots[0])) if self.finite_total else INF

    @property
    def finite_total(self) -> bool:
        return self._a0 < 1

    def tail(self, t):
        t = np.asarray(t, dtype=float)
        k = self.knots
        j = np.clip(np.searchsorted(k, t, side="right") - 1, 0, k.size - 2)
        inner = self._seg(j, np.clip(t, k[j], k[j + 1]), k[j + 1]) + self._cum_tail[j + 1]
        low = self._below(np.minimum(t, k[0]), k[0]) + self._cum_tail[0]
        above = (1.0 - t) / self.npower[-1] ** self._gamma
        out = np.where(t < k[0], low, np.where(t >= k[-1], above, inner))
        return out if out.ndim else float(out)

    def head(self, t):
        t = np.asarray(t, dtype=float)
        if not self.finite_total:
            out = np.full_like(t, INF)
            return out if out.ndim else float(out)
        k = self.knots
        j = np.clip(np.searchsorted(k, t, side="right") - 1, 0, k.size - 2)
        inner = self._cum_head[j] + self._seg(j, k[j], np.clip(t, k[j], k[j + 1]))
        small = self._below(0.0, np.minimum(t, k[0]))
        above = self._cum_head[-1] + (t - k[-1]) / self.npower[-1] ** self._gamma
        out = np.where(t < k[0], small, np.where(t >= k[-1], above, inner))
        return out if out.ndim else float(out)

    @property
    def total(self) -> float:
        return float(self.head(1.0)) if self.finite_total else INF

    @property
    def exponent_at_zero(self) -> tuple[float, float]:
        return float(self._a0), 0.0

    def npower_convex(self, tol: float = 1e-9) -> bool:
        sl = self.slopes
        # derivative of the power piece at the first knot must not exceed the first slope
        left = self.below_exponent * self.npower[0] / self.knots[0]
        return bool(self.below_exponent >= 1 - tol
                    and left <= sl[0] * (1 + tol) + 1e-300
                    and np.all(np.diff(sl) >= -tol * np.abs(sl[1:]))
                    and self.knots[-1] == 1.0)

    def to_dict(self) -> dict:
        return {"form": "tabulated-convex", "knots": self.knots.tolist(),
                "npower": self.npower.tolist(), "n_prime": self.n_prime,
                "below_exponent": self.below_exponent}


ProfileForm = Union[Power, PowerLog, TabulatedMonotone, TabulatedConvex]


@dataclass(frozen=True)
class IsoperimetricProfile:
    """Profile I together with the ambient dimension n >= 2."""

    form: ProfileForm
    n: int = 2

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("dimension must be an integer >= 2")
        if isinstance(self.form, Power):
            lower = 1.0 - 1.0 / self.n
            if self.form.alpha < lower - 1e-12:
                raise ValueError(
                    f"Power({self.form.alpha}) is below the John exponent 1/n' = {lower:g} "
                    f"for n = {self.n}; no domain has such a profile"
                )

    @classmethod
    def power(cls, alpha: float, n: int = 2) -> "IsoperimetricProfile":
        return cls(Power(alpha), n)

    @classmethod
    def power_log(cls, alpha: float, lam: float, n: int = 2) -> "IsoperimetricProfile":
        return cls(PowerLog(alpha, lam), n)

    @classmethod
    def tabulated(cls, knots, values, n: int = 2) -> "IsoperimetricProfile":
        return cls(TabulatedMonotone(knots, values), n)

    @property
    def n_prime(self) -> float:
        return self.n / (self.n - 1.0)

    @property
    def alpha_below_one(self) -> bool:
        """Whether the exponent at 0 is < 1 (so that 1/I is integrable at 0)."""
        return self.form.exponent_at_zero[0] < 1

    def __call__(self, t):
        return self.form.value(t)

    def tail_integral(self, t):
        """G(t) = integral of dr / I(r) over (t, 1)."""
        return self.form.tail(t)

    def head_integral(self, t):
        """Phi(t) = integral of dr / I(r) over (0, t); inf when divergent."""
        return self.form.head(t)

    @property
    def L(self) -> float:
        return float(self.form.total)

    def to_dict(self) -> dict:
        d = self.form.to_dict()
        d["n"] = self.n
        return d


def profile_from_dict(d: dict) -> IsoperimetricProfile:
    form = d.get("form")
    n = int(d.get("n", 2))
    if form == "power":
        return IsoperimetricProfile(Power(float(d["alpha"])), n)
    if form == "powerlog":
        return IsoperimetricProfile(PowerLog(float(d["alpha"]), float(d["lambda"])), n)
    if form == "tabulated":
        return IsoperimetricProfile(TabulatedMonotone(d["knots"], d["values"]), n)
    if form == "tabulated-convex":
        npr = n / (n - 1.0)
        if abs(float(d["n_prime"]) - npr) > 1e-12:
            raise ValueError("n_prime of the table does not match the dimension")
        return IsoperimetricProfile(
            TabulatedConvex(d["knots"], d["npower"], npr, float(d["below_exponent"])), n)
    raise ValueError(f"unknown profile form {form!r}")


def psi(I: IsoperimetricProfile, m: int, t):
    """psi_I(t) = (integral of dr/I over (0, t))^m; inf when divergent."""
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    head = np.asarray(I.head_integral(t), dtype=float)
    with np.errstate(over="ignore"):
        out = head**m
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Smoothing
# ---------------------------------------------------------------------------


def _powerlaw_segment_integrals(s, y, below_exp):
    """Integrals of the log-log interpolant of (s, y) over each grid cell and (0, s0)."""
    ls, ly = np.log(s), np.log(y)
    e = np.diff(ly) / np.diff(ls)
    r = s[1:] / s[:-1]
    cells = np.where(
        np.abs(e + 1.0) < 1e-12,
        y[:-1] * s[:-1] * np.log(r),
        y[:-1] * s[:-1] * (r ** (e + 1.0) - 1.0) / (e + 1.0),
    )
    first = y[0] * s[0] / (below_exp + 1.0)
    return first, cells


def smoothing_report(I: IsoperimetricProfile, decades: int = 12, per_decade: int = 20) -> dict:
    """Run the two-step smoothing and return all tables and checks."""
    npr = I.n_prime
    s = np.geomspace(10.0 ** (-decades), 1.0, decades * per_decade + 1)
    q = I(s) ** npr / s
    a0, lam0 = I.form.exponent_at_zero
    b0 = a0 * npr - 1.0
    if b0 < -1e-12 or (abs(b0) <= 1e-12 and lam0 > 0):
        raise ValueError(
            "profile violates the monotonicity precondition: I(t)/t^(1/n') is not "
            "equivalent to a non-decreasing function near 0"
        )
    b0 = max(b0, 0.0)
    sigma = np.maximum.accumulate(q)
    spread = float(np.max(sigma / q))
    first, cells = _powerlaw_segment_integrals(s, sigma, b0)
    I1n = first + np.concatenate(([0.0], np.cumsum(cells)))
    dens = I1n / s
    first2, cells2 = _powerlaw_segment_integrals(s, dens, b0)
    Ihn = first2 + np.concatenate(([0.0], np.cumsum(cells2)))
    Ihat = Ihn ** (1.0 / npr)

    slopes = np.diff(Ihn) / np.diff(s)
    convex_ok = bool(np.all(np.diff(slopes) >= -1e-9 * np.abs(slopes[1:])))
    # sandwich  sigma(s/2)/2 <= I1^{n'}(s)/s <= sigma(s)
    ls = np.log(s)
    sig_half = np.exp(np.interp(ls - math.log(2.0), ls, np.log(sigma),
                                left=np.nan))
    below = ls - math.log(2.0) < ls[0]
    sig_half = np.where(below, sigma[0] * (0.5 * s / s[0]) ** b0, sig_half)
    mid = I1n / s
    lower_ok = bool(np.all(0.5 * sig_half <= mid * (1 + 1e-9)))
    upper_ok = bool(np.all(mid <= sigma * (1 + 1e-9)))
    ratio = Ihat / I(s)
    return {
        "grid": s,
        "sigma": sigma,
        "I1_pow": I1n,
        "Ihat_pow": Ihn,
        "Ihat": Ihat,
        "below_exponent": b0,
        "monotone_spread": spread,
        "convex": convex_ok,
        "sandwich_lower": lower_ok,
        "sandwich_upper": upper_ok,
        "ratio_min": float(ratio.min()),
        "ratio_max": float(ratio.max()),
    }


def smooth_profile(I: IsoperimetricProfile, **kw) -> IsoperimetricProfile:
    """Equivalent profile Î with Î^{n'} convex, returned as a knot table."""
    rep = smoothing_report(I, **kw)
    if not (rep["convex"] and rep["sandwich_lower"] and rep["sandwich_upper"]):
        raise RuntimeError("smoothing postconditions failed")
    # interpolate Ihat^{n'} linearly so that its convexity survives between knots
    form = TabulatedConvex(rep["grid"], rep["Ihat_pow"], I.n_prime, rep["below_exponent"] + 1.0)
    return IsoperimetricProfile(form, I.n)


def _npower_convex(I: IsoperimetricProfile) -> bool:
    npr = I.n_prime
    form = I.form
    if isinstance(form, Power):
        return form.alpha * npr >= 1 - 1e-12
    if isinstance(form, TabulatedMonotone):
        # a piecewise power t^e is convex iff every e >= 1 and the exponents
        # do not drop at the knots; a flat tail above a knot < 1 breaks it
        e = npr * form._exps
        flat_tail = form.knots[-1] < 1.0
        return bool(np.all(e >= 1 - 1e-9) and np.all(np.diff(e) >= -1e-9) and not flat_tail)
    if isinstance(form, TabulatedConvex):
        return abs(form.n_prime - npr) < 1e-12 and form.npower_convex()
    s = np.geomspace(1e-10, 1.0, 401)
    y = I(s) ** npr
    sl = np.diff(y) / np.diff(s)
    return bool(np.all(np.diff(sl) >= -1e-7 * np.abs(sl[1:])))


# ---------------------------------------------------------------------------
# Domain of revolution
# ---------------------------------------------------------------------------


def _solve_M(I: IsoperimetricProfile, r: np.ndarray, d: np.ndarray, L: float,
             log_lo: float, iters: int = 110) -> np.ndarray:
    """Bisection in log M for  G(M) = r  (or Phi(M) = d near the far end)."""
    use_head = np.isfinite(L) & (d < 0.5 * L)
    lo = np.full(r.shape, log_lo)
    hi = np.zeros(r.shape)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        Mm = np.exp(mid)
        if np.any(use_head):
            val_head = np.where(use_head, I.head_integral(np.where(use_head, Mm, 1.0)), 0.0)
        else:
            val_head = np.zeros_like(mid)
        val_tail = np.where(~use_head, I.tail_integral(np.where(~use_head, Mm, 1.0)), 0.0)
        # M too small  <=>  G(M) > r  <=>  Phi(M) < d
        too_small = np.where(use_head, val_head < d, val_tail > r)
        lo = np.where(too_small, mid, lo)
        hi = np.where(too_small, hi, mid)
    return np.exp(0.5 * (lo + hi))


@dataclass(frozen=True, eq=False)
class DomainProfile:
    """Tabulated description of Omega_I along its axis."""

    n: int
    L: float
    omega: float
    r: np.ndarray
    M: np.ndarray
    eta: np.ndarray
    dist_to_end: np.ndarray
    truncated: bool
    profile: IsoperimetricProfile
    measure_floor: float = 0.0

    def M_of(self, r) -> np.ndarray:
        """M(r) by root finding (not interpolation)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        d = self.L - r if not self.truncated else np.full_like(r, INF)
        return _solve_M(self.profile, r, d, self.L if not self.truncated else INF,
                        self._log_lo)

    def M_inverse(self, s) -> np.ndarray:
        return np.asarray(self.profile.tail_integral(s), dtype=float)

    @property
    def _log_lo(self) -> float:
        return math.log(self.measure_floor) if self.truncated else -745.0

    def volume(self, order: int = 16) -> float:
        """omega * integral of eta^(n-1) over the axis.

        Gauss-Legendre on every table cell, with M solved afresh at the nodes.
        """
        x, w = np.polynomial.legendre.leggauss(order)
        a, b = self.r[:-1], self.r[1:]
        half = 0.5 * (b - a)
        nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
        d = (self.L - nodes).ravel()
        if self.truncated:
            d = np.full_like(d, INF)
        M = _solve_M(self.profile, nodes.ravel(), d, INF if self.truncated else self.L,
                     self._log_lo)
        dens = self.profile(M).reshape(nodes.shape)
        v = float(np.sum(half * (dens @ w)))
        # the table stops short of L; the measure left beyond is M at the last point
        return v + float(self.M[-1])

    def eta_slopes(self) -> np.ndarray:
        return np.diff(self.eta) / np.diff(self.r)

    def eta_convex(self, tol: float = 1e-8) -> bool:
        sl = self.eta_slopes()
        scale = max(np.max(np.abs(sl)), 1e-300)
        # slope roundoff grows like eps * eta / dr on the finest cells
        noise = 8 * np.finfo(float).eps * np.max(self.eta) / np.diff(self.r)
        allow = tol * scale + noise[1:] + noise[:-1]
        return bool(np.all(np.diff(sl) >= -allow))

    def validate(self, n_check: int = 40) -> dict:
        s = np.geomspace(1e-8, 1.0, n_check)[:-1]
        r = self.M_inverse(s)
        if self.truncated:
            d = np.full_like(r, INF)
        else:
            d = np.asarray(self.profile.head_integral(s), dtype=float)
        back = _solve_M(self.profile, r, d, self.L if not self.truncated else INF, self._log_lo)
        ident = float(np.max(np.abs(back - s)))
        # identity eta(M^{-1}(s))^{n-1} = I(s)/omega
        eta_at = (self.profile(back) / self.omega) ** (1.0 / (self.n - 1))
        iso = float(np.max(np.abs(eta_at ** (self.n - 1) * self.omega / self.profile(s) - 1.0)))
        # ODE  I(M(r)) = -M'(r) by central differences with the root solver
        rr, dd = self.r[1:-1], self.dist_to_end[1:-1]
        Mi = self.M[1:-1]
        h = 1e-5 * np.minimum(np.minimum(rr, dd), Mi / self.profile(Mi))
        fin = not self.truncated
        Lm = self.L if fin else INF

        def at(shift):
            dist = dd - shift if fin else np.full_like(rr, INF)
            return _solve_M(self.profile, rr + shift, dist, Lm, self._log_lo)

        dM = (at(h) - at(-h)) / (2 * h)
        target = self.profile(Mi)
        ok = target > 1e-200
        ode = float(np.max(np.abs(-dM[ok] / target[ok] - 1.0))) if ok.any() else 0.0
        vol = self.volume()
        return {
            "volume": vol,
            "volume_error": abs(vol - 1.0),
            "M_identity_error": ident,
            "isoperimetric_identity_error": iso,
            "ode_relative_error": ode,
            "eta_convex": self.eta_convex(),
            "M_monotone": bool(np.all(np.diff(self.M) < 0)),
            "M_at_0": float(self.M[0]),
            "M_at_end": float(self.M[-1]),
            "truncated": self.truncated,
        }

    def header(self) -> dict:
        return {
            "n": self.n,
            "L": self.L,
            "omega": self.omega,
            "truncated": self.truncated,
            "profile": self.profile.to_dict(),
        }

    def to_csv(self, preamble: dict | None = None) -> str:
        buf = io.StringIO()
        if preamble is not None:
            buf.write("# " + json.dumps(preamble, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "eta", "M_of_r"])
        for a, b, c in zip(self.r, self.eta, self.M):
            w.writerow([repr(float(a)), repr(float(b)), repr(float(c))])
        return buf.getvalue()

    def point_cloud(self, steps: int = 64, stride: int = 1) -> np.ndarray:
        """Points (x_n, eta cos theta, eta sin theta) on the boundary surface."""
        if self.n != 3:
            raise ValueError("point cloud is produced for n = 3 only")
        th = 2.0 * math.pi * np.arange(steps) / steps
        r = self.r[::stride]
        e = self.eta[::stride]
        x = np.repeat(r, steps)
        y = (e[:, None] * np.cos(th)[None, :]).ravel()
        z = (e[:, None] * np.sin(th)[None, :]).ravel()
        return np.column_stack((x, y, z))


def build_domain_profile(I: IsoperimetricProfile, n_uniform: int = 400,
                         n_geometric: int = 400, measure_floor: float = 1e-9) -> DomainProfile:
    """Tabulate L, M and eta for the domain of revolution Omega_I."""
    if not _npower_convex(I):
        raise ValueError("I^{n'} is not convex; apply smooth_profile first")
    n = I.n
    omega = unit_ball_volume(n - 1)
    L = I.L
    if math.isfinite(L):
        truncated = False
        r_u = np.linspace(0.0, 0.5 * L, n_uniform, endpoint=False)
        d_g = 0.5 * L * np.geomspace(1.0, 1e-12, n_geometric)
        r = np.concatenate((r_u, L - d_g))
        d = np.concatenate((L - r_u, d_g))
        M = _solve_M(I, r, d, L, -745.0)
        floor = 0.0
    else:
        truncated = True
        L = float(I.tail_integral(measure_floor))
        # no singularity at the truncated end: space the table evenly in log M
        r = np.asarray(I.tail_integral(np.geomspace(1.0, measure_floor, n_uniform + n_geometric)))
        r[0], r[-1] = 0.0, L
        d = np.full_like(r, INF)
        M = _solve_M(I, r, d, INF, math.log(measure_floor))
        d = L - r
        floor = measure_floor
    eta = (I(M) / omega) ** (1.0 / (n - 1))
    return DomainProfile(n, L, omega, r, M, eta, d, truncated, I, floor)


# ---------------------------------------------------------------------------
# Maz'ya classes
# ---------------------------------------------------------------------------


def maz_ya_class_check(I: IsoperimetricProfile, alpha: float) -> Verdict:
    """Decide whether I(s) >= C s^alpha on (0, 1]; the witness is the infimum C."""
    form = I.form
    s = np.geomspace(1e-12, 1.0, 241)
    ratio = I(s) / s**alpha
    if isinstance(form, Power):
        holds = form.alpha <= alpha
        C = 1.0 if holds else 0.0
        return Verdict(HOLDS if holds else FAILS, "closed-form", C,
                       notes=(f"I(s)/s^alpha = s^{form.alpha - alpha:g}",))
    if isinstance(form, PowerLog):
        d = form.alpha - alpha
        holds = d < 0 or (d == 0 and form.lam >= 0)
        if not holds:
            return Verdict(FAILS, "closed-form", 0.0,
                           notes=("ratio tends to 0 as s -> 0",))
        # infimum of s^(-d) log^lam(e/s) over (0, 1]
        # x = log s in (-inf, 0]
        def f(x):
            return math.exp(d * x) * (1.0 - x) ** form.lam

        res = optimize.minimize_scalar(f, bounds=(-700.0, 0.0), method="bounded",
                                       options={"xatol": 1e-12})
        C = min(float(ratio.min()), float(res.fun), f(0.0))
        return Verdict(HOLDS, "closed-form", C)
    a0, _ = form.exponent_at_zero
    holds = a0 <= alpha + 1e-12
    C = float(ratio.min()) if holds else 0.0
    return Verdict(HOLDS if holds else FAILS, "numeric", C,
                   grid=tuple(np.round(ratio[::40], 12).tolist()),
                   notes=(f"exponent of the first knot segment {a0:g}",))
