"""Rearrangement-invariant norms on (0, 1).

Four families are supported: Lebesgue, Lorentz, Lorentz-Zygmund (with the
down-star variant that uses f** in place of f*) and Orlicz spaces with
the Luxemburg norm.  Lebesgue and Lorentz norms are represented as
Lorentz-Zygmund norms with ``beta = 0``.

For Lorentz-Zygmund parameters the displayed functional
``|| s^(1/p - 1/q) log^beta(2/s) f*(s) ||_q`` is used as the norm itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Union

import mpmath
import numpy as np
from scipy import integrate, optimize, special

from .rearrangement import (
    PiecewiseConstantFunction,
    decreasing_rearrangement,
    indicator,
    integral_of_rearrangement,
)

__all__ = [
    "PowerLogYoung",
    "TabulatedYoung",
    "ConjugateYoung",
    "YoungFunction",
    "young_conjugate",
    "young_from_dict",
    "LorentzZygmund",
    "Orlicz",
    "RiNormSpec",
    "Lebesgue",
    "Lorentz",
    "lz_admissible",
    "spec_from_dict",
    "parse_norm",
    "eval_norm",
    "fundamental_function",
    "fundamental_closed_form",
    "AssociateSpec",
    "associate_spec",
    "AssociateResult",
    "associate_norm_numeric",
    "eval_power_norm",
    "WindowContributions",
    "window_contributions",
    "functional_density",
    "conjugate_exponent",
]

INF = math.inf


def conjugate_exponent(p: float) -> float:
    """Hölder conjugate p' with 1' = inf and inf' = 1."""
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


def _golden_max(phi: Callable[[float], float], lo: float, hi: float,
                xtol: float = 1e-13, maxiter: int = 400) -> tuple[float, float]:
    """Golden-section search for the maximum of a concave function."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(maxiter):
        if b - a <= xtol * max(1.0, abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = phi(d)
    cands = [(phi(x), x) for x in (lo, a, c, d, b, hi)]
    best = max(cands)
    return best[1], best[0]


# ---------------------------------------------------------------------------
# Young functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLogYoung:
    """A(t) = scale * t^p * log^lam(e + t)."""

    p: float
    lam: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ValueError("power-log Young function needs finite p >= 1")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive")
        if not math.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        t = np.geomspace(1e-6, 1e6, 241)
        a = self(t)
        da = np.diff(a) / np.diff(t)
        if np.any(np.diff(da) < -1e-9 * np.abs(da[1:]) - 1e-300):
            raise ValueError(
                f"t^{self.p} log^{self.lam}(e+t) is not convex; not a Young function"
            )

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            out = self.scale * t**self.p * np.log(np.e + t) ** self.lam
        return np.where(t > 0, out, 0.0)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        lg = np.log(np.e + t)
        # factored so that huge t overflows to inf rather than inf - inf
        with np.errstate(over="ignore"):
            return self.scale * t ** (self.p - 1) * lg ** (self.lam - 1) * (
                self.p * lg + self.lam * t / (np.e + t)
            )

    @property
    def growth(self) -> float:
        return self.p

    @property
    def log_growth(self) -> float:
        return self.lam

    def inverse(self, y: float) -> float:
        if y <= 0:
            return 0.0
        g = lambda u: math.log(float(self(math.exp(u)))) - math.log(y)
        lo, hi = -5.0, 5.0
        while g(lo) > 0:
            lo *= 2
        while g(hi) < 0:
            hi *= 2
        return math.exp(optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15))

    def to_dict(self) -> dict:
        d = {"form": "powerlog", "p": self.p, "lambda": self.lam}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d


@dataclass(frozen=True, eq=False)
class TabulatedYoung:
    """Piecewise-linear convex Young function with a power tail.

    ``knots`` start at 0 with ``values[0] = 0``; beyond the last knot the
    function continues as ``values[-1] * (t / knots[-1])**growth``.
    """

    knots: np.ndarray
    values: np.ndarray
    growth: float

    def __post_init__(self):
        t = np.array(self.knots, dtype=float)
        a = np.array(self.values, dtype=float)
        if t.size < 2 or t.size != a.size:
            raise ValueError("need matching knots and values, at least two")
        if t[0] != 0 or a[0] != 0:
            raise ValueError("tabulated Young function must start at (0, 0)")
        if np.any(np.diff(t) <= 0):
            raise ValueError("knots must be strictly increasing")
        if np.any(a < 0) or np.any(np.diff(a) < 0):
            raise ValueError("values must be nonnegative and non-decreasing")
        slopes = np.diff(a) / np.diff(t)
        if np.any(np.diff(slopes) < -1e-10 * np.maximum(1.0, np.abs(slopes[1:]))):
            raise ValueError("values are not convex (slopes decrease)")
        if not self.growth >= 1:
            raise ValueError("asymptotic exponent must be >= 1")
        if a[-1] > 0 and self.growth * a[-1] / t[-1] < slopes[-1] * (1 - 1e-10):
            raise ValueError("power tail would break convexity at the last knot")
        t.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "values", a)
        object.__setattr__(self, "growth", float(self.growth))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tk, ak = self.knots[-1], self.values[-1]
        inside = np.interp(np.minimum(t, tk), self.knots, self.values)
        with np.errstate(over="ignore", invalid="ignore"):
            tail = ak * (np.maximum(t, tk) / tk) ** self.growth
        return np.where(t <= tk, inside, tail)

    @property
    def log_growth(self) -> float:
        return 0.0

    def inverse(self, y: float) -> float:
        if y <= 0:
            return 0.0
        tk, ak = self.knots[-1], self.values[-1]
        if ak <= 0:
            raise ValueError("identically zero Young function has no inverse")
        if y >= ak:
            return float(tk * (y / ak) ** (1.0 / self.growth))
        # Largest t with A(t) <= y on the linear part (A may be flat at 0).
        i = int(np.searchsorted(self.values, y, side="right"))
        t0, t1 = self.knots[i - 1], self.knots[i]
        a0, a1 = self.values[i - 1], self.values[i]
        return float(t0 + (y - a0) * (t1 - t0) / (a1 - a0))

    def to_dict(self) -> dict:
        return {
            "form": "tabulated",
            "knots": self.knots.tolist(),
            "values": self.values.tolist(),
            "growth": self.growth,
        }


@dataclass(frozen=True)
class ConjugateYoung:
    """Young conjugate of a power-log Young function, evaluated pointwise.

    A~(s) = t A'(t) - A(t) at the t solving A'(t) = s, found by bisection
    in log t.  Values beyond double range are returned as inf, which is
    how conjugates of linear-growth functions (exponential type) show up.
    """

    of: PowerLogYoung

    def __post_init__(self):
        if not isinstance(self.of, PowerLogYoung):
            raise TypeError("pointwise conjugate is implemented for power-log Young functions")
        if self.of.p == 1 and self.of.lam <= 0:
            raise ValueError("conjugate of a linear Young function is not finite-valued")

    def derivative(self, s):
        """(A')^{-1}(s), which is the derivative of the conjugate."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        A = self.of
        lo = np.full(s.shape, -700.0)
        hi = np.full(s.shape, 700.0)
        with np.errstate(over="ignore", invalid="ignore"):
            top = A.derivative(np.exp(hi)) < s
            for _ in range(90):
                mid = 0.5 * (lo + hi)
                up = A.derivative(np.exp(mid)) < s
                lo = np.where(up, mid, lo)
                hi = np.where(up, hi, mid)
        t = np.exp(0.5 * (lo + hi))
        t = np.where(s <= A.derivative(np.exp(-700.0)), 0.0, t)
        return np.where(top, INF, t)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        A = self.of
        t = self.derivative(np.maximum(s, 0.0))
        with np.errstate(over="ignore", invalid="ignore"):
            lg = np.log(np.e + t)
            gap = A.scale * t**A.p * lg ** (A.lam - 1.0) * (
                (A.p - 1.0) * lg + A.lam * t / (np.e + t)
            )
        gap = np.where(t == 0, 0.0, np.where(np.isfinite(t), gap, INF))
        gap = np.where(np.isnan(gap), INF, gap)
        return gap.reshape(s.shape) if s.ndim else float(gap[0])

    @property
    def growth(self) -> float:
        return conjugate_exponent(self.of.p)

    @property
    def log_growth(self) -> float:
        # A~(s) ~ s^{p'} log^{-lam/(p-1)}(s) for p > 1
        return -self.of.lam / (self.of.p - 1.0) if self.of.p > 1 else 0.0

    def inverse(self, y: float) -> float:
        if y <= 0:
            return 0.0
        g = lambda v: float(self(math.exp(v))) - y
        lo, hi = -5.0, 5.0
        while g(lo) > 0:
            lo *= 2
        while g(hi) < 0:
            hi *= 2
        return math.exp(optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15))

    def to_dict(self) -> dict:
        return {"form": "conjugate", "of": self.of.to_dict()}


YoungFunction = Union[PowerLogYoung, TabulatedYoung, ConjugateYoung]


def young_from_dict(d: dict) -> YoungFunction:
    form = d.get("form")
    if form == "powerlog":
        return PowerLogYoung(float(d["p"]), float(d.get("lambda", 0.0)), float(d.get("scale", 1.0)))
    if form == "tabulated":
        return TabulatedYoung(d["knots"], d["values"], float(d["growth"]))
    if form == "conjugate":
        return ConjugateYoung(young_from_dict(d["of"]))
    raise ValueError(f"unknown Young function form {form!r}")


def _conjugate_value(A: YoungFunction, s: float) -> float:
    """sup_t (s t - A(t)) by golden-section search on a bracket."""
    if s <= 0:
        return 0.0
    hi = 1.0
    while float(A(2 * hi)) - float(A(hi)) <= s * hi:
        hi *= 2.0
        if hi > 1e300:
            return INF
    _, val = _golden_max(lambda t: s * t - float(A(t)), 0.0, 2 * hi)
    return max(val, 0.0)


def young_conjugate(A: YoungFunction) -> YoungFunction:
    """Young conjugate  A~(s) = sup_t (s t - A(t))."""
    if isinstance(A, PowerLogYoung):
        if A.lam == 0 and A.p > 1:
            pc = conjugate_exponent(A.p)
            return PowerLogYoung(pc, 0.0, (A.scale * A.p) ** (1.0 - pc) / pc)
        if A.p == 1 and A.lam <= 0:
            raise ValueError(
                "conjugate of a linear-growth Young function is infinite beyond a "
                "finite level (the L^infinity gauge); not representable"
            )
        return ConjugateYoung(A)
    if isinstance(A, TabulatedYoung):
        if A.values[-1] <= 0:
            raise ValueError("Young function vanishes identically; conjugate undefined")
        if A.growth <= 1:
            raise ValueError("linear tail: conjugate is not finite-valued")
        t, a = A.knots, A.values
        slopes = np.diff(a) / np.diff(t)
        s_tail = A.growth * a[-1] / t[-1]
        s = np.unique(np.concatenate(([0.0], slopes, [s_tail])))
        vals = np.array([_conjugate_value(A, float(x)) for x in s])
        return TabulatedYoung(s, vals, conjugate_exponent(A.growth))
    raise TypeError("unsupported Young function")


# ---------------------------------------------------------------------------
# Norm spec types
# ---------------------------------------------------------------------------


def lz_admissible(p: float, q: float, beta: float) -> bool:
    """Parameter rows for which the Lorentz-Zygmund functional is a norm."""
    if not (p >= 1 and q >= 1) or math.isnan(beta):
        return False
    if 1 < p < INF:
        return True
    if p == 1:
        return q == 1 and beta >= 0
    if p == INF and q == INF:
        return beta <= 0
    if p == INF:
        return beta + 1.0 / q < 0
    return False


@dataclass(frozen=True)
class LorentzZygmund:
    """Lorentz-Zygmund norm L^{p,q;beta}; ``down_star`` selects L^{(p,q;beta)}."""

    p: float
    q: float
    beta: float = 0.0
    down_star: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "beta", float(self.beta))
        if self.down_star:
            # The down-star functional only appears as an associate space;
            # it is finite for the parameters produced there.
            if not (self.p >= 1 and self.q >= 1):
                raise ValueError("exponents must be >= 1")
        elif not lz_admissible(self.p, self.q, self.beta):
            raise ValueError(
                f"Lorentz-Zygmund parameters (p={self.p}, q={self.q}, beta={self.beta}) "
                "are not admissible"
            )

    @property
    def is_lebesgue(self) -> bool:
        return self.p == self.q and self.beta == 0 and not self.down_star

    @property
    def is_norm(self) -> bool:
        """Whether the displayed functional itself satisfies the triangle inequality.

        True when the weight w(s)^q = s^(q/p-1) log^(beta q)(2/s) is
        non-increasing on (0, 1), and for the down-star variant (f** is
        subadditive).  For q = inf only the unweighted sup qualifies.
        Otherwise the functional is merely equivalent to a norm.
        """
        if self.down_star:
            return True
        if self.q == INF:
            return self.p == INF and self.beta == 0
        a = self.q / self.p - 1.0 if self.p < INF else -1.0
        g = self.beta * self.q
        # d log(w^q) / d log s = a - g / log(2/s), with log(2/s) ranging over (log 2, inf)
        return a <= 0 if g >= 0 else a - g / math.log(2.0) <= 0

    @property
    def kind(self) -> str:
        if self.down_star:
            return "lz-down"
        if self.is_lebesgue:
            return "lp"
        return "lorentz" if self.beta == 0 else "lz"

    def to_dict(self) -> dict:
        num = lambda x: "inf" if x == INF else x
        if self.is_lebesgue:
            return {"kind": "lp", "p": num(self.p)}
        d = {"kind": "lz", "p": num(self.p), "q": num(self.q), "beta": self.beta}
        if self.down_star:
            d["down_star"] = True
        return d

    def label(self) -> str:
        num = lambda x: "inf" if x == INF else f"{x:g}"
        if self.is_lebesgue:
            return f"L^{num(self.p)}"
        star = "(" if self.down_star else ""
        end = ")" if self.down_star else ""
        return f"L^{star}{num(self.p)},{num(self.q)};{self.beta + 0.0:g}{end}"


@dataclass(frozen=True)
class Orlicz:
    """Orlicz space with the Luxemburg norm."""

    A: YoungFunction

    @property
    def kind(self) -> str:
        return "orlicz"

    def to_dict(self) -> dict:
        return {"kind": "orlicz", "A": self.A.to_dict()}

    def label(self) -> str:
        return f"L^A[{json.dumps(self.A.to_dict())}]"


RiNormSpec = Union[LorentzZygmund, Orlicz]


def Lebesgue(p: float) -> LorentzZygmund:
    return LorentzZygmund(p, p, 0.0)


def Lorentz(p: float, q: float) -> LorentzZygmund:
    return LorentzZygmund(p, q, 0.0)


def _num(x) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        if "/" in s:
            a, b = s.split("/")
            return float(a) / float(b)
        return float(s)
    return float(x)


def spec_from_dict(d: dict) -> RiNormSpec:
    kind = d.get("kind")
    if kind == "lp":
        return Lebesgue(_num(d["p"]))
    if kind == "lorentz":
        return Lorentz(_num(d["p"]), _num(d["q"]))
    if kind in ("lz", "lz-down"):
        return LorentzZygmund(
            _num(d["p"]), _num(d["q"]), _num(d.get("beta", 0.0)),
            bool(d.get("down_star", kind == "lz-down")),
        )
    if kind == "orlicz":
        return Orlicz(young_from_dict(d["A"]))
    raise ValueError(f"unknown norm kind {kind!r}")


def parse_norm(text: str) -> RiNormSpec:
    """Parse ``lp:2``, ``lorentz:2,1``, ``lz:2,1,0``, ``orlicz:2,1`` or JSON."""
    text = text.strip()
    if text.startswith("{"):
        return spec_from_dict(json.loads(text))
    kind, _, rest = text.partition(":")
    args = [a for a in rest.split(",") if a.strip()]
    kind = kind.lower()
    if kind in ("lp", "l"):
        return Lebesgue(_num(args[0]))
    if kind == "lorentz":
        return Lorentz(_num(args[0]), _num(args[1]))
    if kind == "lz":
        beta = _num(args[2]) if len(args) > 2 else 0.0
        return LorentzZygmund(_num(args[0]), _num(args[1]), beta)
    if kind == "orlicz":
        if args and args[0].lower() == "powerlog":
            args = args[1:]
        nums = [_num(a) for a in args]
        p = nums[0]
        lam = nums[1] if len(nums) > 1 else 0.0
        scale = nums[2] if len(nums) > 2 else 1.0
        return Orlicz(PowerLogYoung(p, lam, scale))
    raise ValueError(f"cannot parse norm {text!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _log2s(s):
    return np.log(2.0 / np.asarray(s, dtype=float))


def powlog_integral(A: float, gamma: float, s0: float, s1: float) -> float:
    """Exact integral of s^(A-1) log^gamma(2/s) over (s0, s1), 0 <= s0 < s1 <= 1.

    With u = log(2/s) the integrand becomes 2^A e^(-A u) u^gamma, whose
    antiderivative is an incomplete gamma function.  Returns inf when the
    integral diverges at s0 = 0.
    """
    L1 = math.log(2.0 / s1)
    L0 = INF if s0 == 0 else math.log(2.0 / s0)
    if A < 0:
        return INF if s0 == 0 else float(integrate.quad(
            lambda s: s ** (A - 1) * math.log(2 / s) ** gamma, s0, s1,
            epsabs=0, epsrel=1e-12, limit=200)[0])
    if A == 0:
        if s0 == 0 and gamma >= -1:
            return INF
        if gamma == -1:
            return math.log(L0 / L1)
        if s0 == 0:
            return -(L1 ** (gamma + 1)) / (gamma + 1)
        return (L0 ** (gamma + 1) - L1 ** (gamma + 1)) / (gamma + 1)
    shape = gamma + 1.0
    pref = 2.0**A * A ** (-shape)
    x1, x0 = A * L1, A * L0
    if shape > 0:
        g = special.gamma(shape)
        up1 = special.gammaincc(shape, x1)
        up0 = 0.0 if x0 == INF else special.gammaincc(shape, x0)
        val = pref * g * (up1 - up0)
        if val > 0 and (up1 - up0) > 1e-8 * up1:
            return float(val)
    hi = mpmath.inf if x0 == INF else x0
    try:
        return float(pref * mpmath.gammainc(shape, x1, hi))
    except NotImplementedError:
        # mpmath gives up on some very narrow intervals with shape <= 0
        return float(pref * mpmath.quad(lambda x: mpmath.exp(-x) * x ** (shape - 1), [x1, hi]))


def _weight_sup_piece(p: float, beta: float, s0: float, s1: float) -> float:
    """sup of s^(1/p) log^beta(2/s) over [s0, s1] (closed-form candidates)."""
    a = _inv(p)

    def w(s):
        if s == 0:
            if a > 0:
                return 0.0
            return 0.0 if beta < 0 else (1.0 if beta == 0 else INF)
        return s**a * math.log(2.0 / s) ** beta

    cands = [w(s0), w(s1)]
    if a > 0 and beta > 0:
        s_star = 2.0 * math.exp(-beta / a)
        if s0 < s_star < s1:
            cands.append(w(s_star))
    return max(cands)


def _lz_pieces(spec: LorentzZygmund, bp: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Per-piece contributions for a non-increasing step function.

    For q < inf these are the integrals of (weight * f*)^q over each piece,
    for q = inf the sups of weight * f* (f** in place of f* when down-star).
    """
    p, q, beta = spec.p, spec.q, spec.beta
    a = _inv(p) - _inv(q)
    if spec.down_star:
        cum = np.concatenate(([0.0], np.cumsum(vals * np.diff(bp))))
        offsets = cum[:-1] - vals * bp[:-1]  # f**(s) = v + c/s on each piece
    else:
        offsets = np.zeros_like(vals)
    out = np.zeros(vals.size)
    for i, (s0, s1, v, c) in enumerate(zip(bp[:-1], bp[1:], vals, offsets)):
        if v == 0 and c == 0:
            continue
        if q == INF:
            if c == 0:
                out[i] = v * _weight_sup_piece(p, beta, s0, s1)
            else:
                h = lambda s: -(s**a * math.log(2.0 / s) ** beta * (v + c / s))
                r = optimize.minimize_scalar(h, bounds=(s0, s1), method="bounded",
                                             options={"xatol": 1e-12 * s1})
                out[i] = max(-h(s0), -h(s1), -r.fun)
            continue
        if c == 0:
            A = q / p if p != INF else 0.0
            if beta == 0:
                if A == 0:
                    piece = INF if s0 == 0 else math.log(s1 / s0)
                else:
                    piece = (s1**A - s0**A) / A
            else:
                piece = powlog_integral(A, beta * q, s0, s1)
            out[i] = v**q * piece
        else:
            integrand = lambda s: (s**a * math.log(2.0 / s) ** beta * (v + c / s)) ** q
            out[i] = integrate.quad(integrand, s0, s1, epsabs=1e-10, epsrel=1e-10, limit=200)[0]
    return out


def _lz_eval(spec: LorentzZygmund, f: PiecewiseConstantFunction) -> float:
    fs = decreasing_rearrangement(f)
    if fs.values.max() == 0:
        return 0.0
    parts = _lz_pieces(spec, fs.breakpoints, fs.values)
    if spec.q == INF:
        return float(parts.max())
    total = float(parts.sum())
    if total == INF:
        return INF
    return total ** (1.0 / spec.q)


@dataclass(frozen=True)
class WindowContributions:
    """Norm functional split over nested windows (e_j, 1).

    ``edges`` decrease from 1; ``parts[j]`` is the contribution of the
    window (edges[j+1], edges[j]).  ``kind`` is ``sum`` (q-th powers add
    up), ``sup`` (running maximum) or ``modular`` (Orlicz modular at
    scale 1).
    """

    kind: str
    exponent: float
    edges: np.ndarray
    parts: np.ndarray

    def values(self) -> np.ndarray:
        """Window values: the functional with its outer integral/sup restricted to (e_j, 1)."""
        if self.kind == "sup":
            return np.maximum.accumulate(self.parts)
        cum = np.cumsum(self.parts)
        if self.kind == "sum":
            with np.errstate(over="ignore"):
                return cum ** (1.0 / self.exponent)
        return cum

    def increments(self) -> np.ndarray:
        """Nonnegative additive increments of the window sequence."""
        if self.kind == "sup":
            run = np.maximum.accumulate(self.parts)
            return np.concatenate(([run[0]], np.diff(run)))
        return self.parts.copy()


def functional_density(spec: RiNormSpec, f: PiecewiseConstantFunction, s) -> tuple[str, np.ndarray]:
    """Integrand of the functional of f per unit log s, at the points ``s``.

    For q < inf this is s (s^(1/p-1/q) log^beta(2/s) F(s))^q, with F = f*
    or f**; for q = inf it is the weighted function whose sup is taken;
    for Orlicz norms it is s A(f*(s)).  The first return value names the
    aggregation ("sum", "sup" or "modular").
    """
    s = np.asarray(s, dtype=float)
    fs = decreasing_rearrangement(f)
    if isinstance(spec, Orlicz):
        with np.errstate(over="ignore"):
            return "modular", s * spec.A(fs(s))
    if not isinstance(spec, LorentzZygmund):
        raise TypeError("unsupported norm spec")
    F = integral_of_rearrangement(fs, s) / s if spec.down_star else fs(s)
    w = s ** (_inv(spec.p) - _inv(spec.q)) * _log2s(s) ** spec.beta * F
    if spec.q == INF:
        return "sup", w
    with np.errstate(over="ignore"):
        return "sum", s * w**spec.q


def window_contributions(spec: RiNormSpec, f: PiecewiseConstantFunction,
                         edges) -> WindowContributions:
    """Split the functional of f* over the windows cut by ``edges`` (1 > e_1 > e_2 > ...).

    f* is taken over all of (0, 1); only the outer integral or sup is
    restricted, so the window values increase to the full norm.
    """
    edges = np.concatenate(([1.0], np.asarray(edges, dtype=float)))
    if np.any(np.diff(edges) >= 0) or edges[-1] <= 0:
        raise ValueError("edges must decrease from 1 and stay positive")
    fs = decreasing_rearrangement(f)
    bp = np.unique(np.concatenate((fs.breakpoints, edges)))
    mids = 0.5 * (bp[:-1] + bp[1:])
    vals = fs(mids)
    if isinstance(spec, LorentzZygmund):
        pieces = _lz_pieces(spec, bp, vals)
        kind = "sup" if spec.q == INF else "sum"
        exponent = 1.0 if spec.q == INF else spec.q
    elif isinstance(spec, Orlicz):
        with np.errstate(over="ignore"):
            pieces = np.where(vals > 0, np.diff(bp) * spec.A(vals), 0.0)
        kind, exponent = "modular", 1.0
    else:
        raise TypeError("unsupported norm spec")
    # window index of each piece: piece lies in (edges[j+1], edges[j])
    win = np.searchsorted(-edges, -mids) - 1
    parts = np.zeros(edges.size - 1)
    inside = (win >= 0) & (win < parts.size)
    if kind == "sup":
        np.maximum.at(parts, win[inside], pieces[inside])
    else:
        np.add.at(parts, win[inside], pieces[inside])
    return WindowContributions(kind, exponent, edges[1:], parts)


def _luxemburg(A: YoungFunction, f: PiecewiseConstantFunction) -> float:
    vals, lens = f.values, f.lengths
    mask = vals > 0
    if not mask.any():
        return 0.0
    vals, lens = vals[mask], lens[mask]

    def modular(log_lam):
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.dot(lens, A(vals / math.exp(log_lam))))

    lo = hi = math.log(vals.max())
    while modular(hi) > 1:
        hi += 1.0
    while modular(lo) <= 1:
        lo -= 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if modular(mid) > 1:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return math.exp(hi)


def eval_norm(spec: RiNormSpec, f: PiecewiseConstantFunction) -> float:
    """Norm of the step function ``f`` (may return ``inf``)."""
    if isinstance(spec, LorentzZygmund):
        return _lz_eval(spec, f)
    if isinstance(spec, Orlicz):
        return _luxemburg(spec.A, f)
    raise TypeError("unsupported norm spec")


def fundamental_function(spec: RiNormSpec, t: float) -> float:
    """phi_X(t) = || chi_(0,t) ||_X for t in (0, 1]."""
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if isinstance(spec, Orlicz):
        # the Luxemburg gauge of an indicator solves t A(1/lambda) = 1
        return 1.0 / spec.A.inverse(1.0 / t)
    return eval_norm(spec, indicator(0.0, t))


def fundamental_closed_form(spec: RiNormSpec, t: float) -> float:
    """Closed-form fundamental function.

    Exact for Orlicz spaces (1 / A^{-1}(1/t)); for Lorentz-Zygmund norms
    the standard table, which agrees with ``fundamental_function`` up to
    multiplicative constants.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if isinstance(spec, Orlicz):
        return 1.0 / spec.A.inverse(1.0 / t)
    p, q, beta = spec.p, spec.q, spec.beta
    L = math.log(2.0 / t)
    if 1 < p < INF:
        return t ** (1.0 / p) * L**beta
    if p == 1:
        return t * L**beta
    if q == INF:
        return L**beta
    return L ** (beta + 1.0 / q)


# ---------------------------------------------------------------------------
# Associate norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssociateSpec:
    """Closed-form associate norm.

    ``exact`` is True when ``spec`` equals the associate norm of the
    original functional; otherwise the two are equivalent only.
    ``holder_constant`` is the constant C in  int f g <= C ||f|| ||g||_spec
    when it is known.
    """

    spec: RiNormSpec
    exact: bool
    note: str
    holder_constant: float | None = 1.0


def associate_spec(spec: RiNormSpec) -> AssociateSpec:
    if isinstance(spec, Orlicz):
        A = spec.A
        if isinstance(A, PowerLogYoung) and A.p == 1 and A.lam == 0:
            return AssociateSpec(Lebesgue(INF), False,
                                 f"L^infinity, exact up to the factor 1/{A.scale:g}", None)
        return AssociateSpec(Orlicz(young_conjugate(A)), False,
                             "up to equivalence: Luxemburg norm of the Young conjugate", 2.0)
    p, q, beta = spec.p, spec.q, spec.beta
    if spec.down_star:
        raise ValueError("associate of a down-star space is not tabulated")
    if p < INF:
        exact = spec.is_lebesgue
        out = LorentzZygmund(conjugate_exponent(p), conjugate_exponent(q), -beta)
        note = "exact" if exact else "Lorentz-Zygmund associate, up to equivalence"
        return AssociateSpec(out, exact, note, 1.0)
    if q == INF and beta == 0:
        return AssociateSpec(Lebesgue(1.0), True, "exact", 1.0)
    if q == INF:
        return AssociateSpec(LorentzZygmund(1.0, 1.0, -beta), True,
                             "exact: extremal function log^(-beta)(2/s)", 1.0)
    out = LorentzZygmund(1.0, conjugate_exponent(q), -beta - 1.0, down_star=True)
    return AssociateSpec(out, False, "down-star space L^(1,q';-beta-1), up to equivalence", None)


@dataclass
class AssociateResult:
    value: float
    maximizer: PiecewiseConstantFunction | None
    closed_form: float | None = None
    gap: float | None = None
    iterations: int = 0


def associate_norm_numeric(spec: RiNormSpec, g: PiecewiseConstantFunction,
                           sweeps: int = 60, tol: float = 1e-10) -> AssociateResult:
    """Lower bound on ||g||_{X'} by coordinate ascent.

    The trial functions f are non-increasing step functions on the
    partition of g*; each is normalized to ||f||_X = 1 and the pairing
    int f g* is maximized one increment at a time.
    """
    gs = decreasing_rearrangement(g)
    closed = None
    try:
        closed = eval_norm(associate_spec(spec).spec, g)
    except (ValueError, TypeError):
        closed = None
    if gs.values.max() == 0:
        return AssociateResult(0.0, None, closed, None if closed is None else closed)
    bp, gv, lens = gs.breakpoints, gs.values, gs.lengths
    n = gv.size

    def build(y):
        x = np.cumsum(y[::-1])[::-1]
        return x

    def ratio(y):
        x = build(y)
        if not np.any(x > 0):
            return -INF
        f = PiecewiseConstantFunction(bp, x)
        nrm = eval_norm(spec, f)
        if not math.isfinite(nrm) or nrm <= 0:
            return -INF
        return float(np.dot(x * gv, lens)) / nrm

    starts = []
    e0 = np.zeros(n)
    e0[0] = 1.0
    starts.append(e0)
    starts.append(np.concatenate((np.zeros(n - 1), [1.0])))
    gdiff = np.concatenate((gv[:-1] - gv[1:], [gv[-1]]))
    if gdiff.sum() > 0:
        starts.append(gdiff / gdiff.sum())
    best_y, best = None, -INF
    for y0 in starts:
        r = ratio(y0)
        if r > best:
            best, best_y = r, y0.copy()
    y = best_y
    it = 0
    for it in range(1, sweeps + 1):
        prev = best
        for j in range(n):
            scale_j = max(y.sum(), 1e-300)

            def phi(u, j=j):
                z = y.copy()
                z[j] = u * scale_j
                return ratio(z)

            u, val = _golden_max(phi, 0.0, 4.0, xtol=1e-10, maxiter=120)
            if val > best:
                best = val
                y = y.copy()
                y[j] = u * scale_j
        if best - prev <= tol * max(abs(best), 1.0):
            break
    x = build(y)
    f = PiecewiseConstantFunction(bp, x)
    f = f.scale(1.0 / eval_norm(spec, f))
    gap = None if closed is None else closed - best
    return AssociateResult(float(best), f, closed, gap, it)


def eval_power_norm(spec: RiNormSpec, p: float, f: PiecewiseConstantFunction) -> float:
    """||f||_{X^p} = ||f^p||_X^(1/p)."""
    if not p > 1:
        raise ValueError("power norm needs p > 1")
    return eval_norm(spec, f.power(p)) ** (1.0 / p)
