"""Weighted Hardy operators H_I and their iterates.

With G(t) = integral of dr/I(r) over (t, 1), the k-th iterate is

    H^k g(t) = 1/(k-1)! * integral_t^1 g(s)/I(s) (G(t) - G(s))^(k-1) ds.

For a step function g the substitution u = G(t) - G(s) turns every piece
into an exact power, so no quadrature is needed.  Callable inputs (the
closed-form power family) go through adaptive quadrature instead, which
makes the two routes independent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .isoperimetry import IsoperimetricProfile, psi
from .norms import RiNormSpec, associate_spec, eval_norm
from .rearrangement import (
    PiecewiseConstantFunction,
    decreasing_rearrangement,
    integral_of_rearrangement,
    random_step_function,
)
from .verdict import jsonable

__all__ = [
    "HardyContext",
    "apply_H",
    "apply_Hk",
    "compose_H",
    "PowerFamily",
    "hardy_power_family",
    "step_approximation",
    "inner_associate_function",
    "OptimalAssociateResult",
    "optimal_associate_norm",
    "lemma_constant",
    "BoundReport",
    "pointwise_bound_check",
    "random_admissible",
    "admissible_envelope",
]


@dataclass(frozen=True, eq=False)
class HardyContext:
    """Profile I and order m, with G = integral of 1/I over (t, 1) precomputed on knots."""

    I: IsoperimetricProfile
    m: int = 1
    table_size: int = 241
    _grid: np.ndarray = field(init=False, repr=False)
    _G: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        grid = np.geomspace(1e-12, 1.0, self.table_size)
        G = np.asarray(self.I.tail_integral(grid), dtype=float)
        if np.any(np.diff(G) >= 0):
            raise ValueError("antiderivative table of 1/I is not strictly monotone")
        object.__setattr__(self, "_grid", grid)
        object.__setattr__(self, "_G", G)

    def G(self, t):
        return self.I.tail_integral(t)

    def psi(self, t, m: int | None = None):
        return psi(self.I, self.m if m is None else m, t)

    @property
    def grid(self) -> np.ndarray:
        return self._grid

    @property
    def G_table(self) -> np.ndarray:
        return self._G

    @property
    def optimality_asserted(self) -> bool:
        """Whether inf I(t)/t > 0, the condition under which the formula space is optimal."""
        a0, lam = self.I.form.exponent_at_zero
        return a0 < 1 or (a0 == 1 and lam <= 0)


def _step_Hk(ctx: HardyContext, k: int, g: PiecewiseConstantFunction, t: np.ndarray) -> np.ndarray:
    b = g.breakpoints
    v = g.values
    # G(0) may diverge; it is never selected since t > 0
    Gb = np.concatenate(([np.nan], np.asarray(ctx.G(b[1:]), dtype=float)))
    Gt = np.asarray(ctx.G(t), dtype=float)
    live = b[None, 1:] > t[:, None]
    G_lo = np.where(b[None, :-1] >= t[:, None], Gb[None, :-1], Gt[:, None])
    upper = np.clip(Gt[:, None] - Gb[None, 1:], 0.0, None) ** k
    lower = np.clip(Gt[:, None] - G_lo, 0.0, None) ** k
    terms = np.where(live, v[None, :] * (upper - lower), 0.0)
    return terms.sum(axis=1) / math.factorial(k)


def _callable_Hk(ctx: HardyContext, k: int, g: Callable, t: float) -> float:
    lo_s, hi_s = getattr(g, "support", (0.0, 1.0))
    lo = max(t, lo_s)
    if lo >= hi_s:
        return 0.0
    Gt = float(ctx.G(t))

    def integrand(s):
        return g(s) / float(ctx.I(s)) * (Gt - float(ctx.G(s))) ** (k - 1)

    e = getattr(g, "right_singularity", 0.0)
    if e < 0:
        # integrable blow-up like (hi - s)^e: let the algebraic weight carry it
        def smooth(s):
            return (g.regular_part(s) / float(ctx.I(s))
                    * (Gt - float(ctx.G(s))) ** (k - 1))

        val = integrate.quad(smooth, lo, hi_s,
                             weight="alg", wvar=(0.0, e), epsabs=0.0, epsrel=1e-12, limit=500)[0]
    else:
        val = integrate.quad(integrand, lo, hi_s, epsabs=0.0, epsrel=1e-12, limit=500)[0]
    return val / math.factorial(k - 1)


def apply_Hk(ctx: HardyContext, k: int, g, t):
    """H^k_I g(t); k = 0 returns g(t).  Vectorized in t for step functions."""
    if int(k) != k or k < 0:
        raise ValueError("k must be a nonnegative integer")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any((t <= 0) | (t >= 1)):
        raise ValueError("t must lie in (0, 1)")
    if k == 0:
        out = np.asarray(g(t), dtype=float)
    elif isinstance(g, PiecewiseConstantFunction):
        out = _step_Hk(ctx, int(k), g, t)
    else:
        out = np.array([_callable_Hk(ctx, int(k), g, float(x)) for x in t])
    return float(out[0]) if scalar else out


def apply_H(ctx: HardyContext, g, t):
    """H_I g(t) = integral of g/I over (t, 1)."""
    return apply_Hk(ctx, 1, g, t)


def compose_H(ctx: HardyContext, k: int, g: PiecewiseConstantFunction, t: float) -> float:
    """k-fold composition H(H(...H g)) by nested quadrature; a cross-check only."""
    if k == 0:
        return float(g(t))
    if k == 1:
        return float(apply_Hk(ctx, 1, g, t))
    pts = [x for x in g.breakpoints[1:-1] if x > t]

    def integrand(s):
        return compose_H(ctx, k - 1, g, s) / float(ctx.I(s))

    return integrate.quad(integrand, t, 1.0, points=pts or None, epsabs=1e-14,
                          epsrel=1e-12, limit=200)[0]


@dataclass(frozen=True)
class PowerFamily:
    """f(t) = chi_(eps, a)(t) * (integral of dr/I over (t, a))^b and its closed-form images."""

    ctx: HardyContext
    a: float
    eps: float
    b: float

    @property
    def support(self) -> tuple[float, float]:
        return (self.eps, self.a)

    @property
    def right_singularity(self) -> float:
        return min(self.b, 0.0)

    def regular_part(self, s: float) -> float:
        """f(s) / (a - s)^b, continuous up to s = a."""
        if s >= self.a:
            return float(self.ctx.I(self.a)) ** (-self.b)
        return (float(self._base(s)) / (self.a - s)) ** self.b

    def _base(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(self.ctx.G(t), dtype=float) - float(self.ctx.G(self.a))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > self.eps) & (t < self.a)
        base = np.where(inside, self._base(np.where(inside, t, self.a)), 1.0)
        out = np.where(inside, np.abs(base) ** self.b, 0.0)
        return out if out.ndim else float(out)

    def coefficient(self, k: int) -> float:
        return 1.0 / math.prod(self.b + j for j in range(1, k + 1))

    def image(self, k: int, t):
        """H^k f(t) for t in (eps, a)."""
        t = np.asarray(t, dtype=float)
        out = self.coefficient(k) * self._base(t) ** (self.b + k)
        return out if out.ndim else float(out)

    def step(self, n_cells: int = 400) -> PiecewiseConstantFunction:
        """Step function with the exact cell averages of f against dr/I."""
        return step_approximation(self, self.eps, self.a, n_cells)


def hardy_power_family(ctx: HardyContext, a: float, eps: float, b: float) -> PowerFamily:
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    if not 0 < eps < a:
        raise ValueError("eps must lie in (0, a)")
    if not b > -1:
        raise ValueError("b must exceed -1 (otherwise the generator is not integrable at a)")
    return PowerFamily(ctx, a, eps, b)


def step_approximation(f: Callable, lo: float, hi: float, n_cells: int = 400,
                       geometric: bool = True) -> PiecewiseConstantFunction:
    """Step function equal to the cell average of f on a grid over (lo, hi), zero elsewhere."""
    if geometric and lo > 0:
        cells = np.geomspace(lo, hi, n_cells + 1)
    else:
        cells = np.linspace(lo, hi, n_cells + 1)
    vals = [integrate.quad(f, x0, x1, epsabs=0, epsrel=1e-10, limit=200)[0] / (x1 - x0)
            for x0, x1 in zip(cells[:-1], cells[1:])]
    bp = list(cells)
    vals = list(vals)
    if lo > 0:
        bp = [0.0] + bp
        vals = [0.0] + vals
    if hi < 1:
        bp = bp + [1.0]
        vals = vals + [0.0]
    return PiecewiseConstantFunction(bp, np.maximum(vals, 0.0))


# ---------------------------------------------------------------------------
# Optimal associate norm
# ---------------------------------------------------------------------------


def inner_associate_function(ctx: HardyContext, m: int, g: PiecewiseConstantFunction) -> Callable:
    """u(t) = (1/I(t)) * integral_0^t g*(s) (integral_s^t dr/I)^(m-1) ds."""
    gs = decreasing_rearrangement(g)
    b, v = gs.breakpoints, gs.values

    def u(t: float) -> float:
        if m == 1:
            return float(integral_of_rearrangement(gs, t)) / float(ctx.I(t))
        Gt = float(ctx.G(t))
        total = 0.0
        for x0, x1, val in zip(b[:-1], b[1:], v):
            if x0 >= t or val == 0:
                if x0 >= t:
                    break
                continue
            hi = min(x1, t)

            def w(s):
                return (float(ctx.G(s)) - Gt) ** (m - 1)

            total += val * integrate.quad(w, x0, hi, epsabs=0, epsrel=1e-11, limit=200)[0]
        return total / float(ctx.I(t))

    return u


@dataclass(frozen=True)
class OptimalAssociateResult:
    value: float
    associate: str
    exact_associate: bool
    label: str

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def optimal_associate_norm(ctx: HardyContext, spec: RiNormSpec, g: PiecewiseConstantFunction,
                           m: int | None = None, n_cells: int = 240,
                           floor: float = 1e-10) -> OptimalAssociateResult:
    """Norm of the inner function u in the associate space of ``spec``.

    u is replaced by its cell averages on a geometric grid over (floor, 1)
    refined by the breakpoints of g*, and the associate norm is evaluated
    on that step function.
    """
    m = ctx.m if m is None else m
    assoc = associate_spec(spec)
    label = ("optimal associate norm" if ctx.optimality_asserted
             else "formula value, optimality not asserted")
    if g.sup() == 0:
        return OptimalAssociateResult(0.0, assoc.spec.label(), assoc.exact, label)
    u = inner_associate_function(ctx, m, g)
    gs = decreasing_rearrangement(g)
    cells = np.unique(np.concatenate((np.geomspace(floor, 1.0, n_cells + 1),
                                      gs.breakpoints[(gs.breakpoints > floor)])))
    vals = []
    for x0, x1 in zip(cells[:-1], cells[1:]):
        vals.append(integrate.quad(u, x0, x1, epsabs=0, epsrel=1e-8, limit=100)[0] / (x1 - x0))
    bp = np.concatenate(([0.0], cells))
    step = PiecewiseConstantFunction(bp, np.concatenate(([vals[0]], vals)))
    value = eval_norm(assoc.spec, step)
    return OptimalAssociateResult(float(value), assoc.spec.label(), assoc.exact, label)


# ---------------------------------------------------------------------------
# Pointwise bound
# ---------------------------------------------------------------------------


def lemma_constant(m: int, k: int) -> float:
    """C(m, k) = max((1/k + 1/(m-k)) / (k-1)!, 1/k!)."""
    if not 1 <= k <= m - 1:
        raise ValueError("need 1 <= k <= m-1")
    return max((1.0 / k + 1.0 / (m - k)) / math.factorial(k - 1), 1.0 / math.factorial(k))


@dataclass(frozen=True)
class BoundReport:
    m: int
    k: int
    constant: float
    worst_ratio: float
    worst_t: float | None
    n_points: int
    holds: bool

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_admissible(ctx: HardyContext, gs: PiecewiseConstantFunction, tol: float = 1e-12):
    psis = np.asarray(ctx.psi(gs.breakpoints[1:]), dtype=float)
    with np.errstate(invalid="ignore"):
        prod = np.where(gs.values > 0, gs.values * psis, 0.0)
    bad = np.nonzero(prod > 1.0 + tol)[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"g* exceeds 1/psi on piece {i}: g* = {gs.values[i]:.6g}, "
            f"1/psi = {1.0 / psis[i]:.6g}"
        )


def pointwise_bound_check(ctx: HardyContext, g: PiecewiseConstantFunction, k: int,
                          grid: np.ndarray | None = None) -> BoundReport:
    """Check H^k g*(t) <= C(m,k) g*(t)^(1-k/m) on a log grid, for g* <= 1/psi."""
    m = ctx.m
    if m < 2:
        raise ValueError("the pointwise bound needs m >= 2")
    C = lemma_constant(m, k)
    gs = decreasing_rearrangement(g)
    _check_admissible(ctx, gs)
    if grid is None:
        grid = np.geomspace(1e-10, 1.0, 301)[:-1]
    bp = gs.breakpoints[1:-1]
    extra = np.concatenate((bp * (1 - 1e-9), bp * (1 + 1e-9)))
    t = np.unique(np.concatenate((grid, extra[(extra > 0) & (extra < 1)])))
    lhs = apply_Hk(ctx, k, gs, t)
    rhs = C * gs(t) ** (1.0 - k / m)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 0.0))
    i = int(np.argmax(ratio))
    worst = float(ratio[i])
    return BoundReport(m, k, C, worst, float(t[i]) if worst > 0 else None, int(t.size),
                       bool(worst <= 1.0 + 1e-12))


def random_admissible(ctx: HardyContext, rng: np.random.Generator,
                      max_pieces: int = 12, scale: float = 1.0) -> PiecewiseConstantFunction:
    """Random non-increasing step function clipped below 1/psi."""
    g = decreasing_rearrangement(random_step_function(rng, max_pieces=max_pieces, scale=scale))
    cap = 1.0 / np.asarray(ctx.psi(g.breakpoints[1:]), dtype=float)
    vals = np.minimum(g.values, cap)
    # clipping keeps g* non-increasing since the cap is non-increasing
    return PiecewiseConstantFunction(g.breakpoints, vals)


def admissible_envelope(ctx: HardyContext, n_cells: int = 200,
                        floor: float = 1e-10) -> PiecewiseConstantFunction:
    """Step version of min(1, 1/psi): value min(1, 1/psi(right end)) on each cell."""
    cells = np.concatenate(([0.0], np.geomspace(floor, 1.0, n_cells + 1)))
    cap = 1.0 / np.asarray(ctx.psi(cells[1:]), dtype=float)
    return PiecewiseConstantFunction(cells, np.minimum(1.0, cap))
