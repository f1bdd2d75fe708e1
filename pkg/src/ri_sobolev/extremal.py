"""Extremal functions on the worst-case domain and the falsification tools built on them.

Functions on the domain of revolution depend on the axial coordinate
only through the measure coordinate s = M(x_n).  Derivative magnitudes of
the extremal pair are then one-dimensional Hardy images, and
equimeasurability lets every norm be computed on (0, 1).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .criteria import check_fundamental, random_probe
from .hardy import HardyContext, apply_Hk
from .isoperimetry import DomainProfile
from .norms import RiNormSpec, eval_norm
from .rearrangement import PiecewiseConstantFunction, distribution, product
from .verdict import jsonable

__all__ = [
    "ExtremalPair",
    "derivative_profile",
    "leibniz_product_profile",
    "DomainSampler",
    "EquimeasurabilityReport",
    "equimeasurability_check",
    "TwoHardysReport",
    "verify_two_hardys",
    "adversarial_pair",
    "BlowupReport",
    "sup_blowup_witness",
    "thread_count",
]


def thread_count() -> int:
    """Worker threads for Monte Carlo; RI_SOBOLEV_THREADS caps the default of 4."""
    env = os.environ.get("RI_SOBOLEV_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"RI_SOBOLEV_THREADS must be an integer, got {env!r}") from None
    return max(1, min(4, os.cpu_count() or 1))


class _Report:
    def to_dict(self) -> dict:
        return jsonable(self.__dict__)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# Extremal pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalPair:
    """Generators f, g of the extremal functions u, v on the worst-case domain.

    u(x) = H^m f(M(x_n)) and v(x) = H^m g(M(x_n)).
    """

    f: PiecewiseConstantFunction
    g: PiecewiseConstantFunction
    m: int
    ctx: HardyContext
    domain: DomainProfile | None = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if np.any(self.f.values < 0) or np.any(self.g.values < 0):
            raise ValueError("generators must be nonnegative")

    def generator(self, which: str) -> PiecewiseConstantFunction:
        if which == "u":
            return self.f
        if which == "v":
            return self.g
        raise ValueError("which must be 'u' or 'v'")


def derivative_profile(pair: ExtremalPair, k: int, which: str = "u") -> Callable:
    """s -> |nabla^k u| at measure coordinate s, i.e. H^(m-k) of the generator."""
    if not 0 <= k <= pair.m:
        raise ValueError("need 0 <= k <= m")
    gen = pair.generator(which)
    j = pair.m - k

    def prof(s):
        return apply_Hk(pair.ctx, j, gen, s)

    return prof


def leibniz_product_profile(pair: ExtremalPair, t) -> float | np.ndarray:
    """|nabla^m (u v)| at measure coordinate t: sum_k C(m,k) H^(m-k) f H^k g."""
    m = pair.m
    total = 0.0
    for k in range(m + 1):
        total = total + math.comb(m, k) * apply_Hk(pair.ctx, m - k, pair.f, t) * apply_Hk(
            pair.ctx, k, pair.g, t)
    return total


# ---------------------------------------------------------------------------
# Equimeasurability by Monte Carlo
# ---------------------------------------------------------------------------


class DomainSampler:
    """Uniform points of Omega_I by rejection from cylinders over the axial table.

    Each table cell (r_k, r_k+1) carries a cylinder whose radius is the
    larger end value of eta; the profile is linear in between, so the
    cylinders cover the solid and accepted points are uniform in it.
    """

    def __init__(self, domain: DomainProfile):
        self.domain = domain
        self.dim = domain.n - 1
        r = np.asarray(domain.r, dtype=float)
        eta = np.asarray(domain.eta, dtype=float)
        self._r0 = r[:-1]
        self._dr = np.diff(r)
        self._e0 = eta[:-1]
        self._e1 = eta[1:]
        self._cap = np.maximum(self._e0, self._e1)
        w = self._dr * self._cap**self.dim
        self._cum = np.cumsum(w) / w.sum()
        # acceptance rate, used to size the proposal batches
        exact = 0.5 * self._dr * (self._e0**self.dim + self._e1**self.dim)
        self._accept = float(exact.sum() / w.sum())

    def _propose(self, rng: np.random.Generator, size: int) -> np.ndarray:
        k = np.minimum(np.searchsorted(self._cum, rng.uniform(size=size)), self._cum.size - 1)
        u = rng.uniform(size=size)
        r = self._r0[k] + u * self._dr[k]
        eta = self._e0[k] + u * (self._e1[k] - self._e0[k])
        # radius of a uniform point in the (n-1)-ball of radius cap
        if self.dim == 1:
            rad = np.abs(rng.uniform(-1.0, 1.0, size=size)) * self._cap[k]
        else:
            rad = self._cap[k] * rng.uniform(size=size) ** (1.0 / self.dim)
        return r[rad < eta]

    def axial(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """x_n coordinates of ``size`` uniform points of the solid."""
        out: list[np.ndarray] = []
        have = 0
        while have < size:
            need = size - have
            batch = self._propose(rng, int(need / self._accept * 1.05) + 16)
            out.append(batch)
            have += batch.size
        return np.concatenate(out)[:size]

    def measure_coordinates(self, n_samples: int, seed: int = 0, chunk: int = 125_000,
                            threads: int | None = None) -> np.ndarray:
        """M(x_n) at uniform points; chunks use spawned seeds so thread count never matters."""
        n_chunks = max(1, math.ceil(n_samples / chunk))
        seeds = np.random.SeedSequence(seed).spawn(n_chunks)
        sizes = [min(chunk, n_samples - i * chunk) for i in range(n_chunks)]

        def work(i: int) -> np.ndarray:
            rng = np.random.default_rng(seeds[i])
            return self.domain.M_of(self.axial(rng, sizes[i]))

        with ThreadPoolExecutor(max_workers=threads or thread_count()) as pool:
            parts = list(pool.map(work, range(n_chunks)))
        return np.concatenate(parts)


@dataclass(frozen=True)
class EquimeasurabilityReport(_Report):
    n_samples: int
    ks_distance: float
    worst_level: float | None
    seed: int


def ks_step_distance(F: np.ndarray, h: PiecewiseConstantFunction) -> tuple[float, float | None]:
    """sup over levels of |P(F > lam) - |{h > lam}||; both are steps jumping at h's values."""
    levels = np.unique(h.values)
    Fs = np.sort(F)
    emp = 1.0 - np.searchsorted(Fs, levels, side="right") / Fs.size
    exact = distribution(h, levels)
    diff = np.abs(emp - exact)
    i = int(np.argmax(diff))
    return float(diff[i]), float(levels[i])


def equimeasurability_check(domain: DomainProfile, h: PiecewiseConstantFunction,
                            n_samples: int = 1_000_000, seed: int = 0,
                            measure_samples: np.ndarray | None = None) -> EquimeasurabilityReport:
    """KS distance between F = h(M(x_n)) at uniform points of Omega_I and h.

    ``measure_samples`` lets several h share one set of sampled points.
    """
    if measure_samples is None:
        measure_samples = DomainSampler(domain).measure_coordinates(n_samples, seed)
    F = h(np.clip(measure_samples, 0.0, 1.0))
    ks, lvl = ks_step_distance(F, h)
    return EquimeasurabilityReport(int(measure_samples.size), ks, lvl, seed)


# ---------------------------------------------------------------------------
# Products of two Hardy images
# ---------------------------------------------------------------------------


def _image_step(ctx: HardyContext, k: int, g: PiecewiseConstantFunction,
                cells: np.ndarray) -> PiecewiseConstantFunction:
    """H^k g sampled at geometric cell midpoints of ``cells`` (which start at 0 and end at 1)."""
    mids = np.sqrt(np.maximum(cells[:-1], cells[1] * 1e-3) * cells[1:])
    return PiecewiseConstantFunction(cells, apply_Hk(ctx, k, g, mids))


def _product_cells(*extra: float, floor: float = 1e-14, n: int = 420) -> np.ndarray:
    pts = np.concatenate((np.geomspace(floor, 1.0, n), np.asarray(extra, dtype=float)))
    pts = np.unique(pts[(pts > 0) & (pts <= 1.0)])
    return np.concatenate(([0.0], pts))


def two_hardys_ratio(ctx: HardyContext, k: int, norm: RiNormSpec,
                     f: PiecewiseConstantFunction, g: PiecewiseConstantFunction,
                     cells: np.ndarray | None = None) -> float:
    """||H^k f H^(m-k) g||_X / (||f||_X ||g||_X); 0 when f or g vanishes."""
    nf, ng = eval_norm(norm, f), eval_norm(norm, g)
    if nf == 0 or ng == 0:
        return 0.0
    if cells is None:
        cells = _product_cells(*f.breakpoints[1:-1], *g.breakpoints[1:-1])
    prod = product(_image_step(ctx, k, f, cells), _image_step(ctx, ctx.m - k, g, cells))
    return eval_norm(norm, prod) / (nf * ng)


def adversarial_pair(ctx: HardyContext, k: int, eps: float, a: float | None = None,
                     n_cells: int = 160) -> tuple[PiecewiseConstantFunction, PiecewiseConstantFunction, int]:
    """Generators chi_(eps,a) and chi_(eps,a) Psi_a^e, e = (2k-m) m/(m-k), Psi_a = int_t^a dr/I.

    Needs m <= 2k; for m > 2k the roles of k and m-k are swapped, and the
    returned k is the one to use for the first generator.  The default
    a = sqrt(eps) lets the pair concentrate at 0 as eps shrinks.
    """
    m = ctx.m
    if k > m - k:
        kk = k
    else:
        kk = m - k
    a = math.sqrt(eps) if a is None else a
    if not 0 < eps < a <= 1:
        raise ValueError("need 0 < eps < a <= 1")
    cells = np.concatenate(([0.0], np.geomspace(eps, a, n_cells + 1)))
    if a < 1:
        cells = np.concatenate((cells, [1.0]))
    inside = np.zeros(cells.size - 1, dtype=bool)
    inside[1:n_cells + 1] = True
    f = PiecewiseConstantFunction(cells, inside.astype(float))
    e = (2 * kk - m) * m / (m - kk) if m != kk else 0.0
    mids = np.sqrt(cells[1:n_cells + 1] * cells[2:n_cells + 2])
    base = np.asarray(ctx.G(mids), dtype=float) - float(ctx.G(a))
    vals = np.zeros(cells.size - 1)
    vals[1:n_cells + 1] = np.maximum(base, 0.0) ** e
    return f, PiecewiseConstantFunction(cells, vals), kk


@dataclass(frozen=True)
class TwoHardysReport(_Report):
    m: int
    k: int
    norm: str
    fundamental: str
    trials: int
    max_random_ratio: float
    eps: tuple
    adversarial_ratios: tuple
    trend: str
    slope: float | None


def verify_two_hardys(ctx: HardyContext, k: int, norm: RiNormSpec, trials: int = 200,
                      rng: np.random.Generator | None = None,
                      eps_exponents: tuple = (2, 4, 6, 8, 10, 12)) -> TwoHardysReport:
    """Random and adversarial ratios ||H^k f H^(m-k) g|| / (||f|| ||g||).

    The adversarial ratios are reported for eps = 10^-j; the trend is
    ``diverges`` when they grow along the last three values with a
    log-log slope above 0.05 against log(1/eps), ``bounded`` otherwise.
    """
    m = ctx.m
    if not 1 <= k <= m - 1:
        raise ValueError("need 1 <= k <= m - 1")
    rng = np.random.default_rng(0) if rng is None else rng
    fund = check_fundamental(ctx.I, m, norm)
    worst = 0.0
    for _ in range(trials):
        f, g = random_probe(rng), random_probe(rng)
        worst = max(worst, two_hardys_ratio(ctx, k, norm, f, g))
    eps = tuple(10.0**-j for j in eps_exponents)
    ratios = []
    for e in eps:
        f, g, kk = adversarial_pair(ctx, k, e)
        ratios.append(two_hardys_ratio(ctx, kk, norm, f, g))
    r = np.asarray(ratios)
    x = np.log(np.log(1.0 / np.asarray(eps)))
    slope = float(np.polyfit(x[-3:], np.log(r[-3:]), 1)[0]) if np.all(r[-3:] > 0) else None
    grows = bool(np.all(np.diff(r[-3:]) > 0))
    trend = "diverges" if grows and slope is not None and slope > 0.05 else "bounded"
    return TwoHardysReport(m, k, norm.label(), fund.outcome, trials, worst, eps,
                           tuple(ratios), trend, slope)


# ---------------------------------------------------------------------------
# Blow-up witness for candidate algebra norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupReport(_Report):
    C: float
    norm_w: float
    sup_w: float
    level_set_measure: float
    rows: tuple
    incompatible_at: int | None


def sup_blowup_witness(norm_oracle: Callable[[PiecewiseConstantFunction], float],
                       w: PiecewiseConstantFunction, C: float, jmax: int = 12,
                       embedding_constant: float = 1.0) -> BlowupReport:
    """Powers w^j against ||w^j|| <= C^(j-1) ||w||^j and a weak-type lower bound.

    With lam_j = (2 C ||w||)^j the weak-type bound reads
    ||w^j|| >= c lam_j |{w > 2C ||w||}|, c the embedding constant of the
    norm into weak L^1.  The two become incompatible once
    c 2^j |E| > 1/C; the first such j is reported.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    nw = float(norm_oracle(w))
    sup_w = w.sup()
    if not sup_w > 2.0 * C * nw:
        raise ValueError(
            f"w is not a witness: sup w = {sup_w:.6g} must exceed 2 C ||w|| = {2.0 * C * nw:.6g}"
        )
    E = float(distribution(w, 2.0 * C * nw)[0])
    rows = []
    first = None
    for j in range(1, jmax + 1):
        upper = C ** (j - 1) * nw**j
        lower = embedding_constant * (2.0 * C * nw) ** j * E
        actual = float(norm_oracle(w.power(j)))
        rows.append({"j": j, "norm": actual, "algebra_upper": upper, "weak_lower": lower})
        if first is None and lower > upper:
            first = j
    return BlowupReport(C, nw, sup_w, E, tuple(rows), first)
