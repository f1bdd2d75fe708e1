"""Step functions on (0, 1) and their decreasing rearrangements.

Every function handled by the package is a nonnegative step function on
the unit interval.  Rearrangements, level means and pairings are then
computed exactly from the breakpoints and values, with no quadrature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PiecewiseConstantFunction",
    "decreasing_rearrangement",
    "level_mean",
    "hl_pairing",
    "integral_of_rearrangement",
    "distribution",
    "common_refinement",
    "product",
    "indicator",
    "constant",
    "random_step_function",
]

_MEASURE_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PiecewiseConstantFunction:
    """Nonnegative step function on (0, 1).

    ``values[i]`` is the value on ``(breakpoints[i], breakpoints[i+1])``.
    Breakpoints must start at 0 and end at 1 up to ``1e-12``; the end
    points are then snapped so that interval lengths sum to exactly 1.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float).ravel()
        vals = np.array(self.values, dtype=float).ravel()
        if bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if vals.size != bp.size - 1:
            raise ValueError("values must have one entry per interval")
        if not np.all(np.isfinite(bp)):
            raise ValueError("breakpoints must be finite")
        if abs(bp[0]) > _MEASURE_TOL or abs(bp[-1] - 1.0) > _MEASURE_TOL:
            raise ValueError(
                "breakpoints must start at 0 and end at 1 (measure drift "
                f"{max(abs(bp[0]), abs(bp[-1] - 1.0)):.3g} exceeds 1e-12)"
            )
        bp[0], bp[-1] = 0.0, 1.0
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("values must be finite and nonnegative")
        object.__setattr__(self, "breakpoints", _frozen(bp))
        object.__setattr__(self, "values", _frozen(vals))

    # -- basic accessors -------------------------------------------------
    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def n_pieces(self) -> int:
        return self.values.size

    def __call__(self, t):
        """Evaluate at ``t``; intervals are taken closed on the left."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        idx = np.clip(idx, 0, self.n_pieces - 1)
        return self.values[idx]

    def integral(self) -> float:
        return float(np.dot(self.values, self.lengths))

    def sup(self) -> float:
        return float(self.values.max())

    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) <= 0))

    def power(self, p: float) -> "PiecewiseConstantFunction":
        return PiecewiseConstantFunction(self.breakpoints, self.values**p)

    def scale(self, c: float) -> "PiecewiseConstantFunction":
        if c < 0:
            raise ValueError("scale must be nonnegative")
        return PiecewiseConstantFunction(self.breakpoints, self.values * c)

    def canonical(self) -> "PiecewiseConstantFunction":
        """Merge adjacent intervals carrying equal values."""
        keep = np.concatenate(([True], self.values[1:] != self.values[:-1]))
        bp = np.concatenate((self.breakpoints[:-1][keep], [1.0]))
        return PiecewiseConstantFunction(bp, self.values[keep])

    def equals(self, other: "PiecewiseConstantFunction") -> bool:
        return (
            self.breakpoints.shape == other.breakpoints.shape
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewiseConstantFunction":
        return cls(d["breakpoints"], d["values"])

    @classmethod
    def from_json(cls, s: str) -> "PiecewiseConstantFunction":
        return cls.from_dict(json.loads(s))

    def __repr__(self) -> str:
        return (
            f"PiecewiseConstantFunction(breakpoints={self.breakpoints.tolist()}, "
            f"values={self.values.tolist()})"
        )


def indicator(a: float, b: float, height: float = 1.0) -> PiecewiseConstantFunction:
    """``height`` times the characteristic function of (a, b)."""
    if not 0.0 <= a < b <= 1.0:
        raise ValueError("need 0 <= a < b <= 1")
    bp = [0.0]
    vals = []
    if a > 0:
        bp.append(a)
        vals.append(0.0)
    vals.append(height)
    if b < 1:
        bp.append(b)
        vals.append(0.0)
    bp.append(1.0)
    return PiecewiseConstantFunction(bp, vals)


def constant(c: float) -> PiecewiseConstantFunction:
    return PiecewiseConstantFunction([0.0, 1.0], [c])


def decreasing_rearrangement(f: PiecewiseConstantFunction) -> PiecewiseConstantFunction:
    """Exact decreasing rearrangement f* in canonical form.

    Pieces are sorted by value (descending, ties kept in original order)
    and adjacent equal values are merged.
    """
    vals = f.values
    order = np.argsort(-vals, kind="stable")
    if np.array_equal(order, np.arange(vals.size)):
        # Already non-increasing: keep the original breakpoints exactly.
        return f.canonical()
    lengths = f.lengths[order]
    sorted_vals = vals[order]
    bp = np.minimum(np.concatenate(([0.0], np.cumsum(lengths))), 1.0)
    bp[-1] = 1.0
    # pieces narrower than the spacing of floats near their position vanish
    keep = np.diff(bp) > 0
    if not keep.all():
        bp = np.concatenate(([0.0], bp[1:][keep]))
        sorted_vals = sorted_vals[keep]
    return PiecewiseConstantFunction(bp, sorted_vals).canonical()


def integral_of_rearrangement(f: PiecewiseConstantFunction, t) -> np.ndarray:
    """F(t) = integral of f* over (0, t), exact, vectorized in t."""
    fs = decreasing_rearrangement(f)
    t = np.asarray(t, dtype=float)
    cum = np.concatenate(([0.0], np.cumsum(fs.values * fs.lengths)))
    idx = np.clip(np.searchsorted(fs.breakpoints, t, side="right") - 1, 0, fs.n_pieces - 1)
    return cum[idx] + fs.values[idx] * (t - fs.breakpoints[idx])


def level_mean(f: PiecewiseConstantFunction, t: float) -> float:
    """f**(t) = (1/t) * integral of f* over (0, t)."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    return float(integral_of_rearrangement(f, t)) / t


def distribution(f: PiecewiseConstantFunction, lam) -> np.ndarray:
    """Measure of {f > lam}, vectorized in lam."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    mask = f.values[None, :] > lam[:, None]
    out = (mask * f.lengths[None, :]).sum(axis=1)
    return out


def common_refinement(*fs: PiecewiseConstantFunction) -> np.ndarray:
    bp = np.unique(np.concatenate([f.breakpoints for f in fs]))
    # Collapse near-duplicates produced by independent cumulative sums.
    keep = np.concatenate(([True], np.diff(bp) > 1e-15))
    bp = bp[keep]
    bp[0], bp[-1] = 0.0, 1.0
    return bp


def _values_on(f: PiecewiseConstantFunction, bp: np.ndarray) -> np.ndarray:
    mids = 0.5 * (bp[:-1] + bp[1:])
    return f(mids)


def product(f: PiecewiseConstantFunction, g: PiecewiseConstantFunction) -> PiecewiseConstantFunction:
    """Pointwise product on the common refinement."""
    bp = common_refinement(f, g)
    return PiecewiseConstantFunction(bp, _values_on(f, bp) * _values_on(g, bp))


def hl_pairing(
    f: PiecewiseConstantFunction, g: PiecewiseConstantFunction
) -> tuple[float, float]:
    """Return (integral of f g, integral of f* g*), both exact."""
    lhs = product(f, g).integral()
    rhs = product(decreasing_rearrangement(f), decreasing_rearrangement(g)).integral()
    return lhs, rhs


def random_step_function(
    rng: np.random.Generator, n_pieces: int | None = None, max_pieces: int = 12,
    scale: float = 1.0, zero_prob: float = 0.15,
) -> PiecewiseConstantFunction:
    """Random step function used by the randomized test suites."""
    k = int(n_pieces or rng.integers(1, max_pieces + 1))
    cuts = np.sort(rng.uniform(0, 1, size=k - 1))
    bp = np.concatenate(([0.0], cuts, [1.0]))
    # Guard against coincident cuts.
    if np.any(np.diff(bp) <= 1e-9):
        bp = np.linspace(0, 1, k + 1)
    vals = rng.exponential(scale, size=k)
    vals[rng.uniform(size=k) < zero_prob] = 0.0
    return PiecewiseConstantFunction(bp, vals)
