import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ri_sobolev.rearrangement import (
    PiecewiseConstantFunction,
    constant,
    decreasing_rearrangement,
    distribution,
    hl_pairing,
    indicator,
    integral_of_rearrangement,
    level_mean,
    product,
    random_step_function,
)

from conftest import step_functions


def brute_rearrangement(f, t, levels=4000):
    """u*(t) = sup{lam : |{f > lam}| > t} on a fine level grid.

    The sup is not attained, so it is read off as the first grid level
    where the distribution function has dropped to t or below.
    """
    lam = np.unique(np.concatenate((np.linspace(0.0, f.sup(), levels), f.values)))
    mu = distribution(f, lam)
    return lam[np.argmax(mu <= t)]


class TestConstruction:
    def test_rejects_bad_partitions(self):
        with pytest.raises(ValueError):
            PiecewiseConstantFunction([0.0, 0.5], [1.0])
        with pytest.raises(ValueError):
            PiecewiseConstantFunction([0.0, 0.6, 0.5, 1.0], [1, 2, 3])
        with pytest.raises(ValueError):
            PiecewiseConstantFunction([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            PiecewiseConstantFunction([0.0, 1.0], [-1.0])
        with pytest.raises(ValueError):
            PiecewiseConstantFunction([0.0, 1.0], [np.inf])

    def test_measure_drift(self):
        f = PiecewiseConstantFunction([0.0, 0.5, 1.0 + 5e-13], [1.0, 2.0])
        assert f.breakpoints[-1] == 1.0
        with pytest.raises(ValueError, match="drift"):
            PiecewiseConstantFunction([0.0, 0.5, 1.0 + 1e-9], [1.0, 2.0])

    def test_json_roundtrip(self):
        f = PiecewiseConstantFunction([0, 0.25, 1], [2.0, 0.5])
        g = PiecewiseConstantFunction.from_json(f.to_json())
        assert g.equals(f)
        assert json.loads(f.to_json()) == {"breakpoints": [0.0, 0.25, 1.0], "values": [2.0, 0.5]}


class TestRearrangement:
    def test_sorts_thirds(self):
        f = PiecewiseConstantFunction([0, 1 / 3, 2 / 3, 1], [3, 1, 2])
        fs = decreasing_rearrangement(f)
        assert fs.values.tolist() == [3.0, 2.0, 1.0]
        np.testing.assert_allclose(fs.breakpoints, [0, 1 / 3, 2 / 3, 1], atol=1e-15)

    def test_decreasing_input_unchanged(self):
        f = PiecewiseConstantFunction([0, 0.1, 0.7, 1], [5, 2, 0])
        assert decreasing_rearrangement(f).equals(f)

    def test_ties_merge(self):
        f = PiecewiseConstantFunction([0, 0.2, 0.5, 1], [1, 2, 1])
        fs = decreasing_rearrangement(f)
        assert fs.values.tolist() == [2.0, 1.0]
        np.testing.assert_allclose(fs.breakpoints, [0, 0.3, 1])

    def test_brute_force_oracle(self, rng):
        for _ in range(10_000 // 50):
            f = random_step_function(rng)
            fs = decreasing_rearrangement(f)
            for t in rng.uniform(0.0, 1.0, size=50):
                # stay off the jump points, where the right-continuous definition is ambiguous
                if np.min(np.abs(fs.breakpoints - t)) < 1e-9:
                    continue
                assert fs(t) == pytest.approx(brute_rearrangement(f, t), abs=1e-12)

    @given(step_functions())
    def test_nonincreasing_and_idempotent(self, f):
        fs = decreasing_rearrangement(f)
        assert fs.is_nonincreasing()
        assert decreasing_rearrangement(fs).equals(fs)

    @given(step_functions())
    def test_equimeasurable(self, f):
        fs = decreasing_rearrangement(f)
        lam = np.unique(np.concatenate(([0.0], f.values, fs.values)))
        np.testing.assert_allclose(distribution(f, lam), distribution(fs, lam), atol=1e-12)

    @given(step_functions(), st.floats(0.0, 5.0))
    def test_order_preserving(self, f, c):
        # g = f + c dominates f pointwise
        g = PiecewiseConstantFunction(f.breakpoints, f.values + c)
        fs, gs = decreasing_rearrangement(f), decreasing_rearrangement(g)
        t = np.linspace(0.0005, 0.9995, 400)
        assert np.all(fs(t) <= gs(t) + 1e-12)


class TestLevelMean:
    def test_constant(self):
        for t in (0.01, 0.5, 0.99):
            assert level_mean(constant(3.5), t) == pytest.approx(3.5, rel=1e-15)

    def test_indicator(self):
        assert level_mean(indicator(0.0, 0.5), 0.75) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_domain(self):
        for t in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                level_mean(constant(1.0), t)

    @given(step_functions(), st.floats(0.001, 0.999))
    def test_dominates_rearrangement(self, f, t):
        assert level_mean(f, t) >= float(decreasing_rearrangement(f)(t)) * (1 - 1e-12)

    @given(step_functions())
    def test_total_integral(self, f):
        assert float(integral_of_rearrangement(f, 1.0)) == pytest.approx(f.integral(), rel=1e-12, abs=1e-14)


class TestPairing:
    def test_disjoint(self):
        lhs, rhs = hl_pairing(indicator(0.0, 0.5), indicator(0.5, 1.0))
        assert lhs == 0.0
        assert rhs == pytest.approx(0.5)

    def test_equality_for_decreasing(self):
        f = PiecewiseConstantFunction([0, 0.3, 1], [2, 1])
        lhs, rhs = hl_pairing(f, f)
        assert lhs == pytest.approx(rhs, rel=1e-15)

    def test_random_pairs(self, rng):
        for _ in range(10_000):
            f, g = random_step_function(rng), random_step_function(rng)
            lhs, rhs = hl_pairing(f, g)
            assert lhs <= rhs * (1 + 1e-12) + 1e-15

    @given(step_functions(), step_functions())
    def test_product_rearrangement(self, f, g):
        fg = product(f, g)
        fs, gs = decreasing_rearrangement(f), decreasing_rearrangement(g)
        fsgs = product(fs, gs)
        t = np.unique(np.concatenate((fg.breakpoints, fsgs.breakpoints)))[1:]
        lhs = integral_of_rearrangement(fg, t)
        rhs = integral_of_rearrangement(fsgs, t)
        assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)
