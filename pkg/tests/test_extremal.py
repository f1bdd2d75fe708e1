import math

import numpy as np
import pytest
from hypothesis import given

from ri_sobolev.extremal import (
    DomainSampler,
    ExtremalPair,
    derivative_profile,
    equimeasurability_check,
    ks_step_distance,
    leibniz_product_profile,
    sup_blowup_witness,
    thread_count,
    two_hardys_ratio,
    verify_two_hardys,
)
from ri_sobolev.hardy import HardyContext
from ri_sobolev.isoperimetry import IsoperimetricProfile, build_domain_profile
from ri_sobolev.norms import Lebesgue, eval_norm
from ri_sobolev.rearrangement import PiecewiseConstantFunction, constant, indicator

from conftest import step_functions

T = np.geomspace(1e-6, 0.9, 25)


@pytest.fixture(scope="module")
def half_domain():
    return build_domain_profile(IsoperimetricProfile.power(0.5, 2))


def pair(m, f=None, g=None, alpha=0.6):
    ctx = HardyContext(IsoperimetricProfile.power(alpha), m)
    return ExtremalPair(f or constant(1.0), g or constant(1.0), m, ctx)


class TestDerivativeProfile:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_iterated_constant(self, m):
        # H^j 1 = G^j / j! with G(t) = int_t^1 ds / I(s)
        P = pair(m)
        G = P.ctx.G(T)
        for k in range(m + 1):
            j = m - k
            np.testing.assert_allclose(derivative_profile(P, k)(T), G**j / math.factorial(j), rtol=1e-8)

    @given(step_functions(allow_zero=False))
    def test_top_order_is_generator(self, f):
        P = pair(2, f=f)
        np.testing.assert_allclose(derivative_profile(P, 2)(T), f(T))

    def test_rejects(self):
        P = pair(2)
        with pytest.raises(ValueError):
            derivative_profile(P, 3)
        with pytest.raises(ValueError):
            derivative_profile(P, 0, which="w")
        with pytest.raises(ValueError):
            pair(2, f=PiecewiseConstantFunction([0, 1], [-1.0]))
        with pytest.raises(ValueError):
            pair(0)


class TestLeibniz:
    def test_zero_factor(self):
        P = pair(2, g=constant(0.0))
        np.testing.assert_array_equal(leibniz_product_profile(P, T), 0.0)

    def test_first_order(self):
        P = pair(1)
        np.testing.assert_allclose(leibniz_product_profile(P, T), 2 * P.ctx.G(T), rtol=1e-8)

    @given(step_functions(allow_zero=False), step_functions(allow_zero=False))
    def test_dominates_each_term(self, f, g):
        P = pair(2, f=f, g=g)
        total = leibniz_product_profile(P, T)
        for k in range(3):
            term = math.comb(2, k) * derivative_profile(P, k, "u")(T) * derivative_profile(P, 2 - k, "v")(T)
            assert np.all(total >= term * (1 - 1e-12))


class TestEquimeasurability:
    def test_sampler_uniform_in_measure(self, half_domain):
        s = DomainSampler(half_domain).measure_coordinates(200_000, seed=3)
        assert s.min() >= 0 and s.max() <= 1 + 1e-9
        # M(x_n) of a uniform point is uniform on (0, 1)
        for a in (0.1, 0.25, 0.5, 0.9):
            assert abs(np.mean(s < a) - a) < 3 / math.sqrt(s.size)

    @pytest.mark.parametrize("a", [0.05, 0.3, 0.7])
    def test_indicator(self, half_domain, a):
        rep = equimeasurability_check(half_domain, indicator(0, a, 2.0), n_samples=100_000, seed=1)
        assert rep.ks_distance < 3 / math.sqrt(rep.n_samples)

    def test_constant_exact(self, half_domain):
        rep = equimeasurability_check(half_domain, constant(5.0), n_samples=10_000)
        assert rep.ks_distance == 0.0

    def test_shared_samples(self, half_domain):
        s = DomainSampler(half_domain).measure_coordinates(20_000, seed=2)
        h = PiecewiseConstantFunction([0, 0.2, 0.6, 1], [3.0, 1.0, 0.5])
        a = equimeasurability_check(half_domain, h, measure_samples=s)
        assert a.n_samples == 20_000 and a.worst_level in (0.5, 1.0, 3.0)

    def test_ks_exact_sample(self):
        h = PiecewiseConstantFunction([0, 0.5, 1], [2.0, 1.0])
        F = np.array([2.0, 1.0, 1.0, 1.0])
        ks, lvl = ks_step_distance(F, h)
        assert ks == pytest.approx(0.25) and lvl == 1.0

    def test_thread_count_independent(self, half_domain, monkeypatch):
        sampler = DomainSampler(half_domain)
        a = sampler.measure_coordinates(300_000, seed=7, threads=1)
        b = sampler.measure_coordinates(300_000, seed=7, threads=4)
        np.testing.assert_array_equal(a, b)
        monkeypatch.setenv("RI_SOBOLEV_THREADS", "3")
        assert thread_count() == 3
        monkeypatch.setenv("RI_SOBOLEV_THREADS", "x")
        with pytest.raises(ValueError):
            thread_count()


class TestTwoHardys:
    def test_zero_ratio(self):
        ctx = HardyContext(IsoperimetricProfile.power(0.5), 2)
        assert two_hardys_ratio(ctx, 1, Lebesgue(2), constant(0.0), constant(1.0)) == 0.0

    @pytest.mark.parametrize("alpha,m,p", [(0.5, 2, 1), (0.5, 2, 2), (0.75, 2, 2), (0.6, 3, 4)])
    def test_bounded(self, alpha, m, p):
        rep = verify_two_hardys(HardyContext(IsoperimetricProfile.power(alpha), m), 1, Lebesgue(p),
                                trials=30, rng=np.random.default_rng(1))
        assert rep.fundamental == "Holds" and rep.trend == "bounded"
        assert max(rep.adversarial_ratios) < 5

    def test_diverging(self):
        rep = verify_two_hardys(HardyContext(IsoperimetricProfile.power(0.9), 2), 1, Lebesgue(2),
                                trials=10, rng=np.random.default_rng(1))
        assert rep.fundamental == "Fails" and rep.trend == "diverges"
        assert all(np.diff(rep.adversarial_ratios) > 0)
        assert rep.to_json().startswith("{")

    def test_rejects_k(self):
        with pytest.raises(ValueError):
            verify_two_hardys(HardyContext(IsoperimetricProfile.power(0.5), 2), 2, Lebesgue(2))


class TestBlowup:
    L1 = staticmethod(lambda f: eval_norm(Lebesgue(1), f))

    def test_quarter_indicator(self):
        rep = sup_blowup_witness(self.L1, indicator(0, 0.25, 4.0), C=1.0)
        assert rep.incompatible_at == 3
        assert rep.norm_w == pytest.approx(1.0) and rep.level_set_measure == pytest.approx(0.25)
        for row in rep.rows:
            assert row["norm"] >= row["weak_lower"] * (1 - 1e-12)

    def test_boundary_rejected(self):
        with pytest.raises(ValueError, match="not a witness"):
            sup_blowup_witness(self.L1, indicator(0, 0.5, 4.0), C=1.0)

    def test_bad_constant(self):
        with pytest.raises(ValueError):
            sup_blowup_witness(self.L1, indicator(0, 0.25, 4.0), C=0.0)
