import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from ri_sobolev.isoperimetry import (
    IsoperimetricProfile,
    Power,
    PowerLog,
    TabulatedConvex,
    TabulatedMonotone,
    build_domain_profile,
    maz_ya_class_check,
    profile_from_dict,
    psi,
    smooth_profile,
    smoothing_report,
    unit_ball_volume,
)
from ri_sobolev.verdict import FAILS, HOLDS


class TestProfiles:
    def test_john_exponent_enforced(self):
        with pytest.raises(ValueError):
            IsoperimetricProfile.power(0.5, 3)
        IsoperimetricProfile.power(2 / 3, 3)

    def test_powerlog_monotonicity(self):
        with pytest.raises(ValueError):
            PowerLog(0.5, 1.0)
        PowerLog(0.5, -1.0)

    def test_tabulated_validation(self):
        with pytest.raises(ValueError):
            TabulatedMonotone([0.1, 0.5, 1.0], [1.0, 0.5, 2.0])

    @pytest.mark.parametrize("I", [
        IsoperimetricProfile.power(0.5), IsoperimetricProfile.power_log(0.6, -1, 2),
        IsoperimetricProfile.tabulated([1e-6, 1e-3, 1.0], [1e-3, 0.03, 1.0]),
        smooth_profile(IsoperimetricProfile.power(0.6, 2)),
    ], ids=["power", "powerlog", "tabulated", "smoothed"])
    def test_dict_roundtrip(self, I):
        J = profile_from_dict(I.to_dict())
        t = np.geomspace(1e-8, 1, 9)
        np.testing.assert_allclose(J(t), I(t), rtol=1e-14)

    @pytest.mark.parametrize("form", [PowerLog(0.6, -1.0), PowerLog(0.7, 0.5),
                                      TabulatedMonotone([1e-6, 1e-3, 1.0], [1e-3, 0.03, 1.0]),
                                      TabulatedConvex([1e-6, 1e-3, 0.2, 1.0],
                                                      [1e-7, 1.1e-4, 0.2, 1.0], 2.0, 1.2)],
                             ids=["powerlog-neg", "powerlog-pos", "tabulated", "convex"])
    def test_antiderivatives_against_quad(self, form):
        for t in (1e-6, 1e-3, 0.2, 0.9):
            tail = integrate.quad(lambda r: 1 / float(form.value(r)), t, 1, epsrel=1e-12, limit=400)[0]
            head = integrate.quad(lambda r: 1 / float(form.value(r)), 0, t, epsrel=1e-12, limit=400)[0]
            assert float(form.tail(t)) == pytest.approx(tail, rel=1e-8)
            assert float(form.head(t)) == pytest.approx(head, rel=1e-7)

    @pytest.mark.parametrize("alpha,n", [(0.5, 2), (2 / 3, 3), (0.8, 4), (1.0, 2)])
    def test_upper_bound_against_john(self, alpha, n):
        I = IsoperimetricProfile.power(alpha, n)
        s = np.geomspace(1e-12, 1, 50)
        assert np.all(I(s) / s ** (1 - 1 / n) <= 1.0 + 1e-12)


class TestPsi:
    def test_half_power(self):
        I = IsoperimetricProfile.power(0.5)
        for t in (1e-8, 0.01, 0.5, 1.0):
            assert psi(I, 1, t) == pytest.approx(2 * math.sqrt(t), rel=1e-14)
            assert psi(I, 2, t) == pytest.approx(4 * t, rel=1e-14)

    def test_divergent(self):
        assert psi(IsoperimetricProfile.power(1.0), 1, 0.5) == math.inf

    @given(alpha=st.floats(0.5, 0.95), m=st.integers(1, 5))
    def test_increasing_and_multiplicative(self, alpha, m):
        I = IsoperimetricProfile.power(alpha)
        t = np.geomspace(1e-10, 1, 40)
        v = psi(I, m, t)
        assert np.all(np.diff(v) > 0)
        np.testing.assert_allclose(v, psi(I, 1, t) ** m, rtol=0, atol=0)

    def test_tends_to_zero(self):
        I = IsoperimetricProfile.power_log(0.6, -1)
        v = psi(I, 1, np.geomspace(1e-30, 1e-1, 30))
        assert np.all(np.diff(v) > 0) and v[0] < 1e-9


class TestSmoothing:
    @pytest.mark.parametrize("alpha,n", [(0.5, 2), (0.7, 2), (2 / 3, 3)])
    def test_power_stays_power(self, alpha, n):
        I = IsoperimetricProfile.power(alpha, n)
        rep = smoothing_report(I)
        # both steps integrate a power, so Ihat / I is constant: (alpha n')^(-2/n')
        c = (alpha * I.n_prime) ** (-2 / I.n_prime)
        assert rep["ratio_min"] == pytest.approx(c, rel=1e-6)
        assert rep["ratio_max"] == pytest.approx(c, rel=1e-6)
        assert rep["convex"] and rep["sandwich_lower"] and rep["sandwich_upper"]

    def test_nonconvex_input(self):
        # a profile with a plateau: I^{n'} is not convex, the smoothed one is
        I = IsoperimetricProfile.tabulated([1e-9, 1e-4, 1e-2, 1.0], [1e-5, 0.02, 0.02, 1.0])
        with pytest.raises(ValueError, match="not convex"):
            build_domain_profile(I)
        J = smooth_profile(I)
        assert isinstance(J.form, TabulatedConvex)
        rep = smoothing_report(I)
        assert rep["ratio_max"] / rep["ratio_min"] < 50
        D = build_domain_profile(J)
        assert D.eta_convex()
        assert D.volume() == pytest.approx(1.0, abs=1e-6)

    def test_precondition(self):
        with pytest.raises(ValueError, match="monotonicity"):
            smoothing_report(IsoperimetricProfile.power_log(0.5, 0.3))


class TestDomain:
    def test_half_power_closed_form(self):
        D = build_domain_profile(IsoperimetricProfile.power(0.5, 2))
        assert D.L == pytest.approx(2.0, abs=1e-12)
        assert D.omega == 2.0
        r = np.linspace(0, 2, 41)[:-1]
        np.testing.assert_allclose(D.M_of(r), (1 - r / 2) ** 2, atol=1e-10, rtol=0)
        np.testing.assert_allclose(D.eta, (1 - D.r / 2) / 2, atol=1e-10, rtol=0)
        assert D.volume() == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("alpha,n", [(0.5, 2), (0.6, 2), (2 / 3, 2), (2 / 3, 3), (0.8, 3), (0.9, 4)])
    def test_validation(self, alpha, n):
        D = build_domain_profile(IsoperimetricProfile.power(alpha, n))
        v = D.validate()
        assert v["volume_error"] < 1e-6
        assert v["M_identity_error"] < 1e-10
        assert v["isoperimetric_identity_error"] < 1e-10
        assert v["ode_relative_error"] < 1e-6
        assert v["eta_convex"] and v["M_monotone"]
        assert v["M_at_0"] == pytest.approx(1.0, abs=1e-12)
        assert v["M_at_end"] < 1e-12

    def test_volume_tail_identity(self):
        # omega * integral_t^L eta^(n-1) = M(t), here at t = L/2
        D = build_domain_profile(IsoperimetricProfile.power(0.7, 3))
        t = D.L / 2
        val = integrate.quad(lambda r: D.omega * float((D.profile(D.M_of(r)) / D.omega)[0]),
                             t, D.L, epsrel=1e-10, limit=400)[0]
        assert val == pytest.approx(float(D.M_of(t)[0]), rel=1e-8)

    def test_truncated(self):
        D = build_domain_profile(IsoperimetricProfile.power(1.0, 2))
        assert D.truncated and math.isfinite(D.L)
        assert D.M[-1] == pytest.approx(1e-9, rel=1e-6)
        assert D.validate()["volume_error"] < 1e-6

    def test_exports(self):
        D = build_domain_profile(IsoperimetricProfile.power(2 / 3, 3))
        text = D.to_csv(preamble={"seed": 1})
        lines = text.splitlines()
        assert lines[0].startswith("# ") and lines[1] == "r,eta,M_of_r"
        assert len(lines) == 2 + D.r.size
        pts = D.point_cloud()
        assert pts.shape == (64 * D.r.size, 3)
        np.testing.assert_allclose(np.hypot(pts[:, 1], pts[:, 2]), np.repeat(D.eta, 64), rtol=1e-12)
        with pytest.raises(ValueError):
            build_domain_profile(IsoperimetricProfile.power(0.5, 2)).point_cloud()

    def test_ball_volumes(self):
        assert unit_ball_volume(1) == 2.0
        assert unit_ball_volume(2) == pytest.approx(math.pi)
        assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


class TestMazya:
    def test_examples(self):
        v = maz_ya_class_check(IsoperimetricProfile.power(0.5), 0.5)
        assert v.outcome == HOLDS and v.witness == 1.0
        assert maz_ya_class_check(IsoperimetricProfile.power(0.7), 0.5).outcome == FAILS
        v = maz_ya_class_check(IsoperimetricProfile.power_log(0.5, -1), 0.6)
        assert v.outcome == HOLDS and v.witness > 0
        # grid oracle for the infimum of s^(-0.1) / log(e/s)
        s = np.geomspace(1e-300, 1, 200_001)
        assert v.witness == pytest.approx(np.min(s**-0.1 / np.log(np.e / s)), rel=1e-6)

    def test_tabulated(self):
        I = IsoperimetricProfile.tabulated([1e-6, 1.0], [1e-3, 1.0])
        assert maz_ya_class_check(I, 0.5).outcome == HOLDS
        assert maz_ya_class_check(I, 0.4).outcome == FAILS
