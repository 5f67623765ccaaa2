import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from css_diffusion.sensing import (
    DomainError,
    SensingParams,
    ar1_precision_rowsum,
    cooperation_gain,
    mc_lrt_pfa,
    pfa_css,
    pfa_lss,
    q_function,
    q_inverse,
)

DEFAULT = SensingParams(delta_delta=-0.09, sigma=3.3, rho=0.5, beta=0.95)


def mp_q(x):
    mpmath.mp.dps = 40
    return float(mpmath.ncdf(-mpmath.mpf(x)))


class TestQFunction:
    def test_half_at_zero(self):
        assert q_function(0.0) == 0.5

    @pytest.mark.parametrize("x", [-8.0, -3.2, -1.0, -1e-3, 0.3, 1.6449, 4.0, 9.5])
    def test_matches_high_precision(self, x):
        assert q_function(x) == pytest.approx(mp_q(x), rel=1e-12)

    def test_tail_value(self):
        # 40-digit mpmath: Q(1.6449) = 0.0499952174683463...
        assert q_function(1.6449) == pytest.approx(0.05, abs=1e-4)
        assert q_function(1.6449) == pytest.approx(0.04999521746834630, rel=1e-12)

    @given(st.floats(-30, 30))
    def test_symmetry(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-15)

    def test_strictly_decreasing(self):
        xs = np.linspace(-6, 6, 2001)
        assert np.all(np.diff(q_function(xs)) < 0)

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(DomainError):
            q_function(bad)


class TestQInverse:
    def test_median(self):
        assert q_inverse(0.5) == 0.0

    def test_detection_target(self):
        # 40-digit mpmath root: -1.6448536269514727...
        assert q_inverse(0.95) == pytest.approx(-1.6449, abs=1e-3)
        assert q_inverse(0.95) == pytest.approx(-1.6448536269514727, abs=1e-12)

    @given(st.floats(1e-12, 1 - 1e-12))
    def test_round_trip(self, p):
        assert q_function(q_inverse(p)) == pytest.approx(p, abs=1e-10)

    @given(st.floats(1e-4, 0.5))
    def test_symmetry(self, p):
        assert q_inverse(1 - p) == pytest.approx(-q_inverse(p), abs=1e-9)

    def test_monotone(self):
        ps = np.linspace(0.001, 0.999, 500)
        assert np.all(np.diff([q_inverse(float(p)) for p in ps]) < 0)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            q_inverse(bad)


class TestSensingParams:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(delta_delta=0.1), dict(delta_delta=0.0), dict(sigma=0.0), dict(rho=1.0), dict(rho=-0.1),
         dict(beta=0.0), dict(beta=1.0), dict(antennas=0), dict(antennas=1.5)],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(DomainError):
            SensingParams(**kwargs)


class TestFalseAlarm:
    def test_lss_reference_value(self):
        # mpmath: 0.04724970440546590
        p = SensingParams(-0.09, 3.3, 0.0, 0.95, 1)
        assert pfa_lss(p) == pytest.approx(0.0472, abs=1e-4)
        assert pfa_lss(p) == pytest.approx(0.04724970440546590, rel=1e-12)

    def test_css_reference_value(self):
        # mpmath: 0.04683527265433505
        assert pfa_css(DEFAULT, 2) == pytest.approx(0.0468, abs=1e-4)
        assert pfa_css(DEFAULT, 2) == pytest.approx(0.04683527265433505, rel=1e-12)

    def test_scale_invariance(self):
        a = SensingParams(-0.09, 3.3, 0.2, 0.9)
        b = SensingParams(-0.09 * 7.5, 3.3 * 7.5, 0.2, 0.9)
        assert pfa_lss(a) == pytest.approx(pfa_lss(b), rel=1e-13)
        assert pfa_css(a, 3.7) == pytest.approx(pfa_css(b, 3.7), rel=1e-13)

    def test_more_antennas_lower_lss(self):
        assert pfa_lss(SensingParams(antennas=4)) < pfa_lss(SensingParams(antennas=1))

    @given(st.floats(0.0, 0.99), st.floats(0.01, 0.99), st.floats(-5, -1e-3), st.integers(1, 8))
    def test_cluster_of_one_is_lss(self, rho, beta, dd, m):
        p = SensingParams(dd, 3.3, rho, beta, m)
        assert pfa_css(p, 1) == pfa_lss(p)

    def test_full_correlation_limit(self):
        # the factor sqrt(2 rho / (1 + rho)) -> 1 as rho -> 1, whatever c
        p = SensingParams(rho=1 - 1e-12)
        vals = pfa_css(p, np.array([0.0, 1.0, 5.0, 40.0]))
        assert np.ptp(vals) < 1e-9

    def test_non_increasing_in_cluster_size(self):
        cs = np.arange(0, 20.5, 0.5)
        for rho in np.arange(0, 1.0, 0.1):
            p = SensingParams(rho=float(rho))
            assert np.all(np.diff(pfa_css(p, cs)) <= 0)

    def test_direction_in_beta(self):
        # Q^-1(beta) falls as beta rises, so both rates fall with it
        betas = np.round(np.arange(0.5, 0.995, 0.01), 2)
        lss = [pfa_lss(SensingParams(beta=float(b))) for b in betas]
        css = [pfa_css(SensingParams(beta=float(b), rho=0.3), 4.0) for b in betas]
        assert np.all(np.diff(lss) < 0) and np.all(np.diff(css) < 0)

    def test_antenna_dominance(self):
        cs = np.arange(0, 20.5, 0.5)
        for m in range(1, 6):
            lo, hi = SensingParams(rho=0.4, antennas=m), SensingParams(rho=0.4, antennas=m + 1)
            assert pfa_lss(hi) <= pfa_lss(lo)
            assert np.all(pfa_css(hi, cs) <= pfa_css(lo, cs))

    def test_negative_cluster_rejected(self):
        with pytest.raises(DomainError):
            pfa_css(DEFAULT, -0.5)


class TestCooperationGain:
    @pytest.mark.parametrize("excess", [-1.0, -0.4, 0.0, 1e-6, 0.5, 3.0, 30.0])
    @pytest.mark.parametrize("params", [DEFAULT, SensingParams(-4.0, 2.0, 0.1, 0.7, 3)])
    def test_equals_difference_of_closed_forms(self, params, excess):
        direct = pfa_lss(params) - pfa_css(params, 1.0 + excess)
        assert cooperation_gain(params, excess) == pytest.approx(direct, rel=1e-9, abs=1e-16)

    def test_resolves_tiny_excess(self):
        # mpmath reference for the gain at excess 1e-20 (far below double
        # resolution of pfa itself)
        mpmath.mp.dps = 60
        dd, s, rho, b = mpmath.mpf("-0.09"), mpmath.mpf("3.3"), mpmath.mpf("0.5"), mpmath.mpf("0.95")
        qb = -mpmath.sqrt(2) * mpmath.erfinv(2 * b - 1)
        f = lambda c: 1 - mpmath.ncdf(-(dd / s * mpmath.sqrt(((1 - rho) * c + 2 * rho) / (1 + rho)) + qb))
        ref = float(f(1) - f(1 + mpmath.mpf("1e-20")))
        assert cooperation_gain(DEFAULT, 1e-20) == pytest.approx(ref, rel=1e-9)
        assert ref > 0


class TestAR1:
    def test_scalar(self):
        for rho in (0.0, 0.3, 0.9):
            assert ar1_precision_rowsum(1, rho) == pytest.approx(1.0, rel=1e-14)

    def test_two_by_two(self):
        # hand inverse: 1' S^-1 1 = 2 / (1 + rho)
        assert ar1_precision_rowsum(2, 0.5) == pytest.approx(4 / 3, rel=1e-12)

    def test_closed_form(self):
        assert ar1_precision_rowsum(5, 0.3) == pytest.approx((0.7 * 5 + 0.6) / 1.3, rel=1e-12)

    def test_singular(self):
        with pytest.raises(np.linalg.LinAlgError):
            ar1_precision_rowsum(3, 1.0)


class TestMonteCarlo:
    def test_refuses_small_runs(self):
        with pytest.raises(DomainError, match="at least"):
            mc_lrt_pfa(DEFAULT, 2, trials=500)

    def test_deterministic(self):
        a = mc_lrt_pfa(DEFAULT, 3, trials=50_000, seed=11)
        b = mc_lrt_pfa(DEFAULT, 3, trials=50_000, seed=11)
        assert a == b

    def test_agrees_with_mimo_closed_form(self):
        p = SensingParams(-1.5, 3.3, 0.4, 0.9, 3)
        est = mc_lrt_pfa(p, 4, trials=400_000, seed=5)
        assert abs(est.estimate - pfa_css(p, 4)) <= 3 * est.stderr

    def test_separated_hypotheses(self):
        # larger mean gap makes the closed form far from 1 - beta; still agrees
        p = SensingParams(-3.0, 3.3, 0.0, 0.95, 1)
        est = mc_lrt_pfa(p, 1, trials=400_000, seed=2)
        assert abs(est.estimate - pfa_lss(p)) <= 3 * est.stderr
