import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from css_diffusion import Scenario
from css_diffusion.game import (
    NEIGHBORS_ONLY,
    Action,
    GameConfig,
    best_response,
    coop_probability,
    cooperating_density,
    effective_cluster_size,
    payoff,
    phi,
    return_function,
    utility,
)
from css_diffusion.network import DegreeDistribution, PPPCost, TabulatedCost
from css_diffusion.sensing import SensingParams, pfa_css, pfa_lss

GRID = np.linspace(0.0, 1.0, 1001)


def grid_configs():
    out = []
    for rho in (0.0, 0.5, 0.95):
        for alpha in (2.0, 2.5, 4.0):
            for conv in ("paper_literal", "density"):
                out.append(Scenario(rho=rho, alpha=alpha, intensity_convention=conv).game_config())
    return out


CONFIGS = grid_configs()


class TestConfig:
    @pytest.mark.parametrize("eps", [0.0, -1e-4, 2e-3])
    def test_tolerance_bounds(self, defaults, eps):
        with pytest.raises(ValueError):
            GameConfig(defaults.degree_dist, defaults.sensing, defaults.cost, tolerance=eps)

    def test_unknown_convention(self, defaults):
        with pytest.raises(ValueError):
            GameConfig(defaults.degree_dist, defaults.sensing, defaults.cost, cluster_convention="both")

    def test_default_rho(self, defaults):
        assert defaults.sensing.rho == pytest.approx(0.9883042276773918, rel=1e-15)


class TestUtility:
    def test_abstain_is_constant(self, defaults):
        vals = {utility(defaults, Action.LSS, d, x) for d in range(5) for x in (0.0, 0.4, 1.0)}
        assert vals == {1.0 - pfa_lss(defaults.sensing)}

    def test_property_i(self, defaults):
        for d in range(6):
            assert utility(defaults, Action.CSS, d, 0.0) == utility(defaults, Action.LSS, d, 0.0)

    def test_reference_value(self, defaults):
        # mpmath: 1 - pfa_css(2.5) = 0.9527621288007295
        assert utility(defaults, Action.CSS, 3, 0.5) == pytest.approx(1 - pfa_css(defaults.sensing, 2.5), rel=1e-15)
        assert utility(defaults, Action.CSS, 3, 0.5) == pytest.approx(0.9527621288007295, rel=1e-13)

    def test_neighbors_only_is_literal(self, defaults):
        cfg = GameConfig(defaults.degree_dist, defaults.sensing, defaults.cost, cluster_convention=NEIGHBORS_ONLY)
        assert effective_cluster_size(cfg, 3, 0.5) == 1.5
        assert utility(cfg, Action.CSS, 3, 0.5) == pytest.approx(1 - pfa_css(cfg.sensing, 1.5), rel=1e-14)
        # at x = 0 the literal form loses to going alone
        assert return_function(cfg, 3, 0.0) < 0

    @pytest.mark.parametrize("cfg", CONFIGS[::3])
    def test_positive_externalities(self, cfg):
        for d in range(1, 6):
            for a in Action:
                u = np.array([utility(cfg, a, d, x) for x in GRID[::10]])
                assert np.all(np.diff(u) >= -1e-15)

    @pytest.mark.parametrize("cfg", CONFIGS[::3])
    def test_property_iii(self, cfg):
        for d in range(1, 6):
            for x in GRID[1::50]:
                assert utility(cfg, Action.CSS, d, x) > utility(cfg, Action.LSS, d, x)

    def test_x_outside_unit_interval(self, defaults):
        assert utility(defaults, Action.CSS, 2, 1 + 1e-13) == utility(defaults, Action.CSS, 2, 1.0)
        with pytest.raises(ValueError):
            utility(defaults, Action.CSS, 2, 1.01)


class TestReturnFunction:
    def test_zero_cases(self, defaults):
        for d in range(5):
            assert return_function(defaults, d, 0.0) == 0.0
        for x in (0.0, 0.5, 1.0):
            assert return_function(defaults, 0, x) == 0.0

    def test_reference_value(self, defaults):
        # mpmath at rho = exp(-0.2/17): 2.361241653844202e-05
        v = return_function(defaults, 3, 1.0)
        assert v == pytest.approx(2.361241653844202e-05, rel=1e-10)
        assert v == pytest.approx(pfa_lss(defaults.sensing) - pfa_css(defaults.sensing, 4), rel=1e-9)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_monotone_in_x(self, cfg):
        for d in range(1, 7):
            v = return_function(cfg, d, GRID)
            assert np.all(np.diff(v) >= -1e-12)
            assert np.all(np.diff(v[1:]) > 0) or cfg.sensing.rho >= 1

    @given(st.floats(0.0, 0.99), st.integers(1, 10), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_increasing_differences(self, rho, d, x1, x2):
        cfg = Scenario(rho=rho).game_config()
        lo, hi = sorted((x1, x2))
        cost = 1e-3
        diff = lambda x: payoff(cfg, Action.CSS, d, x, cost) - payoff(cfg, Action.LSS, d, x, cost)
        assert diff(hi) >= diff(lo) - 1e-15


class TestPayoff:
    def test_zero_cost_is_return(self, defaults):
        for d, x in [(1, 0.2), (3, 0.9)]:
            gap = payoff(defaults, Action.CSS, d, x, 0.0) - payoff(defaults, Action.LSS, d, x, 0.0)
            assert gap == pytest.approx(return_function(defaults, d, x), rel=1e-6, abs=1e-15)

    def test_expensive_abstains(self, defaults):
        v = return_function(defaults, 2, 0.3)
        assert payoff(defaults, Action.LSS, 2, 0.3, 2 * v) > payoff(defaults, Action.CSS, 2, 0.3, 2 * v)

    def test_cost_subtracted(self, defaults):
        assert payoff(defaults, Action.CSS, 2, 0.3, 0.01) == utility(defaults, Action.CSS, 2, 0.3) - 0.01


class TestBestResponse:
    def test_free_cooperation(self, defaults):
        for d in (1, 2, 5):
            assert best_response(defaults, d, 0.4, 0.0) is Action.CSS

    def test_isolated(self, defaults):
        assert best_response(defaults, 0, 1.0, 1e-12) is Action.LSS

    def test_tie_cooperates(self, defaults):
        v = return_function(defaults, 2, 0.6)
        assert best_response(defaults, 2, 0.6, v) is Action.CSS
        assert best_response(defaults, 2, 0.6, math.nextafter(v, 1.0)) is Action.LSS

    def test_vectorized(self, defaults):
        out = best_response(defaults, np.array([0, 1, 3]), 0.5, np.array([0.0, 1.0, 0.0]))
        assert out.tolist() == [1, 0, 1]


class TestPhi:
    def test_zero(self, defaults):
        assert phi(defaults, 0.0) == 0.0

    def test_coop_probability_reference(self, defaults):
        # mpmath: 0.02985356649550255
        assert coop_probability(defaults, 3, 1.0) == pytest.approx(0.02985356649550255, rel=1e-9)
        assert coop_probability(defaults, 3, 1.0) == pytest.approx(
            defaults.cost.cdf(return_function(defaults, 3, 1.0)), rel=1e-15
        )

    def test_term_by_term(self, defaults):
        s = defaults.sensing
        lss = pfa_lss(s)
        weights = {1: 0.37 * 1 / 1.93, 2: 0.33 * 2 / 1.93, 3: 0.30 * 3 / 1.93}
        rate = defaults.cost.rate
        total = sum(w * (1 - math.exp(-rate * (lss - pfa_css(s, 0.3 * d + 1)) ** 0.8)) for d, w in weights.items())
        # the direct difference loses digits, hence the loose check
        assert phi(defaults, 0.3) == pytest.approx(total, rel=1e-6)
        assert phi(defaults, 0.3) == pytest.approx(0.009155129653001571, rel=1e-9)

    def test_point_mass(self):
        cfg = Scenario(degree_dist=DegreeDistribution.point_mass(4)).game_config()
        for x in (0.1, 0.5, 1.0):
            assert phi(cfg, x) == coop_probability(cfg, 4, x)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_maps_into_unit_interval_monotone(self, cfg):
        vals = np.array([phi(cfg, x) for x in GRID])
        assert np.all((vals >= 0) & (vals <= 1))
        assert np.all(np.diff(vals) >= -1e-15)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_concave(self, cfg):
        for d in range(1, 6):
            f = coop_probability(cfg, d, GRID)
            assert np.all(np.diff(f, 2) <= 1e-9)

    def test_density_matches_sum(self, defaults):
        x = 0.7
        direct = sum(p * coop_probability(defaults, d, x) for d, p in defaults.degree_dist.as_dict().items())
        assert cooperating_density(defaults, x) == pytest.approx(direct, rel=1e-14)

    def test_tabulated_constant_map(self):
        cfg = GameConfig(
            DegreeDistribution((1, 2), (0.5, 0.5)), SensingParams(), TabulatedCost((0.0, math.inf), (0.35, 1.0))
        )
        assert phi(cfg, 0.0) == 0.35 and phi(cfg, 0.9) == 0.35
