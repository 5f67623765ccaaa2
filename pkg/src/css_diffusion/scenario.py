"""Physical scenario parameters and the couplings that derive model inputs.

Defaults reproduce the reference simulation set-up: 18 ICRs, single
antenna, P(d) = {1: 0.37, 2: 0.33, 3: 0.30}, D = 20 m, beta = 0.95,
alpha = 2.5, c = 2, R = 2 m, rho = exp(-0.1 R / (n - 1)), delta_delta = -0.09 dB
and sigma = 3.3 dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .game import SELF_INCLUSIVE, GameConfig
from .network import PAPER_LITERAL, DegreeDistribution, PPPCost, ppp_intensity
from .sensing import SensingParams


def default_degree_dist() -> DegreeDistribution:
    return DegreeDistribution((1, 2, 3), (0.37, 0.33, 0.30))


def coupled_rho(comm_range: float, n: int) -> float:
    return math.exp(-0.1 * comm_range / (n - 1))


@dataclass(frozen=True)
class Scenario:
    n: int = 18
    antennas: int = 1
    degree_dist: DegreeDistribution = field(default_factory=default_degree_dist)
    region_size: float = 20.0
    beta: float = 0.95
    alpha: float = 2.5
    prop_const: float = 2.0
    comm_range: float = 2.0
    # None means "derive from comm_range and n"
    rho: float | None = None
    delta_delta: float = -0.09
    sigma: float = 3.3
    intensity: float | None = None
    intensity_convention: str = PAPER_LITERAL
    cluster_convention: str = SELF_INCLUSIVE
    tolerance: float = 1e-3

    def effective_rho(self) -> float:
        return coupled_rho(self.comm_range, self.n) if self.rho is None else self.rho

    def effective_intensity(self) -> float:
        if self.intensity is not None:
            return self.intensity
        return ppp_intensity(self.n, self.comm_range, self.region_size, self.intensity_convention)

    def sensing_params(self) -> SensingParams:
        return SensingParams(self.delta_delta, self.sigma, self.effective_rho(), self.beta, self.antennas)

    def cost_model(self):
        return PPPCost(self.effective_intensity(), self.prop_const, self.alpha)

    def degrees(self) -> DegreeDistribution:
        return self.degree_dist

    def game_config(self) -> GameConfig:
        return GameConfig(
            degree_dist=self.degrees(),
            sensing=self.sensing_params(),
            cost=self.cost_model(),
            cluster_convention=self.cluster_convention,
            tolerance=self.tolerance,
        )

    def frozen_couplings(self) -> "Scenario":
        """Copy with rho and intensity pinned to their currently derived values."""
        return replace(self, rho=self.effective_rho(), intensity=self.effective_intensity())
