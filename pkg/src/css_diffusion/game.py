"""Per-ICR utilities, best response and the network map phi."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .network import CostModel, DegreeDistribution, edge_perspective
from .sensing import SensingParams, cooperation_gain, pfa_css, pfa_lss

SELF_INCLUSIVE = "self_inclusive"
NEIGHBORS_ONLY = "neighbors_only"
CLUSTER_CONVENTIONS = (SELF_INCLUSIVE, NEIGHBORS_ONLY)

_X_SLACK = 1e-12


class Action(enum.IntEnum):
    LSS = 0
    CSS = 1


@dataclass(frozen=True)
class GameConfig:
    """Everything the diffusion game needs.

    ``cluster_convention`` decides how many ICRs pool reports when a degree-d
    user cooperates and a fraction x of neighbours does too: ``x*d + 1`` with
    ``self_inclusive`` (the default) or ``x*d`` with ``neighbors_only``.
    """

    degree_dist: DegreeDistribution
    sensing: SensingParams
    cost: CostModel
    cluster_convention: str = SELF_INCLUSIVE
    tolerance: float = 1e-3

    def __post_init__(self):
        if self.cluster_convention not in CLUSTER_CONVENTIONS:
            raise ValueError(f"cluster_convention must be one of {CLUSTER_CONVENTIONS}, got {self.cluster_convention!r}")
        if not 0 < self.tolerance <= 1e-3:
            raise ValueError(f"tolerance must satisfy 0 < eps <= 1e-3, got {self.tolerance!r}")

    @cached_property
    def edge_dist(self) -> DegreeDistribution:
        return edge_perspective(self.degree_dist)

    @cached_property
    def pfa_lss(self) -> float:
        return pfa_lss(self.sensing)


def check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -_X_SLACK) or np.any(arr > 1 + _X_SLACK) or np.any(np.isnan(arr)):
        raise ValueError(f"cooperation probability must lie in [0, 1], got {x!r}")
    return np.clip(arr, 0.0, 1.0)


def _excess(config: GameConfig, degree, x):
    # cluster size minus one
    xd = check_x(x) * np.asarray(degree, dtype=float)
    return xd if config.cluster_convention == SELF_INCLUSIVE else xd - 1.0


def _scalar(out):
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def effective_cluster_size(config: GameConfig, degree, x):
    return _scalar(_excess(config, degree, x) + 1.0)


def utility(config: GameConfig, action, degree, x):
    if Action(action) is Action.LSS:
        check_x(x)
        return 1.0 - config.pfa_lss
    return _scalar(1.0 - pfa_css(config.sensing, effective_cluster_size(config, degree, x)))


def return_function(config: GameConfig, degree, x):
    """Extra utility from cooperating, v(d, x) = u(1, x) - u(0, x)."""
    return _scalar(cooperation_gain(config.sensing, _excess(config, degree, x)))


def payoff(config: GameConfig, action, degree, x, cost):
    if Action(action) is Action.CSS:
        return utility(config, Action.CSS, degree, x) - cost
    return utility(config, Action.LSS, degree, x)


def best_response(config: GameConfig, degree, x, cost):
    """Cooperate iff v(d, x) >= cost; ties cooperate. Vectorizes over degree/cost."""
    coop = np.asarray(return_function(config, degree, x)) >= np.asarray(cost)
    if coop.ndim == 0:
        return Action.CSS if coop else Action.LSS
    return coop.astype(np.int8)


def coop_probability(config: GameConfig, degree, x):
    return _scalar(config.cost.cdf(return_function(config, degree, x)))


def phi(config: GameConfig, x) -> float:
    """Probability that a random neighbour cooperates, given belief x."""
    edge = config.edge_dist
    terms = coop_probability(config, edge.degree_array(), float(check_x(x)))
    return float(np.dot(edge.prob_array(), terms))


def cooperating_density(config: GameConfig, x) -> float:
    """Node-perspective fraction of cooperators sum_k P(k) F_E(v(k, x))."""
    p = config.degree_dist
    terms = coop_probability(config, p.degree_array(), float(check_x(x)))
    return float(np.dot(p.prob_array(), terms))
