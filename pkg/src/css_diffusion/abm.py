"""Finite-population simulation of myopic best responses.

No graph is built: in line with the mean-field redraw assumption, every
agent responds to one public belief, the cooperating fraction seen from a
random edge. Costs are drawn once and then fixed for the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .csvio import write_csv
from .game import GameConfig, return_function
from .network import DegenerateNetworkError, sample_cost

EDGE_WEIGHTED = "edge_weighted"
UNWEIGHTED = "unweighted"
BELIEFS = (EDGE_WEIGHTED, UNWEIGHTED)


@dataclass(frozen=True)
class Population:
    degrees: np.ndarray
    costs: np.ndarray
    actions: np.ndarray
    x_hat: float
    seed: int

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def coop_count(self) -> int:
        return int(self.actions.sum())

    @property
    def xi_hat(self) -> float:
        return self.coop_count / self.n


@dataclass
class AbmResult:
    t: list = field(default_factory=list)
    x_hat: list = field(default_factory=list)
    xi_hat: list = field(default_factory=list)
    coop_count: list = field(default_factory=list)
    absorbed: bool = False

    def record(self, t: int, pop: Population) -> None:
        self.t.append(t)
        self.x_hat.append(pop.x_hat)
        self.xi_hat.append(pop.xi_hat)
        self.coop_count.append(pop.coop_count)

    @property
    def terminal_x_hat(self) -> float:
        return self.x_hat[-1]

    @property
    def terminal_xi_hat(self) -> float:
        return self.xi_hat[-1]

    @property
    def steps(self) -> int:
        return self.t[-1]

    def to_csv(self, path: str | Path) -> None:
        write_csv(path, ("t", "x_hat", "xi_hat", "coop_count"),
                  zip(self.t, self.x_hat, self.xi_hat, self.coop_count))


def belief(degrees: np.ndarray, actions: np.ndarray, kind: str = EDGE_WEIGHTED) -> float:
    if kind == UNWEIGHTED:
        return float(actions.mean())
    if kind != EDGE_WEIGHTED:
        raise ValueError(f"belief must be one of {BELIEFS}, got {kind!r}")
    total = degrees.sum()
    if total == 0:
        raise DegenerateNetworkError("every agent has degree 0; the edge-weighted belief is undefined")
    return float((degrees * actions).sum() / total)


def _responses(config: GameConfig, degrees: np.ndarray, costs: np.ndarray, x: float) -> np.ndarray:
    support, inverse = np.unique(degrees, return_inverse=True)
    gains = np.atleast_1d(return_function(config, support, x))
    return (gains[inverse] >= costs).astype(np.int8)


def init_population(config: GameConfig, n: int, seed: int, x0: float, kind: str = EDGE_WEIGHTED) -> Population:
    if n < 2:
        raise ValueError("population needs at least two agents")
    rng = np.random.default_rng(seed)
    p = config.degree_dist
    degrees = rng.choice(np.asarray(p.degrees), size=n, p=p.prob_array())
    costs = np.asarray(sample_cost(config.cost, rng, n), dtype=float)
    actions = _responses(config, degrees, costs, x0)
    return Population(degrees, costs, actions, belief(degrees, actions, kind), seed)


def step(pop: Population, config: GameConfig, kind: str = EDGE_WEIGHTED) -> Population:
    """Synchronous best responses to the current belief, then a belief update."""
    actions = _responses(config, pop.degrees, pop.costs, pop.x_hat)
    return replace(pop, actions=actions, x_hat=belief(pop.degrees, actions, kind))


def run_abm(config: GameConfig, n: int, steps: int, seed: int, x0: float, kind: str = EDGE_WEIGHTED) -> AbmResult:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    pop = init_population(config, n, seed, x0, kind)
    result = AbmResult()
    result.record(0, pop)
    for t in range(1, steps + 1):
        nxt = step(pop, config, kind)
        if np.array_equal(nxt.actions, pop.actions):
            result.absorbed = True
            break
        pop = nxt
        result.record(t, pop)
    return result
