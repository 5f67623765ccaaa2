"""Stochastic dominance, conduciveness to diffusion, and parameter sweeps."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .csvio import write_csv
from .equilibrium import solve_equilibrium
from .game import GameConfig, phi
from .scenario import Scenario

log = logging.getLogger(__name__)

SLACK = 1e-12

# sweep parameter name -> Scenario field
SWEEP_PARAMETERS = {
    "R_range": "comm_range",
    "beta": "beta",
    "M": "antennas",
    "rho": "rho",
    "alpha": "alpha",
    "intensity": "intensity",
}


@dataclass(frozen=True)
class DominanceVerdict:
    """How distribution b ranks against distribution a on a grid.

    ``dominates`` means b first-order stochastically dominates a, i.e.
    F_a >= F_b everywhere.
    """

    relation: str
    witness: float | None
    grid_size: int
    grid_min: float
    grid_max: float


@dataclass(frozen=True)
class ConducivenessVerdict:
    relation: str
    max_gap: float
    witness: float | None
    grid_points: int


def _cdf_fn(obj) -> Callable:
    return obj.cdf if hasattr(obj, "cdf") else obj


def _order(diff: np.ndarray, labels: tuple[str, str, str]) -> tuple[str, int | None]:
    # diff = lhs - rhs; labels = (lhs >= rhs, lhs <= rhs, equal)
    ge = np.all(diff >= -SLACK)
    le = np.all(diff <= SLACK)
    if ge and le:
        return labels[2], None
    if ge:
        return labels[0], None
    if le:
        return labels[1], None
    return "crossing", int(np.argmax(diff < -SLACK))


def stochastic_dominance(a, b, grid: Sequence[float]) -> DominanceVerdict:
    ys = np.asarray(grid, dtype=float)
    if ys.size == 0:
        raise ValueError("grid must be non-empty")
    if np.any(np.diff(ys) < 0):
        raise ValueError("grid must be sorted")
    fa = np.asarray(_cdf_fn(a)(ys), dtype=float)
    fb = np.asarray(_cdf_fn(b)(ys), dtype=float)
    relation, idx = _order(fa - fb, ("dominates", "dominated", "equal"))
    return DominanceVerdict(relation, None if idx is None else float(ys[idx]), ys.size, float(ys[0]), float(ys[-1]))


def phi_on_grid(config: GameConfig, xs: np.ndarray) -> np.ndarray:
    return np.array([phi(config, x) for x in xs])


def compare_conduciveness(cfg_a: GameConfig, cfg_b: GameConfig, grid_points: int = 1001) -> ConducivenessVerdict:
    """Is network b more conducive to diffusion than network a (phi_b >= phi_a)?"""
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    xs = np.linspace(0.0, 1.0, grid_points)
    diff = phi_on_grid(cfg_b, xs) - phi_on_grid(cfg_a, xs)
    relation, idx = _order(diff, ("more_conducive", "less_conducive", "equal"))
    return ConducivenessVerdict(relation, float(np.max(np.abs(diff))), None if idx is None else float(xs[idx]), grid_points)


def path_loss_dominance(scenario: Scenario, alpha_a: float, alpha_b: float, grid: Sequence[float]) -> DominanceVerdict:
    """Compare cost laws for two path-loss exponents, other things fixed."""
    cost_a = replace(scenario, alpha=alpha_a).cost_model()
    cost_b = replace(scenario, alpha=alpha_b).cost_model()
    return stochastic_dominance(cost_a, cost_b, grid)


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    x_star: float
    xi_star: float
    converged: bool
    residual: float
    error: str | None = None

    def as_csv_row(self):
        return (self.parameter, self.value, self.x_star, self.xi_star, self.converged, self.residual)


SWEEP_HEADER = ("parameter", "value", "x_star", "xi_star", "converged", "residual")


def sweep_scenario(base: Scenario, parameter: str, value, couple: bool = True) -> Scenario:
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {sorted(SWEEP_PARAMETERS)}")
    if not couple:
        base = base.frozen_couplings()
    name = SWEEP_PARAMETERS[parameter]
    if name == "antennas":
        if float(value) != int(value):
            raise ValueError(f"antenna count must be an integer, got {value!r}")
        value = int(value)
    return replace(base, **{name: value})


def _solve_point(args) -> SweepRow:
    base, parameter, value, couple, x0, max_steps = args
    try:
        config = sweep_scenario(base, parameter, value, couple).game_config()
        rep = solve_equilibrium(config, x0=x0, max_steps=max_steps)
        return SweepRow(parameter, value, rep.x_star, rep.xi_star, rep.converged, rep.residual)
    except ValueError as exc:
        log.warning("sweep %s=%r failed: %s", parameter, value, exc)
        return SweepRow(parameter, value, math.nan, math.nan, False, math.nan, str(exc))


def worker_count() -> int:
    raw = os.environ.get("CSS_DIFFUSION_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CSS_DIFFUSION_THREADS must be an integer, got {raw!r}") from None
    return (os.cpu_count() or 1) if n == 0 else max(n, 1)


def parameter_sweep(
    base: Scenario,
    parameter: str,
    values: Sequence,
    couple: bool = True,
    x0: float = 0.3,
    max_steps: int = 10_000,
    workers: int | None = None,
) -> list[SweepRow]:
    """Solve the equilibrium at each value of one parameter.

    With ``couple`` (default) quantities derived from R are recomputed for
    each point: rho = exp(-0.1 R / (n - 1)) and the PPP intensity. Explicitly
    set rho/intensity on ``base`` stay fixed. Rows come back in input order.
    """
    if len(values) == 0:
        raise ValueError("sweep needs at least one value")
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {sorted(SWEEP_PARAMETERS)}")
    jobs = [(base, parameter, v, couple, x0, max_steps) for v in values]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(jobs) == 1:
        return [_solve_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_solve_point, jobs))


def write_sweep(path: str | Path, rows: Sequence[SweepRow]) -> None:
    write_csv(path, SWEEP_HEADER, (r.as_csv_row() for r in rows))
