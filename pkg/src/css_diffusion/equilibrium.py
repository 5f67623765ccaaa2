"""Fixed-point solvers and mean-field time dynamics for the diffusion game."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .csvio import write_csv
from .game import GameConfig, check_x, coop_probability, cooperating_density, phi


class StepSizeError(ValueError):
    pass


@dataclass
class Trajectory:
    t: list = field(default_factory=list)
    x: list = field(default_factory=list)
    xi: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    residual: float = float("nan")

    def append(self, t, x, xi):
        self.t.append(t)
        self.x.append(float(x))
        self.xi.append(float(xi))

    @property
    def final_x(self) -> float:
        return self.x[-1]

    @property
    def final_xi(self) -> float:
        return self.xi[-1]

    def rows(self):
        return zip(self.t, self.x, self.xi)

    def to_csv(self, path: str | Path) -> None:
        write_csv(path, ("t", "x", "xi"), self.rows())


@dataclass(frozen=True)
class EquilibriumReport:
    x_star: float
    xi_star: float
    trivial_zero_fixed_point: bool
    residual: float
    method: str
    converged: bool
    iterations: int
    roots: tuple[float, ...] = ()


def iterate_fixed_point(config: GameConfig, x0: float, max_steps: int = 10_000) -> Trajectory:
    """Best-response iteration x <- phi(x) from x0.

    Stops at the first x^T whose residual |phi(x^T) - x^T| is within the
    config tolerance, so the final point always satisfies the tolerance.
    """
    if not 0 < x0 <= 1:
        raise ValueError(f"x0 must lie in (0, 1], got {x0!r}")
    traj = Trajectory()
    x = float(x0)
    traj.append(0, x, cooperating_density(config, x))
    nxt = phi(config, x)
    for t in range(1, max_steps + 1):
        x = nxt
        traj.append(t, x, cooperating_density(config, x))
        nxt = phi(config, x)
        traj.iterations = t
        traj.residual = abs(nxt - x)
        if traj.residual <= config.tolerance:
            traj.converged = True
            break
    return traj


def _bisect(g: Callable[[float], float], a: float, b: float, ga: float) -> float:
    # plain bisection; relative stopping so roots near 1e-30 keep their digits
    for _ in range(2000):
        m = 0.5 * (a + b)
        if m <= a or m >= b or (b - a) <= min(1e-9, 1e-13 * b):
            break
        gm = g(m)
        if gm == 0:
            return m
        if (gm < 0) == (ga < 0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)


def fixed_point_grid(grid: int) -> np.ndarray:
    """Uniform grid on [0, 1] plus log-spaced points below its first step.

    phi can rise with infinite slope at 0 (the PPP cost CDF behaves like
    x^(2/alpha)), which hides a tiny positive root inside the first uniform
    cell where g(0) = 0; the log points expose it.
    """
    uniform = np.linspace(0.0, 1.0, grid + 1)
    near_zero = np.logspace(-300, np.log10(uniform[1]), 600, endpoint=False)
    return np.unique(np.concatenate([uniform, near_zero]))


def find_all_fixed_points(config: GameConfig, grid: int = 1000) -> list[float]:
    """All roots of x - phi(x) on [0, 1] via sign changes and bisection."""
    if grid < 100:
        raise ValueError("grid must have at least 100 cells")

    def g(x):
        return x - phi(config, x)

    xs = fixed_point_grid(grid)
    gs = np.array([g(x) for x in xs])
    roots: list[float] = []
    for i, (x, gx) in enumerate(zip(xs, gs)):
        if gx == 0:
            roots.append(float(x))
        elif i + 1 < len(xs) and gs[i + 1] != 0 and (gx < 0) != (gs[i + 1] < 0):
            roots.append(_bisect(g, float(x), float(xs[i + 1]), float(gx)))
    return roots


def solve_equilibrium(config: GameConfig, x0: float = 0.3, max_steps: int = 10_000, grid: int = 1000) -> EquilibriumReport:
    """Run the best-response iteration and pin the limit down by root bracketing.

    The positive fixed point reached by the iteration is reported as the BNE;
    the trivial x = 0 fixed point is flagged separately. When no positive
    root exists the iteration end point is reported.
    """
    traj = iterate_fixed_point(config, x0, max_steps)
    roots = find_all_fixed_points(config, grid)
    positive = [r for r in roots if r > 0]
    if positive:
        x_star = min(positive, key=lambda r: abs(r - traj.final_x))
        method = "bisection"
    else:
        x_star = traj.final_x
        method = "iteration"
    return EquilibriumReport(
        x_star=x_star,
        xi_star=cooperating_density(config, x_star),
        trivial_zero_fixed_point=phi(config, 0.0) == 0.0,
        residual=abs(x_star - phi(config, x_star)),
        method=method,
        converged=traj.converged,
        iterations=traj.iterations,
        roots=tuple(roots),
    )


def meanfield_dynamics(
    config: GameConfig,
    x0: float,
    xi0_by_degree: Mapping[int, float] | Sequence[float] | None = None,
    horizon: float = 50.0,
    dt: float = 0.05,
) -> Trajectory:
    """Forward-Euler integration of the per-degree cooperation densities.

    d xi_k / dt = -xi_k (1 - F_k) + (1 - xi_k) F_k with F_k = F_E(v(k, x)),
    and the belief x taken as the edge-perspective average of xi_k after
    each step.
    """
    if not dt > 0 or not horizon >= dt:
        raise StepSizeError(f"need dt > 0 and horizon >= dt, got dt={dt!r}, horizon={horizon!r}")
    p = config.degree_dist
    edge = config.edge_dist
    degrees = p.degree_array()
    if xi0_by_degree is None:
        xi = np.full(degrees.shape, float(x0))
    elif isinstance(xi0_by_degree, Mapping):
        xi = np.array([float(xi0_by_degree.get(d, x0)) for d in p.degrees])
    else:
        xi = np.asarray(xi0_by_degree, dtype=float).copy()
        if xi.shape != degrees.shape:
            raise ValueError("xi0_by_degree must give one value per support degree")
    if np.any(xi < 0) or np.any(xi > 1):
        raise ValueError("initial densities must lie in [0, 1]")
    pw, ew = p.prob_array(), edge.prob_array()

    x = float(check_x(x0))
    traj = Trajectory()
    traj.append(0.0, x, float(pw @ xi))
    n_steps = int(round(horizon / dt))
    for step in range(1, n_steps + 1):
        f = np.asarray(coop_probability(config, degrees, x), dtype=float)
        xi = xi + dt * (-xi * (1.0 - f) + (1.0 - xi) * f)
        if np.any(xi < -1e-12) or np.any(xi > 1 + 1e-12):
            raise StepSizeError(f"dt={dt} pushed a density outside [0, 1] at step {step}; reduce dt")
        xi = np.clip(xi, 0.0, 1.0)
        x = float(ew @ xi)
        traj.append(step * dt, x, float(pw @ xi))
    traj.iterations = n_steps
    traj.residual = abs(x - phi(config, x))
    traj.converged = traj.residual <= config.tolerance
    return traj
