"""Degree distributions and the cost-of-cooperation model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

PAPER_LITERAL = "paper_literal"
DENSITY = "density"
INTENSITY_CONVENTIONS = (PAPER_LITERAL, DENSITY)


class DegenerateNetworkError(ValueError):
    pass


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeDistribution:
    degrees: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "probs", probs)
        if not degrees or len(degrees) != len(probs):
            raise ValueError("degree distribution needs matching, non-empty degree and probability lists")
        if any(d < 0 for d in degrees):
            raise ValueError("degrees must be non-negative")
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ValueError("degrees must be distinct and sorted ascending")
        if any(not (p >= 0 and math.isfinite(p)) for p in probs):
            raise ValueError("probabilities must be finite and non-negative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float], normalize: bool = False) -> "DegreeDistribution":
        items = sorted((int(d), float(p)) for d, p in mapping.items())
        degrees = [d for d, _ in items]
        probs = [p for _, p in items]
        if normalize:
            total = math.fsum(probs)
            probs = [p / total for p in probs]
        return cls(tuple(degrees), tuple(probs))

    @classmethod
    def point_mass(cls, degree: int) -> "DegreeDistribution":
        return cls((degree,), (1.0,))

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.degrees, self.probs))

    def pmf(self, degree: int) -> float:
        return self.as_dict().get(int(degree), 0.0)

    @property
    def max_degree(self) -> int:
        return self.degrees[-1]

    def mean(self) -> float:
        return math.fsum(d * p for d, p in zip(self.degrees, self.probs))

    def degree_array(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=float)

    def prob_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


def edge_perspective(p: DegreeDistribution) -> DegreeDistribution:
    """Degree distribution of the node reached by following a random edge."""
    total = p.mean()
    if total <= 0:
        raise DegenerateNetworkError("all probability mass sits on degree 0; no edges exist")
    weights = [d * q / total for d, q in zip(p.degrees, p.probs)]
    # renormalize with fsum so the sum-to-one invariant survives rounding
    s = math.fsum(weights)
    return DegreeDistribution(p.degrees, tuple(w / s for w in weights))


def ppp_degree_distribution(node_density: float, comm_range: float, max_degree: int, tail_tol: float = 1e-9) -> DegreeDistribution:
    """Poisson degree law of a 2-D PPP with range-R disc neighbourhoods."""
    if node_density <= 0 or comm_range <= 0:
        raise ValueError("node_density and comm_range must be positive")
    lam = node_density * math.pi * comm_range**2
    tail = float(stats.poisson.sf(max_degree, lam))
    if tail >= tail_tol:
        raise TruncationError(f"truncating Poisson({lam:g}) at {max_degree} drops mass {tail:.3g} >= {tail_tol:g}")
    ks = np.arange(max_degree + 1)
    pmf = stats.poisson.pmf(ks, lam)
    pmf = pmf / math.fsum(pmf)
    return DegreeDistribution(tuple(int(k) for k in ks), tuple(float(q) for q in pmf))


def ppp_intensity(n: int, comm_range: float, region_size: float, convention: str = PAPER_LITERAL) -> float:
    """PPP intensity from the network geometry.

    ``paper_literal`` gives pi (R + D)^2 / n; ``density`` gives the
    dimensionally standard n / (pi (R + D)^2).
    """
    area = math.pi * (comm_range + region_size) ** 2
    if convention == PAPER_LITERAL:
        return area / n
    if convention == DENSITY:
        return n / area
    raise ValueError(f"unknown intensity convention {convention!r}; expected one of {INTENSITY_CONVENTIONS}")


@dataclass(frozen=True)
class PPPCost:
    """Energy cost E = c Y^alpha with Y the nearest-neighbour distance of a PPP."""

    intensity: float
    prop_const: float = 2.0
    path_loss_exp: float = 2.5

    def __post_init__(self):
        if not self.intensity > 0:
            raise ValueError("intensity must be positive")
        if not self.prop_const > 0:
            raise ValueError("prop_const must be positive")
        if not self.path_loss_exp > 1:
            raise ValueError("path_loss_exp must exceed 1")

    @property
    def rate(self) -> float:
        return self.intensity * math.pi * self.prop_const ** (-2.0 / self.path_loss_exp)

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        pos = np.clip(arr, 0.0, None)
        out = np.where(arr > 0, -np.expm1(-self.rate * pos ** (2.0 / self.path_loss_exp)), 0.0)
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size=None):
        e = rng.standard_exponential(size)
        return (e / self.rate) ** (self.path_loss_exp / 2.0)

    def nearest_neighbor_cdf(self, y):
        y = np.clip(np.asarray(y, dtype=float), 0.0, None)
        return -np.expm1(-self.intensity * math.pi * y**2)


@dataclass(frozen=True)
class TabulatedCost:
    """Piecewise-linear cost CDF on a strictly increasing grid.

    Below the first grid point the CDF is 0, above the last it is 1, so an
    atom of size ``cdf[0]`` sits at ``costs[0]``. A final grid point of
    ``inf`` puts the remaining mass at infinity (cooperation never pays).
    """

    costs: tuple[float, ...]
    cdf_values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        costs = tuple(float(c) for c in self.costs)
        cdf = tuple(float(v) for v in self.cdf_values)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "cdf_values", cdf)
        if not costs or len(costs) != len(cdf):
            raise ValueError("tabulated cost needs matching, non-empty cost and cdf lists")
        if any(b <= a for a, b in zip(costs, costs[1:])):
            raise ValueError("tabulated costs must be strictly increasing")
        if costs[0] < 0 or math.isnan(costs[0]):
            raise ValueError("costs must be non-negative")
        if any(not 0 <= v <= 1 for v in cdf) or any(b < a for a, b in zip(cdf, cdf[1:])):
            raise ValueError("cdf values must be non-decreasing within [0, 1]")
        if abs(cdf[-1] - 1.0) > 1e-12:
            raise ValueError("the last tabulated cdf value must be 1")
        if any(math.isinf(c) for c in costs[:-1]):
            raise ValueError("only the last grid point may be infinite")

    @classmethod
    def point_mass(cls, cost: float) -> "TabulatedCost":
        return cls((cost,), (1.0,))

    def _finite(self):
        if math.isinf(self.costs[-1]):
            return np.asarray(self.costs[:-1]), np.asarray(self.cdf_values[:-1])
        return np.asarray(self.costs), np.asarray(self.cdf_values)

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        xs, fs = self._finite()
        if xs.size == 0:
            out = np.zeros_like(arr)
        else:
            tail = 1.0 if not math.isinf(self.costs[-1]) else fs[-1]
            out = np.interp(arr, xs, fs, left=0.0, right=tail)
            out = np.where(arr < xs[0], 0.0, out)
            out = np.where(arr > xs[-1], tail, out)
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        xs = np.asarray(self.costs)
        fs = np.asarray(self.cdf_values)
        i = np.searchsorted(fs, u, side="left")
        i = np.clip(i, 0, len(xs) - 1)
        lo = np.maximum(i - 1, 0)
        f_lo, f_hi = fs[lo], fs[i]
        x_lo, x_hi = xs[lo], xs[i]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(f_hi > f_lo, (u - f_lo) / (f_hi - f_lo), 1.0)
            interior = np.where(np.isinf(x_hi), np.inf, x_lo + frac * (x_hi - x_lo))
        out = np.where(i == 0, xs[0], interior)
        return float(out) if np.ndim(out) == 0 else out


CostModel = PPPCost | TabulatedCost


def cost_cdf(model: CostModel, x):
    return model.cdf(x)


def sample_cost(model: CostModel, rng: np.random.Generator, size=None):
    return model.sample(rng, size)


def _read_pairs(path: str | Path) -> list[tuple[str, str, int]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two comma-separated columns, got {raw.strip()!r}")
            rows.append((parts[0], parts[1], lineno))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def load_degree_distribution(path: str | Path) -> DegreeDistribution:
    mapping = {}
    for a, b, lineno in _read_pairs(path):
        try:
            mapping[int(a)] = float(b)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad degree row {a},{b}") from exc
    return DegreeDistribution.from_mapping(mapping)


def load_tabulated_cost(path: str | Path) -> TabulatedCost:
    costs, cdf = [], []
    for a, b, lineno in _read_pairs(path):
        try:
            costs.append(float(a))
            cdf.append(float(b))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad cost row {a},{b}") from exc
    return TabulatedCost(tuple(costs), tuple(cdf))
