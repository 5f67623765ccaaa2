"""False-alarm probabilities for local and cooperative SNR-based sensing.

Sensing is parameterized only by the mean SNR drop between the guard-region
edge and the far hypothesis (``delta_delta``, dB, negative), the shadowing
spread ``sigma`` (dB), the exponential spatial correlation ``rho``, the
detection target ``beta`` and the antenna count ``antennas``.

The closed forms are backed by two independent checks: a numerical AR(1)
precision row-sum and a Monte-Carlo run of the weighted-sum likelihood
ratio test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg, optimize, special

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)

MIN_MC_TRIALS = 10_000


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a sensing quantity."""


@dataclass(frozen=True)
class SensingParams:
    delta_delta: float = -0.09
    sigma: float = 3.3
    rho: float = 0.0
    beta: float = 0.95
    antennas: int = 1

    def __post_init__(self):
        if not self.delta_delta < 0:
            raise DomainError(f"delta_delta must be negative, got {self.delta_delta}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not 0 <= self.rho < 1:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if int(self.antennas) != self.antennas or self.antennas < 1:
            raise DomainError(f"antennas must be an integer >= 1, got {self.antennas}")

    @property
    def snr_step(self) -> float:
        """Normalized per-ICR mean shift sqrt(M) * delta_delta / sigma (negative)."""
        return math.sqrt(self.antennas) * self.delta_delta / self.sigma


def q_function(x):
    """Upper tail of the standard normal, accepting scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("q_function requires finite input")
    out = 0.5 * special.erfc(arr / _SQRT2)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=1024)
def q_inverse(p: float) -> float:
    if not (isinstance(p, (int, float, np.floating)) and 0.0 < p < 1.0):
        raise DomainError(f"q_inverse requires p in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    # Solve on the tail nearest to p so that tiny probabilities keep their
    # relative resolution, then mirror.
    tail = min(p, 1.0 - p)
    root = optimize.brentq(
        lambda z: 0.5 * math.erfc(z / _SQRT2) - tail, 0.0, 40.0, xtol=1e-14, rtol=1e-15, maxiter=200
    )
    return root if p < 0.5 else -root


def correlation_gain(cluster_size, rho: float):
    """((1 - rho) c + 2 rho) / (1 + rho): effective number of independent reports."""
    c = np.asarray(cluster_size, dtype=float)
    # written around c = 1 so a single ICR gets exactly 1
    out = 1.0 + (1.0 - rho) * (c - 1.0) / (1.0 + rho)
    return float(out) if out.ndim == 0 else out


def pfa_lss(params: SensingParams) -> float:
    return 1.0 - q_function(params.snr_step + q_inverse(params.beta))


def pfa_css(params: SensingParams, cluster_size):
    c = np.asarray(cluster_size, dtype=float)
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise DomainError("cluster_size must be finite and non-negative")
    arg = params.snr_step * np.sqrt(correlation_gain(c, params.rho)) + q_inverse(params.beta)
    return 1.0 - q_function(arg)


def _normal_mass(upper, width):
    # Standard normal mass on [upper - width, upper]; signed when width < 0.
    upper = np.asarray(upper, dtype=float)
    width = np.asarray(width, dtype=float)
    half = 0.5 * width
    mid = upper - half
    nodes = mid[..., None] + half[..., None] * _GL_NODES
    quad = half * np.sum(_GL_WEIGHTS * _INV_SQRT_2PI * np.exp(-0.5 * nodes**2), axis=-1)
    direct = special.ndtr(upper) - special.ndtr(upper - width)
    return np.where(np.abs(width) < 0.5, quad, direct)


def cooperation_gain(params: SensingParams, excess):
    """pfa_lss - pfa_css(1 + excess), free of cancellation for small excess.

    ``excess`` is the cluster size minus one and may be negative down to -1.
    The difference of the two tail probabilities is evaluated as the normal
    mass between the two arguments, so gains far below machine epsilon
    relative to pfa itself are still resolved.
    """
    e = np.asarray(excess, dtype=float)
    if np.any(e < -1.0):
        raise DomainError("cluster size below zero")
    lift = (1.0 - params.rho) * e / (1.0 + params.rho)
    root_minus_one = lift / (np.sqrt(1.0 + lift) + 1.0)
    arg_lss = params.snr_step + q_inverse(params.beta)
    # pfa = Phi(arg); the cooperative argument sits below arg_lss by this width.
    width = -params.snr_step * root_minus_one
    out = _normal_mass(np.full_like(width, arg_lss), width)
    return float(out) if out.ndim == 0 else out


def ar1_covariance(c: int, rho: float) -> np.ndarray:
    return linalg.toeplitz(rho ** np.arange(c))


def ar1_precision_rowsum(c: int, rho: float) -> float:
    """1' inv(S) 1 for the c x c exponential-correlation matrix, by direct solve."""
    if int(c) != c or c < 1:
        raise DomainError(f"c must be an integer >= 1, got {c}")
    if rho >= 1:
        raise np.linalg.LinAlgError(f"correlation matrix is singular for rho={rho}")
    sigma = ar1_covariance(int(c), rho)
    ones = np.ones(int(c))
    return float(ones @ np.linalg.solve(sigma, ones))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int


def mc_lrt_pfa(
    params: SensingParams, c: int, trials: int = 1_000_000, seed: int = 0, chunk: int = 200_000
) -> MonteCarloEstimate:
    """Monte-Carlo false-alarm rate of the weighted-sum test on a c-ICR cluster.

    The near hypothesis has mean 0 per antenna and the far hypothesis mean
    ``delta_delta``; the M-antenna combined SNR of each ICR therefore has mean
    M*mu and variance M*sigma^2, with exponential correlation across ICRs.
    The threshold is the ``beta``-quantile of the statistic under the near
    hypothesis (computed from the matrix algebra, not the closed form) and a
    false alarm is the statistic exceeding it when the far hypothesis holds.
    """
    if trials < MIN_MC_TRIALS:
        raise DomainError(
            f"mc_lrt_pfa needs at least {MIN_MC_TRIALS} trials for a meaningful estimate, got {trials}"
        )
    c = int(c)
    if c < 1:
        raise DomainError("cluster must contain at least one ICR")
    m = params.antennas
    cov = ar1_covariance(c, params.rho)
    ones = np.ones(c)
    weights = np.linalg.solve(cov, ones)
    weights /= ones @ weights
    scale = math.sqrt(m) * params.sigma
    null_sd = scale * math.sqrt(weights @ cov @ weights)
    threshold = null_sd * special.ndtri(params.beta)
    chol = np.linalg.cholesky(cov)
    far_mean = m * params.delta_delta

    rng = np.random.default_rng(seed)
    hits = 0
    remaining = trials
    while remaining:
        size = min(chunk, remaining)
        y = far_mean + scale * rng.standard_normal((size, c)) @ chol.T
        hits += int(np.count_nonzero(y @ weights > threshold))
        remaining -= size
    p = hits / trials
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials)
