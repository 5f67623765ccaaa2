"""Diffusion of cooperative spectrum sensing among selfish cognitive radios."""

from .abm import AbmResult, Population, init_population, run_abm, step
from .comparative import (
    ConducivenessVerdict,
    DominanceVerdict,
    compare_conduciveness,
    parameter_sweep,
    stochastic_dominance,
)
from .equilibrium import (
    EquilibriumReport,
    Trajectory,
    find_all_fixed_points,
    iterate_fixed_point,
    meanfield_dynamics,
    solve_equilibrium,
)
from .game import (
    Action,
    GameConfig,
    best_response,
    coop_probability,
    cooperating_density,
    payoff,
    phi,
    return_function,
    utility,
)
from .network import (
    DegreeDistribution,
    PPPCost,
    TabulatedCost,
    cost_cdf,
    edge_perspective,
    ppp_degree_distribution,
    ppp_intensity,
    sample_cost,
)
from .scenario import Scenario
from .sensing import (
    SensingParams,
    ar1_precision_rowsum,
    mc_lrt_pfa,
    pfa_css,
    pfa_lss,
    q_function,
    q_inverse,
)

__version__ = "0.1.0"
