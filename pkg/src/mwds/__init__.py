"""Minimum-weight dominating sets by tabu search with an oscillating penalty,
ruin-and-recreate perturbation and an adaptive reduced integer program."""
from ._jit import NUMBA_ENABLED
from ._rng import Rng
from .driver import (
    GroupRow,
    InstanceResult,
    RunReport,
    aggregate_groups,
    fit_power_law,
    gap_percent,
    hts_ds,
)
from .graph import (
    Graph,
    Instance,
    ParseError,
    closed_neighborhood,
    generate_instance,
    parse_dimacs_clq,
    parse_instance,
    read_instance,
    serialize_instance,
)
from .oracle import brute_force_optimum
from .penalty import PenaltySchedule, step_size
from .perturbation import greedy_reconstruct, perturb, ruin
from .reduced_ip import (
    FrequencyCounter,
    IpOutcome,
    ReducedProblem,
    Verdict,
    adapt_n_free,
    build_reduced,
    solve_branch_bound,
)
from .solution import Move, MoveKind, Solution, apply_move, construct_random, eliminate_redundant, penalized_cost
from .tabu import SearchParams, TabuList, tabu_search

__version__ = "0.1.0"
