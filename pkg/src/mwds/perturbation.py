"""Ruin-and-recreate perturbation of the best feasible solution."""
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._rng import as_rng
from .graph import Graph
from .solution import Solution

CRITERIA = ("best_count_ratio", "second_count_ratio", "best_weight_ratio", "second_weight_ratio")


@dataclass
class GreedyScores:
    """Per vertex: number and total weight of non-dominated vertices it would cover."""

    delta: np.ndarray
    weight: np.ndarray


def greedy_scores(g: Graph, sol: Solution) -> GreedyScores:
    cptr, cidx = g.closed
    delta = np.empty(g.n, dtype=np.int64)
    wsum = np.empty(g.n, dtype=np.int64)
    K.greedy_scores(cptr, cidx, g.weights, sol.cover_count, delta, wsum)
    return GreedyScores(delta, wsum)


def ruin(s_best: Solution, rho: float, rng, g: Graph) -> Solution:
    """Copy of ``s_best`` with floor(rho*|S|) uniformly chosen members removed."""
    rng = as_rng(rng)
    out = s_best.copy()
    cptr, cidx = g.closed
    q = K.ruin_count(rho, len(out))
    K.ruin(cptr, cidx, g.weights, out.in_set, out.cover_count, out.stats, q, rng.state)
    return out


def greedy_reconstruct(g: Graph, partial: Solution, rng, criteria_counts=None) -> Solution:
    """Greedy completion of ``partial`` to a dominating set.

    Each step draws one of the four ranking criteria uniformly and inserts
    the first- or second-ranked vertex by count or weight of newly covered
    vertices per unit weight. ``criteria_counts`` (int64[4]) tallies the draws.
    """
    rng = as_rng(rng)
    out = partial.copy()
    counts = np.zeros(4, dtype=np.int64) if criteria_counts is None else criteria_counts
    cptr, cidx = g.closed
    K.reconstruct(cptr, cidx, g.weights, out.in_set, out.cover_count, out.stats, rng.state, counts)
    return out


def perturb(s_best: Solution, g: Graph, rho: float, rng) -> Solution:
    rng = as_rng(rng)
    out = s_best.copy()
    cptr, cidx = g.closed
    dummy = np.zeros(0, dtype=np.int64)
    K.perturb(cptr, cidx, g.weights, out.in_set, out.cover_count, out.stats, rho, rng.state,
              np.zeros(4, dtype=np.int64), dummy, dummy, -1)
    return out
