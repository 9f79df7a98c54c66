"""Frequency-based variable fixing and exact resolution of the reduced covering ILP."""
from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels as K
from .graph import Graph
from .solution import Solution


class FrequencyCounter:
    """Iterations each vertex spent in the current solution.

    A span opened by :meth:`included` is only added to the total when it is
    closed by :meth:`removed` (or read out by :meth:`flush`).
    """

    def __init__(self, n: int):
        self.total = np.zeros(n, dtype=np.int64)
        self.entered = np.full(n, -1, dtype=np.int64)

    def included(self, v: int, t: int) -> None:
        if self.entered[v] >= 0:
            raise RuntimeError(f"vertex {v} included twice without removal")
        self.entered[v] = t

    def removed(self, v: int, t: int) -> None:
        if self.entered[v] < 0:
            raise RuntimeError(f"vertex {v} removed while not included")
        if t < self.entered[v]:
            raise RuntimeError("event times must be nondecreasing")
        self.total[v] += t - self.entered[v]
        self.entered[v] = -1

    def flush(self, t: int) -> None:
        """Credit open spans up to ``t``; they stay open."""
        open_ = self.entered >= 0
        self.total[open_] += t - self.entered[open_]
        self.entered[open_] = t

    def add_totals(self, counts) -> None:
        self.total += counts

    def __iadd__(self, other: "FrequencyCounter"):
        self.total += other.total
        return self


@dataclass
class ReducedProblem:
    """Covering ILP on the full graph with only ``free`` vertices allowed in the set."""

    graph: Graph
    free: np.ndarray

    @property
    def n_free(self) -> int:
        return int(np.count_nonzero(self.free))

    def to_lp(self) -> str:
        """CPLEX-LP text of the reduced model, fixed variables dropped."""
        g = self.graph
        free = np.flatnonzero(self.free)
        obj = " + ".join(f"{int(g.weights[v])} x{v + 1}" for v in free)
        rows = []
        for i in range(g.n):
            nb = [v for v in [i, *g.neighbors(i)] if self.free[v]]
            lhs = " + ".join(f"x{v + 1}" for v in sorted(nb)) or "0 x1"
            rows.append(f" c{i + 1}: {lhs} >= 1")
        return "\n".join([
            "\\ reduced minimum-weight dominating set",
            "Minimize", f" obj: {obj or '0'}", "Subject To", *rows,
            "Binary", *(f" x{v + 1}" for v in free), "End", "",
        ])


class Verdict(Enum):
    OPTIMAL = "optimal"
    FEASIBLE_ONLY = "feasible_only"
    NO_SOLUTION = "no_solution"


@dataclass
class IpOutcome:
    verdict: Verdict
    incumbent: Solution | None
    proved_whole_problem: bool = False
    nodes: int = 0
    seconds: float = 0.0


def build_reduced(g: Graph, s_best: Solution, freq: FrequencyCounter, n_free: int) -> ReducedProblem:
    """Free set: members of ``s_best`` plus the most frequently used other vertices.

    ``max(0, n_free - |S_best|)`` extra vertices are taken by decreasing
    frequency, ties by id.
    """
    free = s_best.in_set.copy()
    n_freq = min(max(0, n_free - len(s_best)), g.n - len(s_best))
    if n_freq > 0:
        others = np.flatnonzero(~free)
        order = np.lexsort((others, -freq.total[others]))
        free[others[order[:n_freq]]] = True
    return ReducedProblem(g, free)


def solve_branch_bound(rp: ReducedProblem, warm_start: Solution, time_limit: float,
                       node_limit: int = 0) -> IpOutcome:
    """Exact depth-first branch-and-bound on the reduced model.

    Starts from ``warm_start`` as incumbent. Verdict is OPTIMAL when the tree is
    exhausted before ``time_limit`` seconds (and ``node_limit`` nodes, if
    positive); otherwise FEASIBLE_ONLY with the best incumbent found.
    """
    g = rp.graph
    if not warm_start.feasible or np.any(warm_start.in_set & ~rp.free):
        raise ValueError("warm start must be a feasible subset of the free vertices")
    incumbent = warm_start.copy()
    if time_limit <= 0:
        return IpOutcome(Verdict.FEASIBLE_ONLY, incumbent)
    cptr, cidx = g.closed
    start = time.perf_counter()
    best_in = incumbent.in_set.copy()
    _, exhausted, nodes = K.branch_and_bound(cptr, cidx, g.weights, rp.free, best_in,
                                             start + time_limit, node_limit)
    incumbent = Solution.from_mask(g, best_in)
    verdict = Verdict.OPTIMAL if exhausted else Verdict.FEASIBLE_ONLY
    return IpOutcome(verdict, incumbent,
                     proved_whole_problem=bool(exhausted) and rp.n_free == g.n,
                     nodes=int(nodes), seconds=time.perf_counter() - start)


def lower_bound(rp: ReducedProblem, fixed_in=(), fixed_out=()) -> float:
    """Pruning bound of the branch-and-bound at the node given by the fixings.

    Returns inf when some vertex can no longer be covered.
    """
    g = rp.graph
    status = np.where(rp.free, 0, 2).astype(np.int8)
    status[list(fixed_out)] = 2
    status[list(fixed_in)] = 1
    in_set = status == 1
    cover = np.zeros(g.n, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)
    cptr, cidx = g.closed
    K.recount(cptr, cidx, g.weights, in_set, cover, stats)
    reach = np.zeros(g.n, dtype=np.int64)
    K.recount(cptr, cidx, g.weights, status != 2, reach, np.zeros(2, dtype=np.int64))
    if np.any(reach == 0):
        return float("inf")
    used = np.zeros(g.n, dtype=np.bool_)
    return float(stats[0] + K.lb_core(cptr, cidx, g.weights, status, cover, used))


def adapt_n_free(outcome: IpOutcome, n_free: int, n: int) -> tuple[int, bool]:
    """Next size of the free set and whether the whole problem is solved."""
    if outcome.verdict is Verdict.OPTIMAL:
        if n_free >= n:
            return n, True
        return min(n, 2 * n_free), False
    return max(1, n_free // 2), False
