"""Tabu search over ADD/DEL/SWAP moves under the oscillating penalty."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from enum import IntEnum
from typing import Sequence

import numpy as np

from . import _kernels as K
from ._rng import as_rng
from .graph import Graph
from .penalty import step_size
from .solution import Move, MoveKind, Solution


class Label(IntEnum):
    FORBID_INSERT = K.FORBID_INSERT
    FORBID_REMOVE = K.FORBID_REMOVE


class TabuList:
    """Fixed-capacity FIFO of ForbidInsert/ForbidRemove labels.

    Stored as a ring buffer plus, per (label, vertex), the index of its most
    recent push; a label is active iff that push is among the last
    ``capacity`` pushes.
    """

    def __init__(self, capacity: int, n: int):
        if capacity < 1:
            raise ValueError("tabu capacity must be positive")
        self.seq = np.full((2, n), -1, dtype=np.int64)
        self.ring = np.zeros((capacity, 2), dtype=np.int64)
        self.meta = np.zeros(1, dtype=np.int64)

    @property
    def capacity(self) -> int:
        return self.ring.shape[0]

    def push(self, label: Label, v: int) -> None:
        K.tabu_push(self.seq, self.ring, self.meta, int(label), int(v))

    def is_active(self, label: Label, v: int) -> bool:
        return K.tabu_blocking(self.seq, self.meta, self.capacity, int(label), int(v)) >= 0

    def is_tabu(self, move: Move) -> bool:
        if move.kind == MoveKind.ADD:
            return self.is_active(Label.FORBID_INSERT, move.i)
        if move.kind == MoveKind.DEL:
            return self.is_active(Label.FORBID_REMOVE, move.j)
        return self.is_active(Label.FORBID_INSERT, move.i) or self.is_active(Label.FORBID_REMOVE, move.j)

    def labels(self) -> list[tuple[Label, int]]:
        """Current labels, oldest first."""
        pushes = int(self.meta[0])
        cap = self.capacity
        return [(Label(int(self.ring[s % cap, 0])), int(self.ring[s % cap, 1]))
                for s in range(max(0, pushes - cap), pushes)]

    def __len__(self):
        return min(int(self.meta[0]), self.capacity)

    def __contains__(self, label):
        return self.is_active(*label)


@dataclass(frozen=True)
class SearchParams:
    n_restart: int = 10
    i_max: int = 20000
    i_ni: int = 10000
    i_pert: int = 100
    rho: float = 0.2
    n_tabu: int = 12
    t_max_ip: float = 1.0
    alpha_min: float = 0.1
    alpha_max: float = 1.1
    beta: float = 1.3
    n_free_init: int = 50
    use_ip: bool = True
    use_swap: bool = True
    # 0 = no cap; a positive cap makes the IP stage independent of machine speed
    ip_node_limit: int = 0

    def __post_init__(self):
        for name in ("n_restart", "i_pert", "n_tabu", "n_free_init", "beta"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.i_max < 0 or self.i_ni < 0 or self.ip_node_limit < 0:
            raise ValueError("iteration limits must be nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if not self.alpha_max > self.alpha_min:
            raise ValueError("alpha_max must exceed alpha_min")

    @classmethod
    def dimacs(cls, **kw) -> "SearchParams":
        """Shorter tabu phases used for the larger DIMACS/BHOSLIB graphs."""
        return cls(**{"i_max": 2000, "i_ni": 1000, **kw})

    def with_(self, **kw) -> "SearchParams":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


def _candidate(kind, i, j, dw, dnd, pen):
    dw, dnd = int(dw), int(dnd)
    return Move(MoveKind(kind), i=int(i), j=int(j), d_weight=dw, d_nondominated=dnd, delta_cost=dw + pen * dnd)


def evaluate_singletons(sol: Solution, g: Graph, alpha: float) -> tuple[list[Move], list[Move]]:
    """All ADD and DEL moves, each list ranked by penalized delta then vertex id."""
    cptr, cidx = g.closed
    pen = alpha * g.w_max
    gain = np.empty(g.n, dtype=np.int64)
    crit = np.empty(g.n, dtype=np.int64)
    K.cover_gain(cptr, cidx, sol.cover_count, gain)
    K.critical(cptr, cidx, sol.cover_count, crit)
    w = g.weights
    adds = [_candidate(K.ADD, v, -1, w[v], -gain[v], pen) for v in np.flatnonzero(~sol.in_set)]
    dels = [_candidate(K.DEL, -1, v, -w[v], crit[v], pen) for v in np.flatnonzero(sol.in_set)]
    adds.sort(key=lambda m: (m.delta_cost, m.i))
    dels.sort(key=lambda m: (m.delta_cost, m.j))
    return adds, dels


def restricted_swaps(sol: Solution, g: Graph, add_ranked: Sequence[Move], del_ranked: Sequence[Move],
                     alpha: float, k: int | None = None) -> list[Move]:
    """SWAP(i, j) for i among the first k ADD moves and j among the first k DEL moves.

    Each pair gets its exact joint delta. ``k`` defaults to ceil(sqrt(n)).
    """
    if k is None:
        k = K.ceil_sqrt(g.n)
    top_a = np.array([m.i for m in add_ranked[:k]], dtype=np.int64)
    top_d = np.array([m.j for m in del_ranked[:k]], dtype=np.int64)
    if len(top_a) == 0 or len(top_d) == 0:
        return []
    cnt = len(top_a) * len(top_d)
    dw = np.empty(cnt, dtype=np.int64)
    dnd = np.empty(cnt, dtype=np.int64)
    cptr, cidx = g.closed
    K.swap_eval(cptr, cidx, g.weights, sol.cover_count, top_a, top_d,
                np.zeros(g.n, dtype=np.bool_), dw, dnd, 0)
    pen = alpha * g.w_max
    kd = len(top_d)
    return [_candidate(K.SWAP, top_a[p // kd], top_d[p % kd], dw[p], dnd[p], pen) for p in range(cnt)]


def select_best_non_tabu(candidates: Sequence[Move], tabu: TabuList, f_best: float, sol: Solution) -> Move:
    """Lowest-delta admissible move (aspiration: tabu but yields a new best feasible solution)."""
    if not candidates:
        raise ValueError("empty candidate list")
    c = len(candidates)
    kind = np.array([m.kind for m in candidates], dtype=np.int64)
    # kernel convention: va = vertex entering (ADD, SWAP) or leaving (DEL), vb = vertex leaving a SWAP
    va = np.array([m.j if m.kind == MoveKind.DEL else m.i for m in candidates], dtype=np.int64)
    vb = np.array([m.j if m.kind == MoveKind.SWAP else -1 for m in candidates], dtype=np.int64)
    dw = np.array([m.d_weight for m in candidates], dtype=np.int64)
    dnd = np.array([m.d_nondominated for m in candidates], dtype=np.int64)
    delta = np.array([m.delta_cost for m in candidates], dtype=np.float64)
    p = K.select_move(c, kind, va, vb, dw, dnd, delta, tabu.seq, tabu.meta, tabu.capacity,
                      sol.total_weight, sol.num_nondominated, f_best)
    return candidates[int(p)]


def update_tabu(tabu: TabuList, move: Move) -> None:
    if move.kind == MoveKind.ADD:
        tabu.push(Label.FORBID_REMOVE, move.i)
    else:
        tabu.push(Label.FORBID_INSERT, move.j)


@dataclass
class Trace:
    alpha: np.ndarray
    f: np.ndarray
    W: np.ndarray
    Nd: np.ndarray
    feasible: np.ndarray
    new_best: np.ndarray
    swap_evals: np.ndarray

    COLUMNS = ("iteration", "alpha", "f", "W", "Nd", "feasible", "new_best")

    @classmethod
    def allocate(cls, size: int) -> "Trace":
        return cls(np.zeros(size), np.zeros(size), np.zeros(size, np.int64), np.zeros(size, np.int64),
                   np.zeros(size, np.bool_), np.zeros(size, np.bool_), np.zeros(size, np.int64))

    def truncate(self, length: int) -> "Trace":
        return Trace(*(getattr(self, f)[:length] for f in self.__dataclass_fields__))

    def __len__(self):
        return len(self.alpha)

    def rows(self):
        for it in range(len(self)):
            yield (it, float(self.alpha[it]), float(self.f[it]), int(self.W[it]), int(self.Nd[it]),
                   int(self.feasible[it]), int(self.new_best[it]))


@dataclass
class SearchResult:
    best: Solution
    current: Solution
    trace: Trace
    iterations: int
    criteria: np.ndarray = field(default_factory=lambda: np.zeros(4, np.int64))
    audit: dict = field(default_factory=dict)


def tabu_search(g: Graph, s0: Solution, params: SearchParams, rng, freq=None, audit: bool = False) -> SearchResult:
    """Tabu search with oscillating penalty and periodic ruin-and-recreate.

    Runs until ``i_ni`` iterations pass without a new best feasible solution
    or ``i_max`` iterations are reached. ``s0`` is not modified. If ``freq``
    is given, the per-vertex iteration counts spent in the current solution
    are added to it. With ``audit`` every node elimination is followed by a
    from-scratch recount; totals land in ``result.audit``.
    """
    rng = as_rng(rng)
    cur = s0.copy()
    best = Solution.empty(g)
    cptr, cidx = g.closed
    n = g.n
    tabu = TabuList(params.n_tabu, n)
    ft = np.zeros(n, dtype=np.int64)
    fe = np.where(cur.in_set, 0, -1).astype(np.int64)
    trace = Trace.allocate(params.i_max)
    crit_counts = np.zeros(4, dtype=np.int64)
    audit_out = np.zeros(3, dtype=np.int64)
    step = step_size(params.alpha_min, params.alpha_max, params.beta, max(n, 1))
    iters = K.search_loop(
        cptr, cidx, g.weights, g.w_max, cur.in_set, cur.cover_count, cur.stats, best.in_set, best.stats,
        tabu.seq, tabu.ring, tabu.meta, ft, fe, rng.state,
        params.i_max, params.i_ni, params.i_pert, params.rho,
        params.alpha_min, params.alpha_max, step, params.use_swap,
        trace.alpha, trace.f, trace.W, trace.Nd, trace.feasible, trace.new_best, trace.swap_evals,
        crit_counts, audit_out, audit,
    )
    best.recount(g)
    if freq is not None:
        freq.add_totals(ft)
    result = SearchResult(best, cur, trace.truncate(iters), int(iters), crit_counts)
    if audit:
        result.audit = {"mismatches": int(audit_out[0]), "redundant": int(audit_out[1]), "checks": int(audit_out[2])}
    return result
