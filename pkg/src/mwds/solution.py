"""Candidate dominating sets with incrementally maintained cover counts."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _kernels as K
from ._rng import as_rng
from .graph import Graph


class MoveKind(IntEnum):
    ADD = K.ADD
    DEL = K.DEL
    SWAP = K.SWAP


@dataclass(frozen=True)
class Move:
    """ADD(i), DEL(j) or SWAP(i, j); ``i`` enters the set, ``j`` leaves it.

    ``d_weight`` and ``d_nondominated`` are the exact changes of W(S) and
    N^d(S); ``delta_cost`` is the penalized change at the alpha it was
    evaluated with.
    """

    kind: MoveKind
    i: int = -1
    j: int = -1
    d_weight: int = 0
    d_nondominated: int = 0
    delta_cost: float = 0.0

    @classmethod
    def add(cls, i, **kw):
        return cls(MoveKind.ADD, i=int(i), **kw)

    @classmethod
    def delete(cls, j, **kw):
        return cls(MoveKind.DEL, j=int(j), **kw)

    @classmethod
    def swap(cls, i, j, **kw):
        return cls(MoveKind.SWAP, i=int(i), j=int(j), **kw)

    def __repr__(self):
        args = {MoveKind.ADD: f"{self.i}", MoveKind.DEL: f"{self.j}"}.get(self.kind, f"{self.i}, {self.j}")
        return f"{self.kind.name}({args}; {self.delta_cost:+g})"


class Solution:
    """Vertex set S with cover counts C(i) = |N(i) ∩ S|, W(S) and N^d(S)."""

    __slots__ = ("in_set", "cover_count", "stats")

    def __init__(self, in_set, cover_count, stats):
        self.in_set = in_set
        self.cover_count = cover_count
        self.stats = stats

    @classmethod
    def empty(cls, g: Graph) -> "Solution":
        return cls(np.zeros(g.n, dtype=np.bool_), np.zeros(g.n, dtype=np.int64),
                   np.array([0, g.n], dtype=np.int64))

    @classmethod
    def from_vertices(cls, g: Graph, vertices) -> "Solution":
        in_set = np.zeros(g.n, dtype=np.bool_)
        in_set[np.asarray(list(vertices), dtype=np.int64)] = True
        return cls.from_mask(g, in_set)

    @classmethod
    def from_mask(cls, g: Graph, in_set) -> "Solution":
        sol = cls(np.array(in_set, dtype=np.bool_), np.zeros(g.n, dtype=np.int64), np.zeros(2, dtype=np.int64))
        sol.recount(g)
        return sol

    def recount(self, g: Graph) -> None:
        cptr, cidx = g.closed
        K.recount(cptr, cidx, g.weights, self.in_set, self.cover_count, self.stats)

    def copy(self) -> "Solution":
        return Solution(self.in_set.copy(), self.cover_count.copy(), self.stats.copy())

    @property
    def total_weight(self) -> int:
        return int(self.stats[0])

    @property
    def num_nondominated(self) -> int:
        return int(self.stats[1])

    @property
    def feasible(self) -> bool:
        return self.stats[1] == 0

    @property
    def members(self) -> list[int]:
        return np.flatnonzero(self.in_set).tolist()

    def __len__(self):
        return int(np.count_nonzero(self.in_set))

    def __contains__(self, v):
        return bool(self.in_set[v])

    def to_json(self) -> dict:
        """1-based sorted member ids and the total weight."""
        return {"weight": self.total_weight, "vertices": [v + 1 for v in self.members]}

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return (np.array_equal(self.in_set, other.in_set)
                and np.array_equal(self.cover_count, other.cover_count)
                and np.array_equal(self.stats, other.stats))

    def __repr__(self):
        return f"Solution(W={self.total_weight}, Nd={self.num_nondominated}, S={self.members})"


def construct_random(g: Graph, rng) -> Solution:
    """Insert uniformly drawn vertices covering a non-dominated vertex until feasible."""
    rng = as_rng(rng)
    sol = Solution.empty(g)
    cptr, cidx = g.closed
    K.construct(cptr, cidx, g.weights, sol.in_set, sol.cover_count, sol.stats, rng.state)
    return sol


def penalized_cost(sol: Solution, alpha: float, w_max: int) -> float:
    return sol.total_weight + alpha * w_max * sol.num_nondominated


def apply_move(sol: Solution, move: Move, g: Graph) -> Solution:
    """Apply ``move`` in place, touching only the affected closed neighbourhoods."""
    cptr, cidx = g.closed
    args = (cptr, cidx, g.weights, sol.in_set, sol.cover_count, sol.stats)
    if move.kind == MoveKind.ADD:
        assert not sol.in_set[move.i], f"ADD({move.i}) on a member"
        K.apply_add(*args, move.i)
    elif move.kind == MoveKind.DEL:
        assert sol.in_set[move.j], f"DEL({move.j}) on a non-member"
        K.apply_remove(*args, move.j)
    else:
        assert move.i != move.j and not sol.in_set[move.i] and sol.in_set[move.j], f"invalid {move!r}"
        K.apply_add(*args, move.i)
        K.apply_remove(*args, move.j)
    return sol


def is_redundant(sol: Solution, g: Graph, j: int) -> bool:
    """True if member ``j`` can leave without increasing N^d(S)."""
    cptr, cidx = g.closed
    return bool(sol.in_set[j]) and bool(np.all(sol.cover_count[cidx[cptr[j]:cptr[j + 1]]] >= 2))


def eliminate_redundant(sol: Solution, g: Graph) -> Solution:
    """Repeatedly remove the heaviest redundant member (smallest id on ties), in place."""
    cptr, cidx = g.closed
    dummy = np.zeros(0, dtype=np.int64)
    K.eliminate(cptr, cidx, g.weights, sol.in_set, sol.cover_count, sol.stats, dummy, dummy, -1)
    return sol


def is_dominating(g: Graph, vertices) -> bool:
    """Independent feasibility check straight from the adjacency lists."""
    covered = np.zeros(g.n, dtype=bool)
    for v in vertices:
        covered[v] = True
        covered[g.neighbors(v)] = True
    return bool(covered.all())
