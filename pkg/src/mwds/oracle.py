"""Exhaustive minimum-weight dominating set for small graphs (verification only)."""
from .graph import Graph, Instance

MAX_VERTICES = 25


def brute_force_optimum(inst) -> tuple[int, list[int]]:
    """Optimal weight and vertex set (0-based), by include-first enumeration over bitmasks.

    Branches are cut when the partial weight reaches the incumbent or when a
    vertex can no longer be dominated by the undecided vertices. Among optimal
    sets the lexicographically smallest sorted id list is returned.
    """
    g: Graph = inst.graph if isinstance(inst, Instance) else inst
    n = g.n
    if n > MAX_VERTICES:
        raise ValueError(f"brute force limited to {MAX_VERTICES} vertices, got {n}")
    if n == 0:
        return 0, []
    w = [int(x) for x in g.weights]
    nbr = [(1 << v) | sum(1 << int(u) for u in g.neighbors(v)) for v in range(n)]
    full = (1 << n) - 1
    reach = [0] * (n + 1)
    for v in range(n - 1, -1, -1):
        reach[v] = reach[v + 1] | nbr[v]

    best_w = sum(w) + 1
    best_set = 0

    def dfs(v, covered, chosen, cost):
        nonlocal best_w, best_set
        if covered == full:
            if cost < best_w:
                best_w, best_set = cost, chosen
            return
        if v == n or cost >= best_w or (covered | reach[v]) != full:
            return
        dfs(v + 1, covered | nbr[v], chosen | (1 << v), cost + w[v])
        dfs(v + 1, covered, chosen, cost)

    dfs(0, 0, 0, 0)
    return best_w, [v for v in range(n) if best_set >> v & 1]
