import itertools

import numpy as np
import pytest

from mwds import Graph, Instance, generate_instance

_ACCEPTANCE_LINES = []


def record_criterion(name, ok, detail="", skipped=False):
    tag = "SKIP" if skipped else ("PASS" if ok else "FAIL")
    line = f"[{tag}] {name}" + (f" -- {detail}" if detail else "")
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def path3():
    """a-b-c with weights 3, 2, 4."""
    return Graph(3, [(0, 1), (1, 2)], [3, 2, 4])


@pytest.fixture
def star5():
    """Center 0 (weight 10) with four unit-weight leaves."""
    return Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)], [10, 1, 1, 1, 1])


@pytest.fixture
def k4():
    return Graph(4, list(itertools.combinations(range(4), 2)), [1, 1, 1, 1])


def random_graph(rng, n, density, weights="T1"):
    total = n * (n - 1) // 2
    m = int(round(density * total))
    return generate_instance(n, m, weights, int(rng.integers(2**63))).graph


def enum_cover_optimum(g, free, fixed_in=(), fixed_out=()):
    """Minimum weight of a dominating set S with fixed_in ⊆ S ⊆ free minus fixed_out.

    Plain enumeration of all subsets of the open vertices, vectorised over
    bitmasks; inf if no such set dominates the graph.
    """
    fixed_in = set(int(v) for v in fixed_in)
    fixed_out = set(int(v) for v in fixed_out)
    assert g.n <= 63
    nb = [(1 << v) | sum(1 << int(u) for u in g.neighbors(v)) for v in range(g.n)]
    base_cov = 0
    for v in fixed_in:
        base_cov |= nb[v]
    base_w = sum(int(g.weights[v]) for v in fixed_in)
    open_vars = [int(v) for v in np.flatnonzero(free) if v not in fixed_in and v not in fixed_out]
    assert len(open_vars) <= 22
    cov = np.full(1, base_cov, dtype=np.uint64)
    wt = np.full(1, base_w, dtype=np.int64)
    for v in open_vars:
        cov = np.concatenate([cov, cov | np.uint64(nb[v])])
        wt = np.concatenate([wt, wt + int(g.weights[v])])
    ok = cov == np.uint64((1 << g.n) - 1)
    return float(wt[ok].min()) if ok.any() else float("inf")


def instance(g, name="g"):
    return Instance(g, name=name)
