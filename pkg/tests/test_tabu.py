import math

import numpy as np
import pytest

from mwds import Graph, Move, SearchParams, Solution, TabuList, generate_instance, tabu_search
from mwds._rng import Rng
from mwds.solution import MoveKind, is_dominating
from mwds.tabu import Label, evaluate_singletons, restricted_swaps, select_best_non_tabu, update_tabu


def test_singleton_deltas_path(path3):
    adds, dels = evaluate_singletons(Solution.empty(path3), path3, 1.0)
    assert [m.i for m in adds] == [1, 0, 2]
    assert [m.delta_cost for m in adds] == [-10, -5, -4]
    assert dels == []


def test_singleton_deltas_match_recount():
    g = generate_instance(30, 80, "T2", 4).graph
    sol = Solution.from_vertices(g, range(0, 30, 3))
    alpha = 0.37
    base = sol.total_weight + alpha * g.w_max * sol.num_nondominated
    adds, dels = evaluate_singletons(sol, g, alpha)
    for m in adds + dels:
        mask = sol.in_set.copy()
        mask[m.i if m.kind == MoveKind.ADD else m.j] ^= True
        after = Solution.from_mask(g, mask)
        assert after.total_weight + alpha * g.w_max * after.num_nondominated - base == pytest.approx(m.delta_cost)


def test_swap_count_bound():
    g = generate_instance(100, 400, "T1", 2).graph
    sol = Solution.from_vertices(g, range(0, 100, 2))
    adds, dels = evaluate_singletons(sol, g, 0.5)
    assert len(adds) >= 10 and len(dels) >= 10
    swaps = restricted_swaps(sol, g, adds, dels, 0.5)
    assert len(swaps) <= 100
    assert len(swaps) == 100


def test_swap_exact_joint_delta():
    g = generate_instance(25, 60, "T2", 8).graph
    sol = Solution.from_vertices(g, [0, 3, 7, 11, 19])
    adds, dels = evaluate_singletons(sol, g, 0.8)
    base = sol.total_weight + 0.8 * g.w_max * sol.num_nondominated
    for m in restricted_swaps(sol, g, adds, dels, 0.8):
        mask = sol.in_set.copy()
        mask[m.i] = True
        mask[m.j] = False
        after = Solution.from_mask(g, mask)
        assert after.total_weight + 0.8 * g.w_max * after.num_nondominated - base == pytest.approx(m.delta_cost)


def test_swap_single_member_and_full_set(k4):
    sol = Solution.from_vertices(k4, [0])
    adds, dels = evaluate_singletons(sol, k4, 1.0)
    assert len(restricted_swaps(sol, k4, adds, dels, 1.0)) <= math.ceil(math.sqrt(4))
    full = Solution.from_vertices(k4, range(4))
    adds, dels = evaluate_singletons(full, k4, 1.0)
    assert restricted_swaps(full, k4, adds, dels, 1.0) == []


def _moves():
    return [Move.add(3, delta_cost=-5.0, d_weight=2, d_nondominated=-2),
            Move.add(4, delta_cost=-3.0, d_weight=2, d_nondominated=-1),
            Move.delete(1, delta_cost=-1.0, d_weight=-4, d_nondominated=0)]


def test_select_plain_argmin(path3):
    sol = Solution.empty(Graph(6, [], [1] * 6))
    tabu = TabuList(12, 6)
    assert select_best_non_tabu(_moves(), tabu, 100, sol).i == 3


def test_select_skips_tabu():
    sol = Solution.empty(Graph(6, [], [1] * 6))
    tabu = TabuList(12, 6)
    tabu.push(Label.FORBID_INSERT, 3)
    assert select_best_non_tabu(_moves(), tabu, 100, sol).i == 4


def test_select_aspiration():
    g = Graph(6, [], [1] * 6)
    sol = Solution.from_vertices(g, range(6))
    tabu = TabuList(12, 6)
    tabu.push(Label.FORBID_REMOVE, 1)
    moves = [Move.add(0, delta_cost=1.0, d_weight=1), Move.delete(1, delta_cost=-1.0, d_weight=-1)]
    assert select_best_non_tabu(moves, tabu, 6, sol).kind == MoveKind.DEL
    # same move no longer improves on the best
    assert select_best_non_tabu(moves, tabu, 5, sol).kind == MoveKind.ADD


def test_select_deadlock_oldest():
    sol = Solution.empty(Graph(6, [], [1] * 6))
    tabu = TabuList(12, 6)
    tabu.push(Label.FORBID_INSERT, 4)
    tabu.push(Label.FORBID_INSERT, 3)
    tabu.push(Label.FORBID_REMOVE, 1)
    assert select_best_non_tabu(_moves(), tabu, -1, sol).i == 4


def test_update_tabu_labels():
    tabu = TabuList(12, 10)
    update_tabu(tabu, Move.add(5))
    assert tabu.labels()[-1] == (Label.FORBID_REMOVE, 5)
    update_tabu(tabu, Move.swap(2, 7))
    assert len(tabu) == 2 and tabu.labels()[-1] == (Label.FORBID_INSERT, 7)
    assert (Label.FORBID_REMOVE, 2) not in tabu and (Label.FORBID_INSERT, 2) not in tabu
    update_tabu(tabu, Move.delete(8))
    assert tabu.labels()[-1] == (Label.FORBID_INSERT, 8)


def test_tabu_fifo_eviction():
    tabu = TabuList(12, 20)
    for v in range(13):
        update_tabu(tabu, Move.add(v))
    assert len(tabu) == 12
    assert (Label.FORBID_REMOVE, 0) not in tabu
    assert (Label.FORBID_REMOVE, 1) in tabu
    assert tabu.labels()[0] == (Label.FORBID_REMOVE, 1)


def test_tabu_is_tabu_swap():
    tabu = TabuList(3, 5)
    tabu.push(Label.FORBID_REMOVE, 2)
    assert tabu.is_tabu(Move.swap(0, 2))
    assert tabu.is_tabu(Move.delete(2))
    assert not tabu.is_tabu(Move.add(2))


def test_search_path(path3):
    res = tabu_search(path3, Solution.from_vertices(path3, [0, 1, 2]), SearchParams(i_max=50, i_ni=20), Rng(1))
    assert res.best.members == [1] and res.best.total_weight == 2


def test_search_star(star5):
    s0 = Solution.from_vertices(star5, [0])
    res = tabu_search(star5, s0, SearchParams(i_max=500, i_ni=200), Rng(3))
    assert res.best.members == [1, 2, 3, 4] and res.best.total_weight == 4
    assert s0.members == [0]


def test_search_zero_iterations(path3):
    s0 = Solution.from_vertices(path3, [0, 1, 2])
    res = tabu_search(path3, s0, SearchParams(i_max=0), Rng(0))
    assert res.iterations == 0 and len(res.trace) == 0
    assert res.best.members == [1]


def test_search_trace_consistency():
    g = generate_instance(40, 120, "T1", 9).graph
    rng = Rng(9)
    from mwds import construct_random
    res = tabu_search(g, construct_random(g, rng), SearchParams(i_max=800, i_ni=800), rng)
    t = res.trace
    assert len(t) == res.iterations == 800
    assert np.allclose(t.f, t.W + t.alpha * g.w_max * t.Nd)
    assert np.array_equal(t.feasible, t.Nd == 0)
    assert is_dominating(g, res.best.members)
    feas_w = t.W[t.feasible]
    assert res.best.total_weight <= feas_w.min()
    assert res.criteria.sum() > 0


def test_search_frequency_total():
    from mwds import FrequencyCounter, construct_random
    g = generate_instance(30, 90, "T1", 1).graph
    rng = Rng(4)
    freq = FrequencyCounter(g.n)
    res = tabu_search(g, construct_random(g, rng), SearchParams(i_max=300, i_ni=300), rng, freq=freq)
    # a vertex is credited at most once per iteration
    assert freq.total.max() <= res.iterations
    assert freq.total.sum() > 0


def test_params_validation():
    with pytest.raises(ValueError):
        SearchParams(rho=1.5)
    with pytest.raises(ValueError):
        SearchParams(alpha_min=1.0, alpha_max=1.0)
    d = SearchParams.dimacs()
    assert (d.i_max, d.i_ni) == (2000, 1000)
    assert SearchParams().to_dict()["n_tabu"] == 12
