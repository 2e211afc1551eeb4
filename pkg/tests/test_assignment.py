import itertools

import numpy as np

from bitrack import greedy_assign, hungarian


def brute_force_min(costs):
    """Exhaustive minimum over all full assignments of a square matrix."""
    n = costs.shape[0]
    best = None
    for perm in itertools.permutations(range(n)):
        total = sum(costs[i, perm[i]] for i in range(n))
        if best is None or total < best:
            best = total
    return best


def test_greedy_hand_trace():
    a = greedy_assign(np.array([[1.0, 2.0], [2.0, 1.0]]), (0, 1))
    assert set(a.pairs) == {(0, 0), (1, 1)}
    assert a.total_cost == 2.0


def test_greedy_single_pair():
    a = greedy_assign(np.array([[5.0]]), (0,))
    assert a.pairs == ((0, 0),)
    assert a.total_cost == 5.0


def test_greedy_all_infinite_is_empty():
    a = greedy_assign(np.full((3, 3), np.inf), (0, 1, 2))
    assert a.pairs == ()


def test_greedy_order_matters():
    costs = np.array([[1.0, 10.0], [2.0, 10.0]])
    first = greedy_assign(costs, (0, 1))
    assert dict(first.pairs) == {0: 0, 1: 1}
    second = greedy_assign(costs, (1, 0))
    assert dict(second.pairs) == {1: 0, 0: 1}


def test_greedy_ties_take_lowest_column():
    a = greedy_assign(np.array([[3.0, 3.0]]), (0,))
    assert a.pairs == ((0, 0),)


def test_greedy_skips_rows_with_no_feasible_column():
    costs = np.array([[np.inf, np.inf], [1.0, 2.0]])
    a = greedy_assign(costs, (0, 1))
    assert a.pairs == ((1, 0),)


def test_hungarian_hand_case():
    # brute force over all 6 permutations gives cost 5 at (0,1),(1,0),(2,2)
    costs = np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
    a = hungarian(costs)
    assert a.total_cost == 5.0
    assert set(a.pairs) == {(0, 1), (1, 0), (2, 2)}


def test_hungarian_identity_like():
    costs = np.ones((4, 4)) - np.eye(4)
    a = hungarian(costs)
    assert a.total_cost == 0.0
    assert set(a.pairs) == {(i, i) for i in range(4)}


def test_hungarian_single_row():
    a = hungarian(np.array([[7.0, 2.0, 9.0]]))
    assert a.pairs == ((0, 1),)
    assert a.total_cost == 2.0


def test_hungarian_rectangular_covers_smaller_dimension():
    rng = np.random.default_rng(21)
    for shape in [(3, 6), (6, 3), (1, 5), (5, 1)]:
        costs = rng.uniform(0, 10, size=shape)
        a = hungarian(costs)
        assert len(a.pairs) == min(shape)


def test_hungarian_infeasible_pairs_excluded():
    costs = np.array([[np.inf, 1.0], [np.inf, np.inf]])
    a = hungarian(costs)
    assert a.pairs == ((0, 1),)
    assert a.total_cost == 1.0


def test_hungarian_all_infeasible_is_empty():
    assert hungarian(np.full((2, 3), np.inf)).pairs == ()


def test_hungarian_handles_negative_costs():
    costs = np.array([[-5.0, 0.0], [0.0, -5.0]])
    a = hungarian(costs)
    assert a.total_cost == -10.0


def test_hungarian_matches_brute_force():
    rng = np.random.default_rng(22)
    for _ in range(60):
        n = int(rng.integers(1, 7))
        costs = rng.uniform(-10, 10, size=(n, n))
        assert hungarian(costs).total_cost == brute_force_min(costs)


def test_greedy_never_beats_hungarian():
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(1, 8))
        costs = rng.uniform(0, 10, size=(n, n))
        g = greedy_assign(costs, range(n))
        h = hungarian(costs)
        assert len(g.pairs) == len(h.pairs) == n
        assert g.total_cost >= h.total_cost - 1e-12


def test_hungarian_row_label_equivariance():
    rng = np.random.default_rng(24)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        costs = rng.uniform(0, 10, size=(n, n))  # continuous: optimum unique a.s.
        perm = rng.permutation(n)
        base = dict(hungarian(costs).pairs)
        permuted = dict(hungarian(costs[perm]).pairs)
        assert permuted == {i: base[int(perm[i])] for i in range(n)}
