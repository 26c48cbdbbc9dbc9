"""Iterative solvers and the matrix-game solvers they lean on.

Convergence thresholds are frozen from reference runs of this exact
code: every solver here is deterministic for a fixed seed, so the
assertions are regression pins, not statistical hopes.  Node counts are
checked against closed forms (full sweeps cost one visit per history)
so a counting regression cannot hide inside a passing convergence test.
"""

import numpy as np
import pytest

from efgsolve import (NodeCounter, TreeIndex, exploitability,
                      expected_value, make_game)
from efgsolve.solvers import (Cfr, MccfrEs, Xfp, solve_matrix_fp,
                              solve_matrix_lp)

KUHN_VALUE = -1.0 / 18.0


def test_cfr_plus_converges_on_kuhn(kuhn_tree):
    solver = Cfr(kuhn_tree, plus=True)
    solver.iterate(1000)
    flat = solver.average_flat()
    assert exploitability(kuhn_tree, flat, None) < 1e-3
    assert expected_value(kuhn_tree, flat) == pytest.approx(KUHN_VALUE,
                                                            abs=1e-4)


def test_cfr_vanilla_converges_on_kuhn(kuhn_tree):
    solver = Cfr(kuhn_tree, plus=False)
    solver.iterate(1000)
    assert exploitability(kuhn_tree, solver.average_flat(), None) < 0.03


def test_cfr_plus_beats_vanilla_at_equal_iterations(kuhn_tree):
    plus = Cfr(kuhn_tree, plus=True)
    vanilla = Cfr(kuhn_tree, plus=False)
    plus.iterate(1000)
    vanilla.iterate(1000)
    assert exploitability(kuhn_tree, plus.average_flat(), None) \
        < exploitability(kuhn_tree, vanilla.average_flat(), None)


def test_cfr_plus_converges_on_leduc(leduc_tree):
    solver = Cfr(leduc_tree, plus=True)
    solver.iterate(300)
    assert exploitability(leduc_tree, solver.average_flat(), None) < 0.01


def test_cfr_counter_closed_forms(kuhn_tree):
    # Alternating: two sweeps per iteration; simultaneous: one.
    n = kuhn_tree.n_nodes
    counter = NodeCounter()
    Cfr(kuhn_tree, plus=True, counter=counter).iterate(7)
    assert counter.count == 7 * 2 * n
    counter = NodeCounter()
    Cfr(kuhn_tree, plus=False, counter=counter).iterate(7)
    assert counter.count == 7 * n
    # plus with alternating overridden off still sweeps once.
    counter = NodeCounter()
    Cfr(kuhn_tree, plus=True, alternating=False, counter=counter).iterate(3)
    assert counter.count == 3 * n


def test_cfr_budget_is_soft(kuhn_tree):
    # The counter never raises; callers poll exhausted between steps, so
    # a blind iterate(n) may overshoot and that is fine.
    counter = NodeCounter(budget=100)
    solver = Cfr(kuhn_tree, plus=True, counter=counter)
    solver.iterate(5)
    assert counter.exhausted
    assert counter.count == 5 * 2 * kuhn_tree.n_nodes


def test_xfp_converges_on_kuhn(kuhn_tree):
    solver = Xfp(kuhn_tree)
    solver.iterate(500)
    assert exploitability(kuhn_tree, solver.average_flat(), None) < 0.05


def test_xfp_counts_two_oracle_calls_per_iteration(kuhn_tree):
    counter = NodeCounter()
    Xfp(kuhn_tree, counter=counter).iterate(7)
    assert counter.count == 7 * 2 * kuhn_tree.n_nodes


def test_mccfr_es_converges_loosely_on_kuhn(kuhn_tree):
    solver = MccfrEs(kuhn_tree, seed=0)
    solver.iterate(2000)
    assert exploitability(kuhn_tree, solver.average_flat(), None) < 0.08


def test_mccfr_es_is_seed_deterministic(kuhn_tree):
    counts = []
    flats = []
    for _ in range(2):
        counter = NodeCounter()
        solver = MccfrEs(kuhn_tree, seed=3, counter=counter)
        solver.iterate(50)
        counts.append(counter.count)
        flats.append(solver.average_flat())
    assert counts[0] == counts[1]
    assert np.array_equal(flats[0], flats[1])

    other = MccfrEs(kuhn_tree, seed=4)
    other.iterate(50)
    assert not np.array_equal(flats[0], other.average_flat())


def test_mccfr_es_counts_sampled_visits_only(kuhn_tree):
    counter = NodeCounter()
    MccfrEs(kuhn_tree, seed=0, counter=counter).iterate(50)
    # Two walks per iteration, each a strict subtree of the full sweep.
    assert 0 < counter.count < 50 * 2 * kuhn_tree.n_nodes


def test_matrix_lp_on_rock_paper_scissors():
    m = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]
    sol = solve_matrix_lp(m)
    assert sol.value == pytest.approx(0.0, abs=1e-9)
    assert sol.row == pytest.approx(np.full(3, 1 / 3), abs=1e-9)
    assert sol.col == pytest.approx(np.full(3, 1 / 3), abs=1e-9)


def test_matrix_lp_two_by_two_closed_form():
    # [[a, b], [c, d]] with no saddle point: value (ad-bc)/(a-b-c+d).
    sol = solve_matrix_lp([[2, -1], [-1, 1]])
    assert sol.value == pytest.approx(0.2, abs=1e-9)
    assert sol.row == pytest.approx([0.4, 0.6], abs=1e-9)
    assert sol.col == pytest.approx([0.4, 0.6], abs=1e-9)


def test_matrix_lp_saddle_inequalities_on_random_matrix():
    m = np.random.default_rng(7).normal(size=(4, 6))
    sol = solve_matrix_lp(m)
    # row strategy guarantees at least v against every column and the
    # column strategy concedes at most v against every row.
    assert (sol.row @ m).min() >= sol.value - 1e-8
    assert (m @ sol.col).max() <= sol.value + 1e-8


def test_matrix_lp_degenerate_one_by_one():
    sol = solve_matrix_lp([[3.5]])
    assert sol.value == pytest.approx(3.5)
    assert sol.row == pytest.approx([1.0])
    assert sol.col == pytest.approx([1.0])


def test_matrix_fp_approximates_lp():
    rps = np.array([[0.0, -1, 1], [1, 0, -1], [-1, 1, 0]])
    fp = solve_matrix_fp(rps, 2000)
    assert fp.value == pytest.approx(0.0, abs=1e-2)
    assert fp.row == pytest.approx(np.full(3, 1 / 3), abs=0.02)

    m = np.random.default_rng(7).normal(size=(4, 6))
    assert abs(solve_matrix_fp(m, 5000).value
               - solve_matrix_lp(m).value) < 0.05


def test_matrix_solution_is_a_named_tuple():
    row, col, value = solve_matrix_lp([[1.0]])
    sol = solve_matrix_lp([[1.0]])
    assert np.array_equal(row, sol.row)
    assert np.array_equal(col, sol.col)
    assert value == sol.value


def test_solvers_share_average_flat_contract(kuhn_tree):
    # Every solver exposes a full profile array; each infostate row is a
    # distribution so the arrays compose with the evaluators directly.
    for solver in (Cfr(kuhn_tree, plus=True), MccfrEs(kuhn_tree, seed=0),
                   Xfp(kuhn_tree)):
        solver.iterate(3)
        flat = solver.average_flat()
        assert flat.shape == (kuhn_tree.n_cols,)
        sums = np.add.reduceat(flat, kuhn_tree.is_off)
        assert sums == pytest.approx(np.ones(kuhn_tree.n_infosets))
