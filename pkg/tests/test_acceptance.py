"""Numbered acceptance checks; each prints one line in the terminal summary."""
import time
from fractions import Fraction
from itertools import product

import pytest

from lambdag.cli import lambda_theorem_grid, theta_point_grid, theta_target_grid
from lambdag.constraints import theta0_eval, theta1_report
from lambdag.givental import SemisimpleData, TreeQuery, edge_quotient, random_symplectic, tree_sum, validate
from lambdag.graphs import enumerate_graphs, enumerate_trees, aut_order
from lambdag.lambda_point import b_g, lambda_theorem_value, theta_point_eval
from lambdag.pixton import PixtonSettings, dr_pairing, hodge_integral, pixton_pairing, pixton_polynomial
from lambdag.psi import check_table, psi_integral
from lambdag.table import IntegralTable
from oracles import brute_aut_order, brute_tree_sum

F = Fraction


def acceptance(i, name):
    return pytest.mark.acceptance(f"{i:02d} {name}")


@acceptance(1, "psi engine values, string and dilaton over the populated table")
def test_psi_engine():
    start = time.perf_counter()
    table = IntegralTable()
    assert psi_integral(0, (0, 0, 0), table) == 1
    assert psi_integral(1, (1,), table) == F(1, 24)
    assert psi_integral(2, (4,), table) == F(1, 1152)
    for g in range(4):
        for n in range(1, 7):
            if 2 * g - 2 + n <= 0:
                continue
            total = 3 * g - 3 + n
            for exps in product(range(total + 1), repeat=n):
                if sum(exps) == total and list(exps) == sorted(exps, reverse=True):
                    psi_integral(g, exps, table)
    assert len(table) > 100
    assert check_table(table, max_genus=3, max_points=6) == []
    assert time.perf_counter() - start < 10


def _lambda_grid_ok(g_max, n_max, g_min=0):
    table = IntegralTable()
    for g, exps in lambda_theorem_grid(g_max, n_max):
        if g >= g_min:
            assert hodge_integral(g, exps, table) == lambda_theorem_value(g, exps), (g, exps)


@acceptance(2, "lambda_g theorem against multinomial times b_g, g <= 2, n <= 4")
def test_lambda_theorem():
    _lambda_grid_ok(2, 4)


@pytest.mark.slow
@acceptance(2, "lambda_g theorem against multinomial times b_g, g <= 2, n <= 4")
def test_lambda_theorem_genus_three():
    _lambda_grid_ok(3, 2, g_min=3)


@acceptance(3, "constants b_0, b_1, b_2 through the Pixton route")
def test_bg_constants():
    assert b_g(0) == 1
    table = IntegralTable()
    assert hodge_integral(1, (0,), table) == F(1, 24)
    assert hodge_integral(2, (2,), table) == F(7, 5760)


@acceptance(4, "genus-one Pixton class and DR_1(0) on M_{1,1}")
def test_genus_one_pixton_class():
    assert pixton_pairing(1, 1, (0,), (0,)) == F(-1, 12)
    assert dr_pairing(1, (0,), (0,)) == F(-1, 24) == -hodge_integral(1, (0,), IntegralTable())


@acceptance(5, "point constraints vanish, g <= 2, -1 <= n <= 3, m <= 3, order <= 2")
def test_point_constraints():
    start = time.perf_counter()
    nontrivial = 0
    for q in theta_point_grid(range(3), range(-1, 4), range(4), 2):
        ev = theta_point_eval(q)
        assert ev.value == 0, q
        nontrivial += ev.nontrivial > 0
    assert nontrivial >= 20
    assert time.perf_counter() - start < 300


@acceptance(6, "genus-zero constraints vanish for P1 and P2, degree <= 2")
@pytest.mark.parametrize("target", ["P1", "P2"])
def test_genus_zero_targets(target):
    nontrivial = 0
    for q in theta_target_grid(target, range(-1, 3), range(3), 1, 2, 0):
        ev = theta0_eval(q)
        assert ev.value == 0, q
        nontrivial += ev.nontrivial > 0
    assert nontrivial >= 10


@acceptance(7, "genus-one Pixton constraints: ratio -2, then zero, point and P1, degree <= 1")
@pytest.mark.parametrize("target", ["point", "P1"])
def test_genus_one_pixton(target):
    points = 0
    for q in theta_target_grid(target, range(-1, 3), range(3), 1, 1, 1):
        rep = theta1_report(q)
        assert rep.ratio_ok, q
        assert rep.value == 0, q
        points += 1
    assert points > 0


def _suite_queries():
    """(g, d, A, ambient) for every Pixton evaluation in checks 2 to 4."""
    out = {(g, g, (0,) * len(e), e) for g, e in lambda_theorem_grid(2, 4) if g}
    out |= {(1, 1, (0,), (0,)), (2, 2, (0,), (2,))}
    return sorted(out)


@acceptance(8, "two extra r-samples reproduce every Pixton polynomial")
def test_interpolation_stable():
    extra = PixtonSettings(extra_samples=2)
    for g, d, A, ambient in _suite_queries():
        assert pixton_polynomial(g, d, A, ambient) == pixton_polynomial(g, d, A, ambient, extra)


@acceptance(9, "graph counts and automorphisms against permutation search")
def test_graph_combinatorics():
    assert len(enumerate_graphs(0, 3)) == 1
    assert len(enumerate_graphs(1, 1)) == 2
    assert len(enumerate_graphs(0, 4)) == 4
    assert len(enumerate_trees(1, 1)) == 1
    checked = 0
    for g in range(4):
        for n in range(6):
            if 2 * g - 2 + n <= 0:
                continue
            for G in enumerate_graphs(g, n, max_edges=(5 - n) // 2):
                if G.num_half_edges <= 5:
                    assert aut_order(G) == brute_aut_order(G), G.dump()
                    checked += 1
    assert checked > 20


@acceptance(10, "Givental tree sums: collapse, validation, divisibility, brute force")
def test_givental_trees():
    ident = SemisimpleData([1], [[[1]]])
    for g, n in product(range(3), range(1, 4)):
        if 2 * g - 2 + n <= 0:
            continue
        for exps in product(range(2 * g - 2 + n), repeat=n):
            if sum(exps) == 2 * g - 3 + n:
                legs = tuple({a: [F(1)]} for a in exps)
                assert tree_sum(ident, TreeQuery(g, legs)).value == hodge_integral(g, exps)
    assert validate(SemisimpleData([1], [[[1]], [[1]]]))
    for seed in range(10):
        data = random_symplectic(2, 6, seed=seed)
        assert validate(data) == []
        edge_quotient(data)  # raises on a nonzero remainder
    c = F(2, 3)
    cubic = SemisimpleData([1], [[[v]] for v in (1, 0, 0, c, 0, 0, c * c / 2)], 7)
    legs = ({0: [F(1)]},)
    assert tree_sum(cubic, TreeQuery(1, legs)).value == brute_tree_sum(cubic, 1, legs, 7, 3, 2, 5)
