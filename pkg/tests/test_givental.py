from fractions import Fraction
from itertools import product

import pytest

from lambdag.errors import TruncationError, ValidationError
from lambdag.givental import SemisimpleData, TreeQuery, edge_quotient, load_data, random_symplectic, tree_sum, \
    validate
from lambdag.pixton import hodge_integral
from oracles import brute_tree_sum

F = Fraction


def _rank1(coeffs, order=None):
    return SemisimpleData([1], [[[c]] for c in coeffs], order)


def test_identity_is_valid():
    assert validate(_rank1([1])) == []
    assert validate(SemisimpleData([1, 3], [[[1, 0], [0, 1]]])) == []


def test_one_plus_z_fails_at_second_order():
    bad = validate(_rank1([1, 1]))
    assert [(v.kind, v.order) for v in bad] == [("symplectic", 2)]
    with pytest.raises(ValidationError):
        tree_sum(_rank1([1, 1]), TreeQuery(0, ({0: [1]},) * 3))


def test_exp_cubic_truncated():
    c = F(2, 3)
    assert validate(_rank1([1, 0, 0, c], order=5)) == []
    assert [v.order for v in validate(_rank1([1, 0, 0, c]))] == [6]


@pytest.mark.parametrize("g, n", [(g, n) for g in range(3) for n in range(1, 4) if 2 * g - 2 + n > 0])
def test_identity_collapse(g, n):
    data = _rank1([1])
    for exps in product(range(2 * g - 2 + n), repeat=n):
        if sum(exps) == 2 * g - 3 + n:
            legs = tuple({a: [F(1)]} for a in exps)
            assert tree_sum(data, TreeQuery(g, legs)).value == hodge_integral(g, exps)


def test_genus_zero_three_points():
    data = random_symplectic(2, 4, seed=5, delta=[2, 3])
    legs = ({0: [F(1), F(2)]}, {0: [F(1), F(-1)]}, {0: [F(3), F(1)]})
    # single vertex, all heights 0: sum_i Delta_i^-1 prod of coordinates
    expected = F(1, 2) * 3 + F(1, 3) * -2
    assert tree_sum(data, TreeQuery(0, legs)).value == expected


@pytest.mark.parametrize("seed", range(10))
def test_edge_numerator_divisible(seed):
    data = random_symplectic(2, 6, seed=seed)
    assert validate(data) == []
    quot = edge_quotient(data)
    assert max(p + q for p, q in quot) == 5


def test_truncation_reported():
    data = random_symplectic(2, 2, seed=0)
    res = tree_sum(data, TreeQuery(0, ({0: [F(1), F(0)]},) * 4))
    assert res.required_order == 1
    assert tree_sum(data, TreeQuery(1, ({0: [F(1), F(0)]},) * 3)).required_order == 2
    with pytest.raises(TruncationError):
        tree_sum(data, TreeQuery(0, ({0: [F(1), F(0)]},) * 6))


def test_rank_one_cubic_matches_oracle():
    c = F(2, 3)
    data = _rank1([1, 0, 0, c, 0, 0, c * c / 2], order=7)
    legs = ({0: [F(1)]},)
    assert tree_sum(data, TreeQuery(1, legs)).value == brute_tree_sum(data, 1, legs, 7, 3, 2, 5) == F(1, 24)
    legs = ({0: [F(1)], 3: [F(2)]},)
    assert tree_sum(data, TreeQuery(1, legs)).value == brute_tree_sum(data, 1, legs, 7, 3, 2, 5)


@pytest.mark.parametrize("g, legs, box", [
    (0, ({1: [F(1), F(2)]}, {0: [F(1), F(-1)]}, {0: [F(2), F(1)]}, {0: [F(0), F(1)]}), (1, 1, 3)),
    (1, ({0: [F(1), F(2)], 1: [F(1), F(-1)]},), (2, 1, 3)),
])
def test_rank_two_matches_oracle(g, legs, box):
    data = random_symplectic(2, 5, seed=3)
    assert tree_sum(data, TreeQuery(g, legs)).value == brute_tree_sum(data, g, legs, 5, *box)


def test_rank_two_two_legs_matches_oracle():
    data = random_symplectic(2, 5, seed=3)
    legs = ({0: [F(1), F(2)]}, {1: [F(1), F(-1)]})
    value = tree_sum(data, TreeQuery(1, legs)).value
    assert value == brute_tree_sum(data, 1, legs, 5, 2, 1, 3) == F(-1, 24)


def test_half_edge_order():
    # transposing R^-1(z) D R^-1(w)^T swaps the roles of the two halves
    data = random_symplectic(3, 5, seed=7)
    quot = edge_quotient(data)
    for (p, q), M in quot.items():
        N = quot[(q, p)]
        assert all(M[i][j] == N[j][i] for i in range(3) for j in range(3))


def test_json_round_trip(tmp_path):
    data = random_symplectic(2, 3, seed=2)
    import json
    path = tmp_path / "data.json"
    path.write_text(json.dumps(data.to_json()))
    again = load_data(path)
    assert again.R == data.R and again.delta == data.delta and again.order == data.order
