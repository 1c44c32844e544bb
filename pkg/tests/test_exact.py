from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matroid_csm.errors import NonUnimodularQuotient
from matroid_csm.exact import (
    bareiss_det,
    bareiss_rank,
    integer_columns,
    parse_rational,
    solve_rational,
    solve_sparse_unique,
    unit_pivot_reduce,
)


def _fraction_det(m):
    # cofactor expansion; independent of elimination
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * _fraction_det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def _fraction_rank(m):
    rows = [[Fraction(x) for x in r] for r in m]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_bareiss_against_cofactor_and_fraction_rank(m):
    assert bareiss_det(m) == _fraction_det(m)
    assert bareiss_rank(m) == _fraction_rank(m)


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(4) == 4
    with pytest.raises(TypeError):
        parse_rational(0.5)


def test_integer_columns_keep_rank():
    rows = [["1/2", "1", "0"], ["1/3", "2/3", "0"]]
    ints = integer_columns(rows)
    assert ints == [[3, 3, 0], [2, 2, 0]]
    assert bareiss_rank(ints) == 1


def test_solve_rational():
    x, r = solve_rational([[2, 1], [1, 3]], [3, 5])
    assert r == 2 and x == [Fraction(4, 5), Fraction(7, 5)]
    x, r = solve_rational([[1, 1], [2, 2]], [1, 3])
    assert x is None and r == 1


def test_solve_sparse_unique_statuses():
    sol, status = solve_sparse_unique([({0: 1, 1: 1}, 3), ({0: 1, 1: -1}, 1)], 2)
    assert status == "ok" and sol == [2, 1]
    assert solve_sparse_unique([({0: 1, 1: 1}, 3)], 2)[1] == "underdetermined"
    assert solve_sparse_unique([({0: 1}, 1), ({0: 2}, 3)], 1)[1] == "inconsistent"


def test_unit_pivot_reduce_is_fully_reduced():
    rows = [{0: 1, 1: 1, 2: 1}, {1: 1, 2: -1}]
    red = unit_pivot_reduce(rows)
    assert len(red) == 2
    for col, row in red.items():
        assert row[col] in (1, -1)
        for other, orow in red.items():
            if other != col:
                assert col not in orow


def test_unit_pivot_reduce_rejects_torsion():
    with pytest.raises(NonUnimodularQuotient):
        unit_pivot_reduce([{0: 2, 1: 2}])
