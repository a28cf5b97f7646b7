from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from lvic import lp


def test_slack_capped_at_zero():
    res = lp.solve([1], [[1]], [0])
    assert res.status == lp.OPTIMAL and res.objective == 0


def test_toy_dominance():
    # max s with r >= 1 + s, r <= 2  ->  s = 1
    res = lp.solve([0, 1], [[-1, 1], [1, 0]], [-1, 2])
    assert res.objective == 1
    assert res.x == (Fraction(2), Fraction(1))


def test_infeasible_and_unbounded():
    assert lp.solve([1], [[1]], [-1]).status == lp.INFEASIBLE
    assert lp.solve([1], [[-1]], [0]).status == lp.UNBOUNDED


def test_equality_rows_and_minimize():
    res = lp.solve([1, 1], A_eq=[[1, 2]], b_eq=[4], maximize=False)
    assert res.objective == 2 and res.x == (Fraction(0), Fraction(2))


def test_redundant_equalities_are_dropped():
    res = lp.solve([1, 0], A_eq=[[1, 1], [2, 2]], b_eq=[3, 6])
    assert res.objective == 3


def test_exact_fractions():
    res = lp.solve([1, 1], [[3, 1], [1, 3]], [1, 1])
    assert res.objective == Fraction(1, 2)


def test_deterministic_pivoting():
    args = ([1, 1, 1], [[1, 1, 0], [0, 1, 1], [1, 0, 1]], [1, 1, 1])
    assert lp.solve(*args) == lp.solve(*args)


small = st.integers(-4, 4)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n, max_size=n),
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=5),
    st.lists(st.integers(-2, 6), min_size=5, max_size=5))))
def test_matches_float_oracle(data):
    c, A, b = data
    b = b[:len(A)]
    # a box keeps every instance bounded
    n = len(c)
    A_box = A + [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    b_box = b + [5] * n
    res = lp.solve(c, A_box, b_box)
    ref = linprog(-np.array(c, float), A_ub=np.array(A_box, float), b_ub=np.array(b_box, float),
                  bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        assert res.status == lp.INFEASIBLE
    else:
        assert res.status == lp.OPTIMAL
        assert abs(float(res.objective) + ref.fun) < 1e-7
        for row, rhs in zip(A_box, b_box):
            assert sum(a * x for a, x in zip(row, res.x)) <= rhs
        assert all(x >= 0 for x in res.x)
