import itertools
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from latticeea.simplex import maximize, minimize, solve_square

F = Fraction


def _brute_min(c, A, b):
    """Minimum of c.x over {A x <= b, x >= 0} by trying every vertex (region assumed bounded)."""
    m = len(c)
    rows = [list(r) for r in A] + [[-1 if j == i else 0 for j in range(m)] for i in range(m)]
    rhs = list(b) + [0] * m
    best = None
    for combo in itertools.combinations(range(len(rows)), m):
        M = sympy.Matrix([rows[i] for i in combo])
        if M.det() == 0:
            continue
        x = M.LUsolve(sympy.Matrix([rhs[i] for i in combo]))
        x = [F(int(v.p), int(v.q)) for v in x]
        if all(sum(F(a) * v for a, v in zip(r, x)) <= h for r, h in zip(rows, rhs)):
            val = sum(F(a) * v for a, v in zip(c, x))
            best = val if best is None else min(best, val)
    return best


coef = st.integers(-4, 4)


@given(
    st.integers(1, 3).flatmap(
        lambda m: st.tuples(
            st.lists(coef, min_size=m, max_size=m),
            st.lists(st.lists(coef, min_size=m, max_size=m), min_size=0, max_size=3),
            st.lists(st.integers(-3, 6), min_size=3, max_size=3),
        )
    )
)
def test_minimize_matches_vertex_enumeration(data):
    c, A, b = data
    m = len(c)
    b = b[: len(A)]
    # a box keeps the region bounded
    A = A + [[1 if j == i else 0 for j in range(m)] for i in range(m)]
    b = b + [5] * m
    res = minimize([F(v) for v in c], [[F(v) for v in r] for r in A], [F(v) for v in b])
    expect = _brute_min(c, A, b)
    if expect is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal" and res.value == expect
        assert all(v >= 0 for v in res.x)
        assert all(sum(F(a) * v for a, v in zip(r, res.x)) <= h for r, h in zip(A, b))


def test_equalities_and_unboundedness():
    res = minimize([F(1), F(1)], A_eq=[[F(1), F(2)]], b_eq=[F(3)])
    assert res.status == "optimal" and res.value == F(3, 2)
    assert maximize([F(1)], [[F(-1)]], [F(0)]).status == "unbounded"
    bad = minimize([F(0)], A_eq=[[F(1)]], b_eq=[F(-1)])
    assert bad.status == "infeasible" and bad.infeasibility > 0


def test_solve_square():
    assert solve_square([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)]) == (F(4, 5), F(7, 5))
    assert solve_square([[F(1), F(1)], [F(2), F(2)]], [F(1), F(2)]) is None
