import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from latticeea.core import bits, restrict
from latticeea.errors import CapExceeded, PreconditionError
from latticeea.generators import NAMED, boolean, chain, hs2c3, product
from latticeea.states import (
    State,
    Unsat,
    _lexmin,
    build_polytope,
    e1_subalgebra,
    extend_state,
    extreme_states,
    find_state,
    is_state,
    state_from_sub,
)
from latticeea.structure import sharp_mask

from conftest import enumerated, lattice_corpus

F = Fraction


def _brute_is_state(E, values) -> bool:
    if values[E.zero] != 0 or values[E.one] != 1 or any(not 0 <= v <= 1 for v in values):
        return False
    for a, b in itertools.product(range(E.n), repeat=2):
        c = E.plus(a, b)
        if c is not None and values[c] != values[a] + values[b]:
            return False
    return True


def _oracle_vertices(E):
    """Vertices of {w : additive, w(0)=0, w(1)=1, 0<=w<=1}: points where enough bounds are tight."""
    w = sympy.symbols(f"w0:{E.n}")
    eqs = [w[E.zero], w[E.one] - 1]
    for a, b in itertools.product(range(E.n), repeat=2):
        c = E.plus(a, b)
        if c is not None and E.zero not in (a, b):
            eqs.append(w[a] + w[b] - w[c])
    A, rhs = sympy.linear_eq_to_matrix(eqs, w)
    rank = A.rank()
    d = E.n - rank
    out = set()
    for S in itertools.combinations(range(E.n), d):
        for vals in itertools.product((0, 1), repeat=d):
            extra = [w[x] - v for x, v in zip(S, vals)]
            B, r = sympy.linear_eq_to_matrix(eqs + extra, w)
            if B.rank() != E.n:
                continue
            sol = sympy.linsolve((B, r), *w)
            if not sol:
                continue
            (pt,) = sol
            if all(0 <= v <= 1 for v in pt):
                out.add(tuple(F(int(v.p), int(v.q)) for v in pt))
    return sorted(out)


@pytest.mark.parametrize("n", range(2, 52))
def test_chain_has_the_unique_uniform_state(n):
    E = chain(n)
    w = find_state(E)
    assert w.values == tuple(F(k, n - 1) for k in range(n))


def test_named_extreme_state_counts():
    assert len(extreme_states(boolean(2))) == 2
    (w,) = extreme_states(hs2c3())
    assert w.as_dict(hs2c3()) == {"0": "0", "a": "1/2", "b": "1/2", "1": "1"}
    assert len(extreme_states(NAMED["HSB4B4"]())) == 4


def test_b4_lexicographic_state():
    E = boolean(2)
    assert find_state(E).as_dict(E) == {"0": "0", "p": "0", "q": "1", "1": "1"}


vertex_cases = [(n, E) for n, E in enumerated()] + [
    ("HSB4B4", NAMED["HSB4B4"]()),
    ("B8", boolean(3)),
    ("C3xC3", product([chain(3), chain(3)])),
    ("C3xB4", product([chain(3), boolean(2)])),
]


@pytest.mark.parametrize("i", range(len(vertex_cases)))
def test_extreme_states_match_tight_bound_oracle(i):
    _, E = vertex_cases[i]
    got = [w.values for w in extreme_states(E)]
    assert got == _oracle_vertices(E)
    for v in got:
        assert _brute_is_state(E, v)


def test_is_state_reports_the_broken_rule():
    E = boolean(2)
    assert is_state(E, [0, F(1, 2), F(1, 2), 1]).ok
    assert is_state(E, [0, 2, -1, 1]).kind == "range"
    assert is_state(E, [0, 0, 0, F(1, 2)]).kind == "unit"
    assert is_state(E, [0, F(1, 3), F(1, 3), 1]).kind == "additivity"


def test_contradictory_pins_are_unsat():
    E = chain(3)
    out = _lexmin(build_polytope(E, {E.elem("a"): F(1)}))
    assert isinstance(out, Unsat)


def test_extreme_states_are_capped():
    with pytest.raises(CapExceeded):
        extreme_states(boolean(6))


@given(st.sampled_from(range(len(lattice_corpus()))))
def test_find_state_returns_a_state(i):
    _, E = lattice_corpus()[i]
    w = find_state(E)
    assert isinstance(w, State) and _brute_is_state(E, w.values)


smearing_cases = [(n, E) for n, E in enumerated() if E.is_lattice]


@pytest.mark.parametrize("i", range(len(smearing_cases)))
def test_extreme_states_of_sharp_elements_extend(i):
    _, E = smearing_cases[i]
    S = sharp_mask(E)
    sub, members = restrict(E, S)
    for w in extreme_states(sub):
        prob = extend_state(E, S, state_from_sub(E, members, w))
        assert prob.feasible and _brute_is_state(E, prob.witness.values)
        assert all(prob.witness[x] == w[k] for k, x in enumerate(members))


def test_extension_from_a_block():
    E = NAMED["HSB4B4"]()
    p1, q1 = E.elem("p1"), E.elem("q1")
    Q = [E.zero, p1, q1, E.one]
    prob = extend_state(E, Q, {"0": 0, "p1": F(1, 3), "q1": F(2, 3), "1": 1})
    assert prob.feasible and prob.witness[p1] == F(1, 3)


def test_extension_preconditions():
    E = boolean(2)
    with pytest.raises(PreconditionError):
        extend_state(E, [E.zero, E.one], {"0": 0})
    with pytest.raises(PreconditionError):
        extend_state(E, [E.zero, E.one], {"0": 0, "1": F(1, 2)})
    with pytest.raises(PreconditionError):
        extend_state(E, [E.zero, 1], {"0": 0, "p": 0})


@pytest.mark.parametrize("name", sorted(NAMED))
def test_e1_is_everything_on_finite_instances(name):
    E = NAMED[name]()
    r = e1_subalgebra(E)
    assert r.mask == E.full
    assert set(bits(r.finite)) == set(range(E.n))
