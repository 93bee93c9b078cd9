import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from latticeea.core import UNDEF, EffectAlgebra, PartialSumTable, dual, is_sub_effect_algebra, restrict, validate
from latticeea.enumeration import oracle_is_effect_algebra
from latticeea.errors import AxiomError, NotALatticeError, PreconditionError, StructuralError
from latticeea.generators import NAMED, boolean, chain, hs2c3
from latticeea.instance_io import dumps, from_document, loads, table_from_document, to_document

from conftest import corpus


def _oracle(rows) -> bool:
    return bool(oracle_is_effect_algebra(np.array(rows, dtype=np.int64), 0, len(rows) - 1))


def _validator(rows) -> bool:
    try:
        return validate(PartialSumTable(rows), 0, len(rows) - 1).ok
    except StructuralError:
        return False


def test_c3_and_b4_are_effect_algebras():
    assert validate(chain(3).table, 0, 2).ok
    assert validate(boolean(2).table, 0, 3).ok


def test_eiv_violation_is_reported_with_witness():
    rows = [[0, 1, 2], [1, 2, UNDEF], [2, UNDEF, UNDEF]]
    assert validate(PartialSumTable(rows), 0, 2).ok
    rows[2][1] = rows[1][2] = 2
    rep = validate(PartialSumTable(rows), 0, 2)
    assert not rep.ok
    assert any(v.axiom == "Eiv" and v.witness[:2] == (2, 1) for v in rep.violations)


def test_invalid_table_cannot_become_an_instance():
    rows = [[0, 1, 2], [1, 2, 2], [2, 2, UNDEF]]
    with pytest.raises(AxiomError):
        EffectAlgebra(["0", "a", "1"], PartialSumTable(rows))


def test_structural_errors():
    with pytest.raises(StructuralError):
        validate(PartialSumTable([[0, 5], [1, UNDEF]]), 0, 1)
    with pytest.raises(StructuralError):
        validate(PartialSumTable([[0, UNDEF], [UNDEF, UNDEF]]), 0, 1)
    with pytest.raises(StructuralError):
        EffectAlgebra.from_triples(["0", "a", "1"], [("a", "b", "1")])
    with pytest.raises(StructuralError):
        chain(3).elem("zz")


def test_c3_order_and_supplements():
    E = chain(3)
    a = E.elem("a")
    assert E.supp(a) == a
    assert E.ord(a) == 2
    assert E.leq(0, a) and E.leq(a, 2) and not E.leq(2, a)
    assert E.minus(2, a) == a


def test_hs2c3_is_a_lattice_with_trivial_meets():
    E = hs2c3()
    a, b = E.elem("a"), E.elem("b")
    assert E.is_lattice
    assert E.meet(a, b) == E.zero and E.join(a, b) == E.one
    assert E.plus(a, b) is None


def test_non_lattice_raises_on_lattice_operations():
    from conftest import enumerated

    E = next(E for _, E in enumerated() if not E.is_lattice)
    with pytest.raises(NotALatticeError):
        E.require_lattice("test")


@given(st.sampled_from(range(len(corpus()))))
def test_orthosupplement_is_an_involution_and_antitone(i):
    _, E = corpus()[i]
    for x in range(E.n):
        assert E.supp(E.supp(x)) == x
        assert E.plus(x, E.supp(x)) == E.one
        for y in range(E.n):
            if E.leq(x, y):
                assert E.leq(E.supp(y), E.supp(x))


@given(st.sampled_from(range(len(corpus()))))
def test_order_is_a_partial_order_with_bounds(i):
    _, E = corpus()[i]
    for x in range(E.n):
        assert E.leq(E.zero, x) and E.leq(x, E.one) and E.leq(x, x)
        for y in range(E.n):
            if x != y and E.leq(x, y):
                assert not E.leq(y, x)
                assert E.plus(x, E.minus(y, x)) == y


@given(st.sampled_from(range(len(corpus()))))
def test_dual_is_an_effect_algebra_with_reversed_order(i):
    _, E = corpus()[i]
    if E.n > 40:
        return
    D = dual(E)
    n = E.n
    for x in range(n):
        for y in range(n):
            assert D.leq(n - 1 - x, n - 1 - y) == E.leq(y, x)


def test_restrict_to_sharp_elements_of_b4_is_b4():
    E = boolean(2)
    sub, members = restrict(E, E.full)
    assert members == list(range(4)) and sub.table == E.table
    assert not is_sub_effect_algebra(E, 0b0011).ok
    with pytest.raises(PreconditionError):
        restrict(E, 0b0011)


@given(st.sampled_from(range(len(corpus()))))
def test_instance_documents_round_trip(i):
    _, E = corpus()[i]
    text = dumps(E)
    F = loads(text)
    assert F.labels == E.labels and F.table == E.table
    assert dumps(F) == text
    assert from_document(to_document(E)).table == E.table


def test_loader_moves_zero_first_and_one_last():
    doc = {"elements": ["1", "a", "0"], "zero": "0", "one": "1", "plus": [["a", "a", "1"]]}
    E = from_document(doc)
    assert E.labels == ("0", "a", "1")
    table, zero, one, labels = table_from_document(doc)
    assert (zero, one) == (2, 0) and validate(table, zero, one).ok


def test_loader_errors():
    with pytest.raises(StructuralError):
        loads("{not json")
    with pytest.raises(StructuralError):
        from_document({"elements": ["0", "0"]})
    with pytest.raises(StructuralError):
        from_document({"elements": ["0", "a", "1"], "plus": [["a", "q", "1"]]})


def _symmetric_table(rng: random.Random, n: int):
    rows = [[UNDEF] * n for _ in range(n)]
    for x in range(n):
        rows[0][x] = rows[x][0] = x
    for i in range(1, n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randrange(-1, n)
    return rows


def test_validator_agrees_with_oracle_on_random_tables():
    rng = random.Random(7)
    for _ in range(2000):
        rows = _symmetric_table(rng, rng.choice((3, 4, 5)))
        assert _oracle(rows) == _validator(rows)


@given(st.sampled_from(sorted(NAMED)), st.integers(0, 10**6))
def test_single_entry_perturbations_agree_with_oracle(name, seed):
    E = NAMED[name]()
    rng = random.Random(seed)
    rows = [list(r) for r in E.table.rows]
    i, j = rng.randrange(E.n), rng.randrange(E.n)
    rows[i][j] = rng.randrange(-1, E.n)
    assert _oracle(rows) == _validator(rows)
