import random
import warnings

import pytest
from hypothesis import given, strategies as st

from latticeea.core import UNDEF, validate
from latticeea.enumeration import canonical_form, enumerate_size, enumerate_up_to, oracle_count
from latticeea.errors import CapExceeded, PreconditionError
from latticeea.generators import NAMED, boolean, chain, hs2c3, horizontal_sum, product
from latticeea.structure import atom_analysis, blocks

from conftest import corpus, enumerated


def test_chain_and_boolean():
    assert chain(3).ord(chain(3).elem("a")) == 2
    assert boolean(2).n == 4 and blocks(boolean(2)).is_mv
    with pytest.raises(PreconditionError):
        chain(1)
    with pytest.raises(PreconditionError):
        boolean(0)


def test_horizontal_sum_of_two_c3_is_hs2c3():
    E = horizontal_sum([chain(3), chain(3)])
    assert canonical_form(E.table.rows) == canonical_form(hs2c3().table.rows)
    assert len(blocks(E).blocks) == 2 and not blocks(E).is_mv


def test_horizontal_sum_absorbs_two_element_summands():
    with pytest.warns(UserWarning):
        E = horizontal_sum([chain(2), chain(3), chain(3)])
    assert E.n == 4


def test_horizontal_sum_keeps_cross_sums_undefined():
    E = horizontal_sum([chain(4), boolean(2)])
    at = atom_analysis(E)
    a, p = at.atoms[0], at.atoms[1]
    assert E.plus(a, p) is None
    assert E.plus(a, E.supp(a)) == E.one


def test_product_is_coordinatewise():
    E = product([chain(3), chain(3)])
    assert E.n == 9 and len(atom_analysis(E).atoms) == 2


@pytest.mark.parametrize("i", range(len(corpus())))
def test_every_corpus_instance_validates(i):
    _, E = corpus()[i]
    assert validate(E.table, E.zero, E.one).ok


def test_enumeration_counts():
    counts = [len(enumerate_size(n)) for n in range(2, 8)]
    assert counts[:2] == [1, 1]
    assert counts == [1, 1, 3, 4, 10, 14]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_enumeration_agrees_with_unpruned_oracle(n):
    assert len(enumerate_size(n)) == oracle_count(n)


def test_size_three_is_c3():
    (E,) = enumerate_size(3)
    assert canonical_form(E.table.rows) == canonical_form(chain(3).table.rows)


def test_enumeration_is_capped():
    with pytest.raises(CapExceeded):
        enumerate_up_to(9)


def test_enumerated_instances_are_pairwise_non_isomorphic():
    forms = [canonical_form(E.table.rows) for _, E in enumerated()]
    assert len(set(forms)) == len(forms)


def _relabel(rows, perm):
    """Apply a permutation of the middle elements (0 and 1 stay put)."""
    n = len(rows)
    p = [0, *perm, n - 1]
    out = [[UNDEF] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = rows[i][j]
            out[p[i]][p[j]] = UNDEF if v == UNDEF else p[v]
    return out


@given(st.sampled_from(range(len(enumerated()))), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant_under_relabelling(i, rng: random.Random):
    _, E = enumerated()[i]
    perm = list(range(1, E.n - 1))
    rng.shuffle(perm)
    assert canonical_form(_relabel(E.table.rows, perm)) == canonical_form(E.table.rows)


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_instances_validate(name):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        E = NAMED[name]()
    assert validate(E.table, E.zero, E.one).ok
