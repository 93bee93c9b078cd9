import itertools

import pytest
from hypothesis import given, strategies as st

from latticeea.caps import Caps
from latticeea.core import bits
from latticeea.errors import NotALatticeError
from latticeea.generators import NAMED, boolean, chain, hs2c3, hsb4b4, horizontal_sum, product
from latticeea.structure import (
    all_decompositions,
    almost_orthogonality,
    ao_witness_set,
    atom_analysis,
    blocks,
    decompose,
    is_compact_element,
    is_s_compact,
    sharp_elements,
    sharp_mask,
)

from conftest import corpus, enumerated, lattice_corpus


# Brute-force lattice operations straight from the order, independent of the
# cached meet/join tables.
def _glb(E, x, y):
    lower = [z for z in range(E.n) if E.leq(z, x) and E.leq(z, y)]
    return next(z for z in lower if all(E.leq(w, z) for w in lower))


def _lub(E, x, y):
    upper = [z for z in range(E.n) if E.leq(x, z) and E.leq(y, z)]
    return next(z for z in upper if all(E.leq(z, w) for w in upper))


def _compatible(E, x, y):
    m = _glb(E, x, y)
    d = next(d for d in range(E.n) if E.plus(m, d) == y)
    s = E.plus(x, d)
    return s is not None and s == _lub(E, x, y)


def _maximal_compatible_sets(E):
    comp = {(x, y): _compatible(E, x, y) for x in range(E.n) for y in range(E.n)}
    sets = []
    for r in range(E.n, 0, -1):
        for S in itertools.combinations(range(E.n), r):
            if all(comp[x, y] for x in S for y in S) and not any(set(S) < T for T in sets):
                sets.append(set(S))
    return sorted(tuple(sorted(S)) for S in sets)


def _idx(E, *labels):
    return [E.elem(s) for s in labels]


small_lattices = [(n, E) for n, E in lattice_corpus() if E.n <= 10]


def test_chain_ord_and_b4_mv():
    E = chain(3)
    assert atom_analysis(E).ord[E.elem("a")] == 2
    assert blocks(boolean(2)).is_mv


def test_hs2c3_has_two_blocks_and_is_not_mv():
    bd = blocks(hs2c3())
    assert len(bd.blocks) == 2 and not bd.is_mv


def test_hsb4b4_blocks_are_the_summands():
    E = hsb4b4()
    bd = blocks(E)
    assert sorted(sorted(E.labelset(m)) for m in bd.blocks) == [
        ["0", "1", "p1", "q1"],
        ["0", "1", "p2", "q2"],
    ]
    assert E.labelset(bd.b_e) == ["0", "1"]


def test_horizontal_sum_block_count_equals_summand_count():
    for parts in ([chain(3)] * 4, [boolean(3), chain(5)], [chain(4), chain(4), chain(6)]):
        assert len(blocks(horizontal_sum(parts)).blocks) == len(parts)


def test_product_of_chains_is_one_block():
    assert blocks(product([chain(3), chain(4)])).is_mv


def test_decomposition_of_one_in_b4():
    E = boolean(2)
    d = decompose(E, E.one)
    assert sorted((E.labels[a], k) for a, k in d.terms) == [("p", 1), ("q", 1)]


def test_decompose_needs_a_lattice():
    E = next(E for _, E in enumerated() if not E.is_lattice)
    with pytest.raises(NotALatticeError):
        decompose(E, E.one)


@pytest.mark.parametrize("i", range(len(lattice_corpus())))
def test_decompositions_reconstruct_and_detect_sharpness(i):
    _, E = lattice_corpus()[i]
    at = atom_analysis(E)
    for x, d in all_decompositions(E).items():
        parts = [E.multiple(a, k) for a, k in d.terms]
        total, join = E.zero, E.zero
        for p in parts:
            total = E.plus(total, p)
            join = _lub(E, join, p)
        assert total == x and join == x
        sharp_by_terms = all(k == at.ord[a] for a, k in d.terms)
        assert sharp_by_terms == (_glb(E, x, E.supp(x)) == E.zero)


@pytest.mark.parametrize("i", range(len(small_lattices)))
def test_blocks_match_brute_force(i):
    _, E = small_lattices[i]
    got = sorted(tuple(bits(m)) for m in blocks(E).blocks)
    assert got == _maximal_compatible_sets(E)


@given(st.sampled_from(range(len(lattice_corpus()))))
def test_sharp_elements_form_an_orthomodular_sublattice(i):
    _, E = lattice_corpus()[i]
    S = sharp_elements(E)
    assert E.zero in S and E.one in S
    s = sharp_mask(E)
    for x in S:
        assert s >> E.supp(x) & 1


def test_ao_witness_sets():
    E = hs2c3()
    a, b = _idx(E, "a", "b")
    assert ao_witness_set(E, a) == (b,)
    B = boolean(2)
    p, q = _idx(B, "p", "q")
    # p is not below p' = q, so p counts itself; q lies below p'
    assert ao_witness_set(B, p) == (p,)
    assert ao_witness_set(chain(5), 1) == ()


@pytest.mark.parametrize("i", range(len(lattice_corpus())))
def test_ao_witnesses_cover_and_minimal_lists_are_irredundant(i):
    _, E = lattice_corpus()[i]
    rep = almost_orthogonality(E)

    def covers(target, wit):
        mults = [E.multiple(c, j) for c, j in wit]
        return all(E.leq(x, target) or any(E.leq(m, x) for m in mults) for x in range(E.n))

    for (a, l), wit in rep.witnesses.items():
        target = E.supp(E.multiple(a, l))
        assert covers(target, wit)
        assert all(not E.leq(E.multiple(c, j), target) for c, j in wit)
        mini = rep.minimal[(a, l)]
        assert set(mini) <= set(wit) and covers(target, mini)
        for item in mini:
            assert not covers(target, [w for w in mini if w != item])


def test_ao_needs_a_lattice():
    with pytest.raises(NotALatticeError):
        almost_orthogonality(next(E for _, E in enumerated() if not E.is_lattice))


@pytest.mark.parametrize("name", sorted(NAMED))
def test_every_element_of_a_finite_lattice_is_compact(name):
    E = NAMED[name]()
    assert all(is_compact_element(E, u) and is_s_compact(E, u) for u in range(E.n))


def test_compactness_scan_is_capped(monkeypatch):
    from latticeea.errors import CapExceeded

    monkeypatch.setenv("EA_CAPS", "compact=3")
    assert Caps.from_env().compact == 3
    with pytest.raises(CapExceeded):
        is_compact_element(boolean(2), 0)


@given(st.sampled_from(range(len(corpus()))))
def test_atoms_are_minimal_nonzero(i):
    _, E = corpus()[i]
    at = atom_analysis(E)
    for a in at.atoms:
        assert [x for x in range(E.n) if E.leq(x, a)] == sorted({E.zero, a})
