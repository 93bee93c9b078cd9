import itertools

import pytest

from latticeea.dot import covers, to_dot
from latticeea.generators import NAMED, boolean, chain

from conftest import enumerated


def _brute_covers(E):
    out = []
    for x, y in itertools.permutations(range(E.n), 2):
        if E.leq(x, y) and not any(
            z not in (x, y) and E.leq(x, z) and E.leq(z, y) for z in range(E.n)
        ):
            out.append((x, y))
    return sorted(out)


@pytest.mark.parametrize("i", range(len(enumerated())))
def test_covers_match_brute_force(i):
    _, E = enumerated()[i]
    assert sorted(covers(E)) == _brute_covers(E)


def test_dot_marks_atoms_and_sharp_elements():
    E = NAMED["HS2C3"]()
    src = to_dot(E)
    assert src.startswith("digraph hasse {") and src.rstrip().endswith("}")
    assert "{ rank=same; n1; n2; }" in src
    assert 'n0 [label="0", shape=doublecircle]' in src
    assert 'n1 [label="a"]' in src
    assert src.count("->") == 4


def test_dot_highlight_groups_get_colours():
    E = boolean(2)
    src = to_dot(E, [("left", 0b0011), ("right", 0b0110)])
    assert 'fillcolor="lightblue:lightpink"' in src and "style=wedged" in src
    assert 'label="left"' in src and 'label="right"' in src


def test_chain_diagram_is_a_path():
    assert len(covers(chain(6))) == 5
