import pytest

from latticeea.caps import Caps


def test_defaults():
    c = Caps.from_env({})
    assert (c.compact, c.topology, c.states, c.enumerate, c.truncate) == (12, 12, 32, 8, 256)


def test_overrides():
    c = Caps.from_env({"EA_CAPS": "topology=10, compact=14,"})
    assert c.topology == 10 and c.compact == 14 and c.states == 32


@pytest.mark.parametrize("raw", ["bogus=1", "topology", "topology=x"])
def test_bad_values(raw):
    with pytest.raises(ValueError):
        Caps.from_env({"EA_CAPS": raw})
