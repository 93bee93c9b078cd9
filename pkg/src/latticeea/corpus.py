"""The instance corpus used by the theorem suites: enumerated plus constructed."""

from __future__ import annotations

import warnings

from .core import EffectAlgebra
from .enumeration import enumerate_up_to
from .generators import NAMED, boolean, chain, horizontal_sum, product


def constructed_corpus() -> list[tuple[str, EffectAlgebra]]:
    """Named and generated instances, all with at most 64 elements."""
    out = [(name, make()) for name, make in NAMED.items()]
    out += [(f"chain({n})", chain(n)) for n in (4, 5, 8, 16, 33, 64)]
    out += [(f"boolean({k})", boolean(k)) for k in (3, 4, 5, 6)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out += [
            ("hsum(chain(3)*5)", horizontal_sum([chain(3)] * 5)),
            ("hsum(chain(3),chain(4),chain(5))", horizontal_sum([chain(3), chain(4), chain(5)])),
            ("hsum(boolean(3),chain(4))", horizontal_sum([boolean(3), chain(4)])),
            ("hsum(boolean(3)*3)", horizontal_sum([boolean(3)] * 3)),
            ("hsum(chain(30),chain(30))", horizontal_sum([chain(30), chain(30)])),
        ]
    out += [
        ("chain(3)xchain(3)", product([chain(3), chain(3)])),
        ("chain(3)xboolean(2)", product([chain(3), boolean(2)])),
        ("chain(4)xchain(4)", product([chain(4), chain(4)])),
        ("chain(3)xchain(3)xchain(3)", product([chain(3)] * 3)),
        ("HS2C3xchain(3)", product([NAMED["HS2C3"](), chain(3)])),
        ("chain(8)xboolean(3)", product([chain(8), boolean(3)])),
        ("HSB4B4xHS2C3", product([NAMED["HSB4B4"](), NAMED["HS2C3"]()])),
    ]
    for name, E in out:
        assert E.n <= 64, name
    return out


def enumerated_corpus(max_size: int = 6) -> list[tuple[str, EffectAlgebra]]:
    out = []
    counts: dict[int, int] = {}
    for E in enumerate_up_to(max_size):
        i = counts.get(E.n, 0)
        counts[E.n] = i + 1
        out.append((f"enum{E.n}-{i}", E))
    return out


def full_corpus(max_size: int = 6) -> list[tuple[str, EffectAlgebra]]:
    return enumerated_corpus(max_size) + constructed_corpus()


def lattice_corpus(max_size: int = 6) -> list[tuple[str, EffectAlgebra]]:
    """The corpus restricted to lattice effect algebras (the theorems' setting)."""
    return [(name, E) for name, E in full_corpus(max_size) if E.is_lattice]
