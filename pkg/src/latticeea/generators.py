"""Constructors for the canonical finite instances."""

from __future__ import annotations

import itertools
import warnings
from typing import Sequence

from .core import UNDEF, EffectAlgebra, PartialSumTable
from .errors import PreconditionError

_ATOM_NAMES = "pqrstuvwxyz"


def chain(n: int) -> EffectAlgebra:
    """The n-element chain 0 < a < 2a < ... < (n-1)a = 1 (an MV-effect algebra)."""
    if n < 2:
        raise PreconditionError("chain needs n >= 2")
    labels = ["0"] + [("a" if k == 1 else f"{k}a") for k in range(1, n - 1)] + ["1"]
    rows = [[i + j if i + j < n else UNDEF for j in range(n)] for i in range(n)]
    return EffectAlgebra(labels, PartialSumTable(rows))


def _atom_labels(k: int) -> list[str]:
    if k <= len(_ATOM_NAMES):
        return list(_ATOM_NAMES[:k])
    return [f"e{i}" for i in range(k)]


def boolean(k: int) -> EffectAlgebra:
    """The Boolean algebra 2^k with disjoint union as the sum."""
    if k < 1:
        raise PreconditionError("boolean needs k >= 1 (k = 0 would identify 0 and 1)")
    names = _atom_labels(k)
    n = 1 << k
    sep = "" if k <= len(_ATOM_NAMES) else "+"
    labels = []
    for m in range(n):
        if m == 0:
            labels.append("0")
        elif m == n - 1:
            labels.append("1")
        else:
            labels.append(sep.join(names[i] for i in range(k) if m >> i & 1))
    rows = [[i | j if not i & j else UNDEF for j in range(n)] for i in range(n)]
    return EffectAlgebra(labels, PartialSumTable(rows))


def horizontal_sum(summands: Sequence[EffectAlgebra]) -> EffectAlgebra:
    """Glue the summands at 0 and 1; sums across different summands stay undefined."""
    kept = []
    for i, S in enumerate(summands):
        if S.n == 2:
            warnings.warn(f"horizontal_sum: summand {i} has two elements and is absorbed", stacklevel=2)
            continue
        kept.append(S)
    if not kept:
        return chain(2)
    if len(kept) == 1:
        return kept[0]

    middles = [[x for x in range(S.n) if x not in (S.zero, S.one)] for S in kept]
    all_labels = [S.labels[x] for S, mid in zip(kept, middles) for x in mid]
    clash = len(set(all_labels)) != len(all_labels) or {"0", "1"} & set(all_labels)
    labels = ["0"]
    local_to_global: list[dict[int, int]] = []
    for i, (S, mid) in enumerate(zip(kept, middles)):
        m = {}
        for x in mid:
            m[x] = len(labels)
            labels.append(f"{S.labels[x]}{i + 1}" if clash else S.labels[x])
        local_to_global.append(m)
    one = len(labels)
    labels.append("1")
    n = len(labels)
    for i, S in enumerate(kept):
        local_to_global[i][S.zero] = 0
        local_to_global[i][S.one] = one

    rows = [[UNDEF] * n for _ in range(n)]
    for x in range(n):
        rows[0][x] = rows[x][0] = x
    for i, S in enumerate(kept):
        g = local_to_global[i]
        for a, b in itertools.product(range(S.n), repeat=2):
            c = S.table.rows[a][b]
            if c != UNDEF:
                rows[g[a]][g[b]] = g[c]
    return EffectAlgebra(labels, PartialSumTable(rows))


def product(factors: Sequence[EffectAlgebra]) -> EffectAlgebra:
    """Direct product with the coordinatewise partial sum."""
    if not factors:
        raise PreconditionError("product needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    sizes = [F.n for F in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    pos = {t: i for i, t in enumerate(tuples)}
    labels = []
    for t in tuples:
        if all(x == F.zero for x, F in zip(t, factors)):
            labels.append("0")
        elif all(x == F.one for x, F in zip(t, factors)):
            labels.append("1")
        else:
            labels.append("(" + ",".join(F.labels[x] for x, F in zip(t, factors)) + ")")
    n = len(tuples)
    rows = [[UNDEF] * n for _ in range(n)]
    for i, s in enumerate(tuples):
        for j, t in enumerate(tuples):
            out = []
            for x, y, F in zip(s, t, factors):
                z = F.table.rows[x][y]
                if z == UNDEF:
                    break
                out.append(z)
            else:
                rows[i][j] = pos[tuple(out)]
    return EffectAlgebra(labels, PartialSumTable(rows))


def hs2c3() -> EffectAlgebra:
    """{0, a, b, 1} with a (+) a = 1 = b (+) b and a (+) b undefined."""
    return EffectAlgebra.from_triples(["0", "a", "b", "1"], [("a", "a", "1"), ("b", "b", "1")])


def hsb4b4() -> EffectAlgebra:
    return horizontal_sum([boolean(2), boolean(2)])


# Canonical named instances used throughout tests, reports and the CLI.
NAMED = {
    "E2": lambda: chain(2),
    "C3": lambda: chain(3),
    "B4": lambda: boolean(2),
    "HS2C3": hs2c3,
    "HSB4B4": hsb4b4,
}
