"""Exhaustive small-model search for effect algebras, up to isomorphism.

Two independent routes:

* ``enumerate_size`` -- backtracking over partial sum tables with axiom
  pruning.  Elements are labelled along a linear extension of the order,
  so a defined sum ``x (+) y`` (both nonzero) always has a larger index.
* ``oracle_tables`` / ``oracle_count`` -- every table with the implicit zero
  row is generated and tested by a direct axiom check; isomorphism classes
  are found by trying every relabelling.

Both fix element 0 as the zero and element n-1 as the unit.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .caps import current as current_caps
from .core import UNDEF, EffectAlgebra, PartialSumTable, validate
from .errors import CapExceeded

UNKNOWN = -2


def _involutions(items: list[int]):
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for sub in _involutions(rest):
        yield {first: first, **sub}
    for k, partner in enumerate(rest):
        others = rest[:k] + rest[k + 1 :]
        for sub in _involutions(others):
            yield {first: partner, partner: first, **sub}


def _search(n: int):
    """Yield raw tables (lists of lists) of every effect algebra on n labelled elements
    whose labelling is a linear extension of the order."""
    one = n - 1
    mid = list(range(1, n - 1))
    for s in _involutions(mid):
        T = [[UNKNOWN] * n for _ in range(n)]
        for x in range(n):
            T[0][x] = T[x][0] = x
        for x in range(1, n):
            T[one][x] = T[x][one] = UNDEF
        for x in mid:
            T[x][s[x]] = T[s[x]][x] = one
        pairs = []
        for i in mid:
            for j in mid:
                if i <= j and T[i][j] == UNKNOWN:
                    if j < s[i] and i < s[j]:
                        pairs.append((i, j))
                    else:
                        T[i][j] = T[j][i] = UNDEF
        yield from _fill(T, pairs, 0, n)


def _triple_ok(T, a, b, c) -> bool:
    ab = T[a][b]
    if ab == UNKNOWN:
        return True
    lhs = UNDEF if ab == UNDEF else T[ab][c]
    if lhs == UNKNOWN:
        return True
    bc = T[b][c]
    if bc == UNKNOWN:
        return True
    rhs = UNDEF if bc == UNDEF else T[a][bc]
    if rhs == UNKNOWN:
        return True
    return lhs == rhs


def _consistent(T, i, j, n) -> bool:
    for x, y in ((i, j), (j, i)):
        for c in range(n):
            if not _triple_ok(T, x, y, c) or not _triple_ok(T, c, x, y):
                return False
    for a in range(n):
        Ta = T[a]
        for b in range(n):
            v = Ta[b]
            if v == i and not (_triple_ok(T, a, b, j) and _triple_ok(T, j, a, b)):
                return False
            if v == j and not (_triple_ok(T, a, b, i) and _triple_ok(T, i, a, b)):
                return False
    return True


def _fill(T, pairs, k, n):
    if k == len(pairs):
        yield [row[:] for row in T]
        return
    i, j = pairs[k]
    for v in [UNDEF] + list(range(max(i, j) + 1, n - 1)):
        T[i][j] = T[j][i] = v
        if _consistent(T, i, j, n):
            yield from _fill(T, pairs, k + 1, n)
    T[i][j] = T[j][i] = UNKNOWN


# -- canonical form ----------------------------------------------------


def _invariants(rows, n):
    one = n - 1
    below = [0] * n
    for a in range(n):
        for c in range(n):
            b = rows[a][c]
            if b != UNDEF:
                below[b] += 1
    out = []
    for x in range(n):
        k, acc = 0, x
        if x != 0:
            while True:
                nxt = rows[acc][x]
                if nxt == UNDEF or k > n:
                    break
                acc, k = nxt, k + 1
        degree = sum(1 for y in range(n) if rows[x][y] != UNDEF)
        rank = 0 if x == 0 else (2 if x == one else 1)
        out.append((rank, below[x], k, degree))
    return out


def canonical_form(rows) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least relabelled table among relabellings that sort
    elements by (below-count, ord, degree); 0 and 1 stay fixed."""
    n = len(rows)
    inv = _invariants(rows, n)
    groups = {}
    for x in range(n):
        groups.setdefault(inv[x], []).append(x)
    keys = sorted(groups)
    best = None
    for choice in itertools.product(*[itertools.permutations(groups[k]) for k in keys]):
        order = [x for grp in choice for x in grp]  # new index -> old element
        p = [0] * n
        for new, old in enumerate(order):
            p[old] = new
        enc = tuple(
            tuple(UNDEF if (v := rows[order[i]][order[j]]) == UNDEF else p[v] for j in range(n)) for i in range(n)
        )
        if best is None or enc < best:
            best = enc
    return best


def _labels(n: int) -> list[str]:
    return ["0"] + [chr(ord("a") + i) for i in range(n - 2)] + ["1"]


def _instance(rows) -> EffectAlgebra:
    return EffectAlgebra(_labels(len(rows)), PartialSumTable(rows))


@lru_cache(maxsize=None)
def _enumerate_tables(n: int) -> tuple:
    forms = set()
    for rows in _search(n):
        if validate(PartialSumTable(rows), 0, n - 1).ok:
            forms.add(canonical_form(rows))
    return tuple(sorted(forms))


def enumerate_size(n: int) -> list[EffectAlgebra]:
    """All effect algebras with exactly n elements, one per isomorphism class."""
    cap = current_caps().enumerate
    if n > cap:
        raise CapExceeded("enumerate", n, cap)
    if n < 2:
        return []
    return [_instance(r) for r in _enumerate_tables(n)]


def enumerate_up_to(max_size: int) -> list[EffectAlgebra]:
    cap = current_caps().enumerate
    if max_size > cap:
        raise CapExceeded("enumerate", max_size, cap)
    return [E for n in range(2, max_size + 1) for E in enumerate_size(n)]


# -- unpruned oracle ---------------------------------------------------


def _jit(fn):
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return fn
    return njit(cache=True)(fn)


def _oracle_check(T, zero, one):
    # T: (n, n) int array, -1 = undefined.  Direct check of the four axioms.
    n = T.shape[0]
    for a in range(n):
        for b in range(n):
            if T[a, b] != T[b, a]:
                return False
    for a in range(n):
        cnt = 0
        for b in range(n):
            if T[a, b] == one:
                cnt += 1
        if cnt != 1:
            return False
    for a in range(n):
        if a != zero and T[one, a] != -1:
            return False
    for a in range(n):
        for b in range(n):
            ab = T[a, b]
            for c in range(n):
                bc = T[b, c]
                lhs = -1 if ab == -1 else T[ab, c]
                rhs = -1 if bc == -1 else T[a, bc]
                if lhs != rhs:
                    return False
    return True


oracle_is_effect_algebra = _jit(_oracle_check)


def _oracle_sweep(n, out):
    # every table over the pairs {i <= j} of nonzero elements, zero row fixed to identity
    one = n - 1
    npairs = (n - 1) * n // 2
    pi = np.empty(npairs, np.int64)
    pj = np.empty(npairs, np.int64)
    k = 0
    for i in range(1, n):
        for j in range(i, n):
            pi[k] = i
            pj[k] = j
            k += 1
    digits = np.zeros(npairs, np.int64)
    T = np.full((n, n), -1, np.int64)
    for x in range(n):
        T[0, x] = x
        T[x, 0] = x
    for k in range(npairs):
        T[pi[k], pj[k]] = -1
        T[pj[k], pi[k]] = -1
    found = 0
    while True:
        if oracle_is_effect_algebra(T, 0, one):
            if found < out.shape[0]:
                out[found] = T
            found += 1
        # odometer step over values -1, 0, .., n-1
        k = 0
        while k < npairs:
            digits[k] += 1
            if digits[k] <= n:
                v = digits[k] - 1
                T[pi[k], pj[k]] = v
                T[pj[k], pi[k]] = v
                break
            digits[k] = 0
            T[pi[k], pj[k]] = -1
            T[pj[k], pi[k]] = -1
            k += 1
        if k == npairs:
            break
    return found


_oracle_sweep_jit = None


def oracle_tables(n: int) -> list[np.ndarray]:
    """Every labelled effect-algebra table on n elements (zero = 0, one = n-1), by brute force."""
    global _oracle_sweep_jit
    if _oracle_sweep_jit is None:
        _oracle_sweep_jit = _jit(_oracle_sweep)
    out = np.empty((4096, n, n), np.int64)
    found = _oracle_sweep_jit(n, out)
    if found > out.shape[0]:
        out = np.empty((found, n, n), np.int64)
        _oracle_sweep_jit(n, out)
    return [out[i] for i in range(found)]


def _brute_canonical(T: np.ndarray) -> tuple:
    n = T.shape[0]
    best = None
    for perm in itertools.permutations(range(1, n - 1)):
        p = [0, *perm, n - 1]
        q = [0] * n
        for old, new in enumerate(p):
            q[new] = old
        enc = tuple(
            -1 if T[q[i], q[j]] == -1 else p[T[q[i], q[j]]] for i in range(n) for j in range(n)
        )
        if best is None or enc < best:
            best = enc
    return best


def oracle_count(n: int) -> int:
    """Number of isomorphism classes of n-element effect algebras, by the unpruned route."""
    return len({_brute_canonical(T) for T in oracle_tables(n)})
