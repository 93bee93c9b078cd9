"""Atoms, compatibility, blocks, sharp elements, atomic decompositions and almost orthogonality."""

from __future__ import annotations

import dataclasses

import networkx as nx

from .caps import current as current_caps
from .core import INFINITE, EffectAlgebra, bits, is_sub_effect_algebra, to_mask
from .errors import CapExceeded, Falsification, PreconditionError


@dataclasses.dataclass(frozen=True)
class AtomTable:
    atoms: tuple[int, ...]
    ord: tuple  # ord[x] for every element; INFINITE for 0
    is_atomic: bool
    is_archimedean: bool


@dataclasses.dataclass(frozen=True)
class BlockDecomposition:
    compat: tuple[int, ...]  # compat[x]: mask of elements compatible with x
    blocks: tuple[int, ...]  # masks, lexicographic by sorted members
    is_mv: bool
    is_block_finite: bool
    b_e: int  # intersection of all blocks
    c_e: int  # b_e intersected with the sharp elements


@dataclasses.dataclass(frozen=True)
class Decomposition:
    target: int
    terms: tuple[tuple[int, int], ...]  # (atom, multiplicity)


@dataclasses.dataclass(frozen=True)
class AOReport:
    per_atom: dict[int, tuple[int, ...]]  # atom a -> A_a
    is_almost_orthogonal: bool
    witnesses: dict[tuple[int, int], tuple[tuple[int, int], ...]]  # (a, l) -> ((c, j), ...)
    minimal: dict[tuple[int, int], tuple[tuple[int, int], ...]]  # irredundant sub-lists


# Results are cached per instance; instances are immutable so this is safe.
def _cached(fn):
    cache_name = "_cache_" + fn.__name__

    def wrapper(E: EffectAlgebra):
        try:
            return E.__dict__[cache_name]
        except KeyError:
            val = E.__dict__[cache_name] = fn(E)
            return val

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_cached
def atom_analysis(E: EffectAlgebra) -> AtomTable:
    o = E.order
    z = 1 << E.zero
    atoms = tuple(x for x in range(E.n) if x != E.zero and o.down[x] == z | 1 << x)
    amask = to_mask(atoms)
    ords = tuple(E.ord(x) for x in range(E.n))
    atomic = all(o.down[x] & amask for x in range(E.n) if x != E.zero)
    arch = all(ords[x] != INFINITE for x in range(E.n) if x != E.zero)
    return AtomTable(atoms, ords, atomic, arch)


def atom_mask(E: EffectAlgebra) -> int:
    return to_mask(atom_analysis(E).atoms)


def compatible(E: EffectAlgebra, x: int, y: int) -> bool:
    """x <-> y iff x v y = x (+) (y (-) (x ^ y)), the right side being defined."""
    E.require_lattice("compatibility")
    m = E.meet(x, y)
    rhs = E.plus(x, E.minus(y, m))
    return rhs is not None and rhs == E.join(x, y)


@_cached
def compat_masks(E: EffectAlgebra) -> tuple[int, ...]:
    E.require_lattice("compatibility")
    out = [0] * E.n
    for x in range(E.n):
        for y in range(x, E.n):
            if compatible(E, x, y):
                out[x] |= 1 << y
                out[y] |= 1 << x
    return tuple(out)


@_cached
def sharp_mask(E: EffectAlgebra) -> int:
    E.require_lattice("sharp elements")
    return to_mask(x for x in range(E.n) if E.meet(x, E.supp(x)) == E.zero)


def sharp_elements(E: EffectAlgebra) -> tuple[int, ...]:
    """S(E), verified to be a sub-lattice effect algebra satisfying the orthomodular law."""
    s = sharp_mask(E)
    chk = is_sub_effect_algebra(E, s)
    if not chk.ok or not chk.sublattice:
        raise Falsification(f"S(E) is not a sub-lattice effect algebra: {chk}")
    for x in bits(s):
        for y in bits(s):
            if E.leq(x, y) and E.join(x, E.meet(y, E.supp(x))) != y:
                raise Falsification(f"orthomodular law fails in S(E) at {E.labels[x]} <= {E.labels[y]}")
    return tuple(bits(s))


@_cached
def blocks(E: EffectAlgebra) -> BlockDecomposition:
    compat = compat_masks(E)
    g = nx.Graph()
    g.add_nodes_from(range(E.n))
    g.add_edges_from((x, y) for x in range(E.n) for y in bits(compat[x]) if y > x)
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    masks = tuple(to_mask(c) for c in cliques)
    for c, m in zip(cliques, masks):
        chk = is_sub_effect_algebra(E, m)
        if not chk.ok or not chk.sublattice:
            raise Falsification(
                f"block {E.labelset(c)} is not a sub-lattice effect algebra ({chk.reason} {chk.witness})"
            )
    b_e = E.full
    for m in masks:
        b_e &= m
    return BlockDecomposition(
        compat=compat,
        blocks=masks,
        is_mv=len(masks) == 1 and masks[0] == E.full,
        is_block_finite=True,
        b_e=b_e,
        c_e=b_e & sharp_mask(E),
    )


def block_atoms(E: EffectAlgebra, block: int) -> tuple[int, ...]:
    """Atoms of the block taken as a poset in its own right (they are atoms of E)."""
    o = E.order
    z = 1 << E.zero
    return tuple(x for x in bits(block) if x != E.zero and o.down[x] & block == z | 1 << x)


def _require_arch_atomic(E: EffectAlgebra, what: str) -> AtomTable:
    E.require_lattice(what)
    at = atom_analysis(E)
    if not at.is_atomic:
        raise PreconditionError(f"{what} needs an atomic effect algebra")
    if not at.is_archimedean:
        raise PreconditionError(f"{what} needs an Archimedean effect algebra")
    return at


def decompose(E: EffectAlgebra, x: int) -> Decomposition:
    """Write x as an orthogonal sum (and join) of multiples of distinct atoms.

    Greedy: least-index atom below the residual, largest multiple below it,
    subtract, repeat.  The result is checked before it is returned.
    """
    at = _require_arch_atomic(E, "decompose")
    terms = []
    rest = x
    while rest != E.zero:
        a = next(a for a in at.atoms if E.leq(a, rest))
        k = 1
        while True:
            nxt = E.multiple(a, k + 1)
            if nxt is None or not E.leq(nxt, rest):
                break
            k += 1
        terms.append((a, k))
        rest = E.minus(rest, E.multiple(a, k))
    d = Decomposition(x, tuple(terms))
    _verify_decomposition(E, d, at)
    return d


def _verify_decomposition(E: EffectAlgebra, d: Decomposition, at: AtomTable) -> None:
    atoms = [a for a, _ in d.terms]
    if len(set(atoms)) != len(atoms):
        raise Falsification(f"decomposition of {E.labels[d.target]} repeats an atom")
    parts = [E.multiple(a, k) for a, k in d.terms]
    if any(p is None for p in parts):
        raise Falsification("decomposition uses an undefined multiple")
    if E.oplus_all(parts) != d.target:
        raise Falsification(f"(+) of the terms does not give {E.labels[d.target]}")
    if E.join_all(parts) != d.target:
        raise Falsification(f"join of the terms does not give {E.labels[d.target]}")
    by_terms = all(k == at.ord[a] for a, k in d.terms)
    sharp = E.meet(d.target, E.supp(d.target)) == E.zero
    if by_terms != sharp:
        raise Falsification(f"sharpness criterion disagrees at {E.labels[d.target]}")


def all_decompositions(E: EffectAlgebra) -> dict[int, Decomposition]:
    key = "_cache_all_decompositions"
    if key not in E.__dict__:
        E.__dict__[key] = {x: decompose(E, x) for x in range(E.n) if x != E.zero}
    return E.__dict__[key]


def ao_witness_set(E: EffectAlgebra, a: int) -> tuple[int, ...]:
    """A_a: atoms b with b not below a' (a itself included when a is not below a')."""
    at = atom_analysis(E)
    s = E.supp(a)
    return tuple(b for b in at.atoms if not E.leq(b, s))


def _covers(E: EffectAlgebra, target: int, wit) -> bool:
    """Every x not below ``target`` lies above some j c in ``wit``."""
    mults = [E.multiple(c, j) for c, j in wit]
    for x in range(E.n):
        if not E.leq(x, target) and not any(E.leq(m, x) for m in mults):
            return False
    return True


@_cached
def almost_orthogonality(E: EffectAlgebra) -> AOReport:
    at = _require_arch_atomic(E, "almost orthogonality")
    smask = sharp_mask(E)
    per_atom = {a: ao_witness_set(E, a) for a in at.atoms}
    witnesses = {}
    minimal = {}
    for a in at.atoms:
        A = per_atom[a]
        na = at.ord[a]
        cs = set(A) if smask >> a & 1 else set(A) | {a}
        for l in range(1, na + 1):
            target = E.supp(E.multiple(a, l))
            wit = tuple(sorted((c, na - l + 1 if c == a else 1) for c in cs))
            for c, j in wit:
                if E.leq(E.multiple(c, j), target):
                    raise Falsification(f"witness {j}{E.labels[c]} lies below ({l}{E.labels[a]})'")
            if not _covers(E, target, wit):
                raise Falsification(f"witness list for ({E.labels[a]}, {l}) does not cover")
            witnesses[(a, l)] = wit
            red = list(wit)
            for item in wit:
                trial = [w for w in red if w != item]
                if _covers(E, target, trial):
                    red = trial
            minimal[(a, l)] = tuple(red)
    return AOReport(per_atom, True, witnesses, minimal)


# -- compactness -------------------------------------------------------


def _subset_joins(E: EffectAlgebra) -> list[int]:
    n = E.n
    caps = current_caps()
    if n > caps.compact:
        raise CapExceeded("compactness scan", n, caps.compact)
    key = "_cache_subset_joins"
    if key in E.__dict__:
        return E.__dict__[key]
    joins = [E.zero] * (1 << n)
    jt = E.order.join_table
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        joins[s] = jt[joins[s & (s - 1)]][low]
    E.__dict__[key] = joins
    return joins


def _finite_subjoin(E: EffectAlgebra, u: int, D: int, joins: list[int]) -> int | None:
    """Greedily thin D to a subfamily whose join still lies above u."""
    up_u = E.order.up[u]
    F = D
    for x in bits(D):
        trial = F & ~(1 << x)
        if up_u >> joins[trial] & 1:
            F = trial
    return F if up_u >> joins[F] & 1 else None


def is_compact_element(E: EffectAlgebra, u: int) -> bool:
    """Brute force over every subset D: u <= V D must be witnessed by a finite F within D."""
    E.require_lattice("compactness")
    joins = _subset_joins(E)
    for D, j in enumerate(joins):
        if E.leq(u, j) and _finite_subjoin(E, u, D, joins) is None:
            return False
    return True


def is_s_compact(E: EffectAlgebra, u: int) -> bool:
    """u below every upper bound of D must force u <= V F for a finite F within D."""
    E.require_lattice("s-compactness")
    joins = _subset_joins(E)
    up = E.order.up
    for D in range(len(joins)):
        ub = E.full
        for x in bits(D):
            ub &= up[x]
        if all(E.leq(u, c) for c in bits(ub)) and _finite_subjoin(E, u, D, joins) is None:
            return False
    return True
