"""Dedekind-MacNeille completion of finite posets and closedness of subsets."""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

from .caps import current as current_caps
from .core import EffectAlgebra, bits, is_sub_effect_algebra, to_mask
from .errors import CapExceeded, Falsification, PreconditionError
from .structure import atom_analysis, is_s_compact


@dataclasses.dataclass(frozen=True)
class Poset:
    labels: tuple[str, ...]
    down: tuple[int, ...]  # down[x]: mask of elements <= x

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    @classmethod
    def of(cls, E: EffectAlgebra) -> "Poset":
        return cls(tuple(E.labels), tuple(E.order.down))

    @classmethod
    def from_relation(cls, labels: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "Poset":
        """Reflexive-transitive closure of the given ``x <= y`` pairs."""
        idx = {s: i for i, s in enumerate(labels)}
        n = len(labels)
        down = [1 << i for i in range(n)]
        for x, y in pairs:
            down[idx[y]] |= 1 << idx[x]
        changed = True
        while changed:
            changed = False
            for y in range(n):
                m = down[y]
                for x in bits(m):
                    m |= down[x]
                if m != down[y]:
                    down[y], changed = m, True
        for x in range(n):
            for y in range(n):
                if x != y and down[y] >> x & 1 and down[x] >> y & 1:
                    raise PreconditionError("relation is not antisymmetric")
        return cls(tuple(labels), tuple(down))

    def up(self, x: int) -> int:
        return to_mask(y for y in range(self.n) if self.down[y] >> x & 1)

    def upper_bounds(self, S: int) -> int:
        m = self.full
        for x in bits(S):
            m &= self.up(x)
        return m

    def lower_bounds(self, S: int) -> int:
        m = self.full
        for x in bits(S):
            m &= self.down[x]
        return m


@dataclasses.dataclass(frozen=True)
class DMCompletion:
    cuts: tuple[tuple[int, int], ...]  # (lower set, upper set), a linear extension of inclusion
    embedding: tuple[int, ...]  # element -> cut index
    is_isomorphic_to_source: bool

    def leq(self, i: int, j: int) -> bool:
        return self.cuts[i][0] & ~self.cuts[j][0] == 0

    def meet(self, i: int, j: int) -> int:
        lo = self.cuts[i][0] & self.cuts[j][0]
        return next(k for k, (L, _) in enumerate(self.cuts) if L == lo)

    def join(self, i: int, j: int) -> int:
        # least cut containing both lower sets
        both = self.cuts[i][0] | self.cuts[j][0]
        cands = [k for k, (L, _) in enumerate(self.cuts) if both & ~L == 0]
        return min(cands, key=lambda k: bin(self.cuts[k][0]).count("1"))

    def atoms(self) -> tuple[int, ...]:
        bottom = 0  # cuts are sorted by size, the least one comes first
        return tuple(
            k
            for k in range(1, len(self.cuts))
            if all(not (self.leq(m, k) and m != k and m != bottom) for m in range(len(self.cuts)))
        )


def dm_complete(P: Poset | EffectAlgebra) -> DMCompletion:
    if isinstance(P, EffectAlgebra):
        P = Poset.of(P)
    # closed lower sets are the intersections of principal down-sets (the empty
    # intersection being P itself)
    closed = {P.full}
    frontier = [P.full]
    while frontier:
        nxt = []
        for L in frontier:
            for x in range(P.n):
                m = L & P.down[x]
                if m not in closed:
                    closed.add(m)
                    nxt.append(m)
        frontier = nxt
    cuts = []
    for L in sorted(closed, key=lambda m: (bin(m).count("1"), m)):
        U = P.upper_bounds(L)
        if P.lower_bounds(U) != L:
            raise Falsification("cut is not Galois-closed")
        cuts.append((L, U))
    pos = {L: k for k, (L, _) in enumerate(cuts)}
    embedding = tuple(pos[P.down[x]] for x in range(P.n))
    dm = DMCompletion(tuple(cuts), embedding, len(set(embedding)) == len(cuts))
    _verify_density(P, dm)
    return dm


def _verify_density(P: Poset, dm: DMCompletion) -> None:
    for x in range(P.n):
        for y in range(P.n):
            if P.leq(x, y) != dm.leq(dm.embedding[x], dm.embedding[y]):
                raise Falsification("embedding does not preserve and reflect order")
    for L, U in dm.cuts:
        # join-dense: L is the closure of the union of the principal cuts below it
        union = 0
        for x in bits(L):
            union |= P.down[x]
        if P.lower_bounds(P.upper_bounds(union)) != L:
            raise Falsification("completion is not join-dense")
        # meet-dense: L is the intersection of the principal cuts above it
        inter = P.full
        for x in bits(U):
            inter &= P.down[x]
        if inter != L:
            raise Falsification("completion is not meet-dense")


def poset_of_completion(dm: DMCompletion) -> Poset:
    k = len(dm.cuts)
    down = tuple(to_mask(i for i in range(k) if dm.leq(i, j)) for j in range(k))
    return Poset(tuple(f"c{i}" for i in range(k)), down)


def mc_check(E: EffectAlgebra) -> bool:
    """The completion of E's order is E again, with atoms mapped onto atoms."""
    E.require_lattice("mc_check")
    dm = dm_complete(E)
    if not dm.is_isomorphic_to_source:
        return False
    images = sorted(dm.embedding[a] for a in atom_analysis(E).atoms)
    return images == sorted(dm.atoms())


def compact_in_completion(E: EffectAlgebra, u: int) -> bool:
    """u compact in the completion, by brute force over cut families."""
    dm = dm_complete(E)
    k = len(dm.cuts)
    cap = current_caps().compact
    if k > cap:
        raise CapExceeded("compactness in the completion", k, cap)
    cu = dm.embedding[u]
    jt = [[dm.join(i, j) for j in range(k)] for i in range(k)]
    joins = [0] * (1 << k)  # cut 0 is the least cut
    for s in range(1, 1 << k):
        low = (s & -s).bit_length() - 1
        joins[s] = jt[joins[s & (s - 1)]][low]
    for D in range(1 << k):
        if not dm.leq(cu, joins[D]):
            continue
        # finite cut families are their own finite subfamilies; thin greedily anyway
        F = D
        for x in bits(D):
            if dm.leq(cu, joins[F & ~(1 << x)]):
                F &= ~(1 << x)
        if not dm.leq(cu, joins[F]):
            return False
    return True


def s_compact_matches_completion(E: EffectAlgebra) -> bool:
    return all(is_s_compact(E, u) == compact_in_completion(E, u) for u in range(E.n))


# -- closedness -------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ClosednessReport:
    subset: int
    conditions: dict[str, bool]

    @property
    def agree(self) -> bool:
        return len(set(self.conditions.values())) == 1


def _all_subset_joins(E: EffectAlgebra, D: int, op, start: int) -> set[int]:
    # every value op(S) for S a subset of D, grown one element at a time
    seen = {start}
    frontier = [start]
    members = list(bits(D))
    while frontier:
        nxt = []
        for v in frontier:
            for d in members:
                w = op(v, d)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def closedness(E: EffectAlgebra, D) -> ClosednessReport:
    E.require_lattice("closedness")
    d = D if isinstance(D, int) else to_mask(D)
    chk = is_sub_effect_algebra(E, d)
    if not chk.ok or not chk.sublattice:
        raise PreconditionError(f"D is not a sub-lattice effect algebra ({chk.reason})")
    joins = _all_subset_joins(E, d, E.join, E.zero)
    meets = _all_subset_joins(E, d, E.meet, E.one)
    in_d = lambda vals: all(d >> v & 1 for v in vals)  # noqa: E731
    members = list(bits(d))
    sub = (
        d >> E.zero & 1
        and d >> E.one & 1
        and all(d >> E.join(x, y) & 1 and d >> E.meet(x, y) & 1 for x in members for y in members)
    )
    return ClosednessReport(
        d,
        {"joins-closed": in_d(joins), "meets-closed": in_d(meets), "complete-sublattice": bool(sub)},
    )
