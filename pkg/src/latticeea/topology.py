"""Interval topology at finite scale.

Closed-set families are materialised only below the ``topology`` cap.  Above
it, everything runs through explicit witnesses: clopen partitions built from
almost-orthogonality data, separating interval pairs, and block-wise covers.
The order topology of a finite poset is the discrete topology (every
(o)-convergent net is eventually constant), so it is represented as such.
"""

from __future__ import annotations

import dataclasses

from .caps import current as current_caps
from .core import EffectAlgebra, bits, dual, is_sub_effect_algebra, to_mask
from .errors import CapExceeded, Falsification, PreconditionError
from .structure import (
    _cached,
    _require_arch_atomic,
    all_decompositions,
    atom_analysis,
    block_atoms,
    blocks,
    compat_masks,
)


@dataclasses.dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    members: int  # bitmask

    def __contains__(self, x: int) -> bool:
        return bool(self.members >> x & 1)

    def show(self, E: EffectAlgebra) -> str:
        return f"[{E.labels[self.lo]},{E.labels[self.hi]}]"


def interval(E: EffectAlgebra, lo: int, hi: int) -> Interval:
    if not E.leq(lo, hi):
        raise PreconditionError(f"[{E.labels[lo]},{E.labels[hi]}] is not an interval")
    return Interval(lo, hi, E.interval(lo, hi))


@dataclasses.dataclass(frozen=True)
class GeneratedTopology:
    closed_sets: frozenset[int]
    is_discrete: bool
    is_hausdorff_witnessed: bool


def _all_intervals(E: EffectAlgebra) -> set[int]:
    return {E.interval(a, b) for a in range(E.n) for b in range(E.n) if E.leq(a, b)}


def _union_closure(gens: set[int]) -> set[int]:
    fam = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                u = s | g
                if u not in fam:
                    fam.add(u)
                    nxt.append(u)
        frontier = nxt
    return fam


def _closed_family_of_lattice(n: int, leq, meet, join, full: int) -> frozenset[int]:
    ivs = {}
    for a in range(n):
        for b in range(n):
            if leq(a, b):
                ivs[(a, b)] = to_mask(x for x in range(n) if leq(a, x) and leq(x, b))
    # [a,b] and [c,d] meet in [a v c, b ^ d] or not at all, so finite unions of
    # intervals are already closed under finite intersection.
    for (a, b), m1 in ivs.items():
        for (c, d), m2 in ivs.items():
            lo, hi = join(a, c), meet(b, d)
            expect = ivs.get((lo, hi), 0)
            if m1 & m2 != expect:
                raise Falsification("intersection of two intervals is not an interval")
    fam = _union_closure(set(ivs.values()))
    fam.add(full)
    return frozenset(fam)


def _hausdorff(closed: frozenset[int], n: int, full: int) -> bool:
    # x, y separated iff closed C1, C2 cover E with x outside C1 and y outside C2
    for x in range(n):
        for y in range(x + 1, n):
            c1s = [c for c in closed if not c >> x & 1]
            c2s = [c for c in closed if not c >> y & 1]
            if not any(c1 | c2 == full for c1 in c1s for c2 in c2s):
                return False
    return True


def generate_topology(E: EffectAlgebra) -> GeneratedTopology:
    E.require_lattice("interval topology")
    cap = current_caps().topology
    if E.n > cap:
        raise CapExceeded("interval topology generation (use the witness operations)", E.n, cap)
    closed = _closed_family_of_lattice(E.n, E.leq, E.meet, E.join, E.full)
    discrete = len(closed) == 1 << E.n
    haus = True if discrete else _hausdorff(closed, E.n, E.full)
    return GeneratedTopology(closed, discrete, haus)


def discrete_closed_sets(n: int) -> frozenset[int]:
    return frozenset(range(1 << n))


# -- partitions and clopen intervals -----------------------------------


@dataclasses.dataclass(frozen=True)
class PartitionWitness:
    atom: int
    level: int
    head: Interval  # [0, (la)']
    tail: tuple[Interval, ...]  # [j_k b_k, 1] ..., [(n_a + 1 - l) a, 1]

    @property
    def tail_union(self) -> int:
        m = 0
        for iv in self.tail:
            m |= iv.members
        return m


def _partitions(E: EffectAlgebra) -> dict:
    return E.__dict__.setdefault("_cache_partitions", {})


def ao_partition(E: EffectAlgebra, a: int, l: int) -> PartitionWitness:
    """E = [0,(la)'] together with the up-sets of the non-orthogonal atom multiples, disjointly."""
    cache = _partitions(E)
    if (a, l) in cache:
        return cache[(a, l)]
    at = _require_arch_atomic(E, "ao_partition")
    if a not in at.atoms:
        raise PreconditionError(f"{E.labels[a]} is not an atom")
    na = at.ord[a]
    if not 1 <= l <= na:
        raise PreconditionError(f"level {l} outside 1..{na}")
    target = E.supp(E.multiple(a, l))
    tail = []
    for b in at.atoms:
        if b == a:
            continue
        j = next((j for j in range(1, at.ord[b] + 1) if not E.leq(E.multiple(b, j), target)), None)
        if j is not None:
            tail.append(interval(E, E.multiple(b, j), E.one))
    tail.append(interval(E, E.multiple(a, na + 1 - l), E.one))
    w = PartitionWitness(a, l, interval(E, E.zero, target), tuple(tail))
    if w.head.members | w.tail_union != E.full:
        raise Falsification(f"partition for ({E.labels[a]}, {l}) does not cover E")
    if w.head.members & w.tail_union:
        raise Falsification(f"partition for ({E.labels[a]}, {l}) is not disjoint")
    cache[(a, l)] = w
    return w


def dual_instance(E: EffectAlgebra) -> EffectAlgebra:
    if "_cache_dual" not in E.__dict__:
        E.__dict__["_cache_dual"] = dual(E)
    return E.__dict__["_cache_dual"]


def upper_partition(E: EffectAlgebra, b: int, k: int) -> tuple[Interval, tuple[Interval, ...]]:
    """[kb, 1] and a finite family of intervals partitioning its complement.

    Runs the partition on the dual algebra, whose atoms are the coatoms b' of E,
    and maps the intervals back (dual index i is E index n-1-i).
    """
    D = dual_instance(E)
    n = E.n
    beta = n - 1 - E.supp(b)
    w = ao_partition(D, beta, k)

    def back(iv: Interval) -> Interval:
        return interval(E, n - 1 - iv.hi, n - 1 - iv.lo)

    head = back(w.head)
    if head.lo != E.multiple(b, k) or head.hi != E.one:
        raise Falsification("dual partition head is not [kb, 1]")
    return head, tuple(back(iv) for iv in w.tail)


@dataclasses.dataclass(frozen=True)
class ClopenResult:
    clopen: bool
    interval: Interval | None  # None when kb is not below (la)'
    complement: tuple[Interval, ...]


def clopen_check(E: EffectAlgebra, b: int, k: int, a: int, l: int) -> ClopenResult:
    """[kb, (la)'] is clopen: its complement is the union of two finite interval families."""
    _require_arch_atomic(E, "clopen_check")
    kb = E.multiple(b, k)
    top = E.supp(E.multiple(a, l)) if l > 0 else E.one
    if kb is None:
        raise PreconditionError(f"{k}{E.labels[b]} is undefined")
    if not E.leq(kb, top):
        return ClopenResult(True, None, (interval(E, E.zero, E.one),))
    iv = interval(E, kb, top)
    lower = ao_partition(E, a, l)
    _, upper_tail = upper_partition(E, b, k)
    comp = tuple(dict.fromkeys(lower.tail + upper_tail))
    got = 0
    for c in comp:
        got |= c.members
    if got != E.full & ~iv.members:
        raise Falsification(f"complement of {iv.show(E)} is not reconstructed")
    return ClopenResult(True, iv, comp)


def complement_of_up(E: EffectAlgebra, b: int, k: int) -> tuple[Interval, ...]:
    head, tail = upper_partition(E, b, k)
    u = 0
    for iv in tail:
        u |= iv.members
    if u | head.members != E.full or u & head.members:
        raise Falsification(f"dual partition for ({E.labels[b]}, {k}) fails")
    return tail


# -- separation ----------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SeparationWitness:
    x: int
    y: int
    swapped: bool  # True when the caller's pair was (y, x)
    atom_b: int
    k: int
    atom_a: int
    l: int
    up: Interval  # [kb, 1] holds x
    down: Interval  # [0, (la)'] holds y


def separate(E: EffectAlgebra, x: int, y: int) -> SeparationWitness:
    """Disjoint clopen intervals [kb, 1] containing x and [0, (la)'] containing y."""
    _require_arch_atomic(E, "separate")
    if x == y:
        raise PreconditionError("separate needs two distinct elements")
    swapped = False
    if E.leq(x, y):
        x, y, swapped = y, x, True
    decs = all_decompositions(E)
    kb = next(((b, k) for b, k in decs[x].terms if not E.leq(E.multiple(b, k), y)), None)
    if kb is None:
        raise Falsification(f"no term of {E.labels[x]} escapes {E.labels[y]}")
    b, k = kb
    mb = E.multiple(b, k)
    # dual step: a term la of y' with kb not below (la)'
    ys = E.supp(y)
    la = None
    if ys != E.zero:
        la = next(
            ((a, l) for a, l in decs[ys].terms if not E.leq(mb, E.supp(E.multiple(a, l)))), None
        )
    if la is None:
        raise Falsification(f"no dual term separates {E.labels[x]} from {E.labels[y]}")
    a, l = la
    up = interval(E, mb, E.one)
    down = interval(E, E.zero, E.supp(E.multiple(a, l)))
    w = SeparationWitness(x, y, swapped, b, k, a, l, up, down)
    _verify_separation(E, w)
    return w


def _verify_separation(E: EffectAlgebra, w: SeparationWitness) -> None:
    if w.x not in w.up or w.y not in w.down:
        raise Falsification("separating intervals miss their points")
    if w.up.members & w.down.members:
        raise Falsification("separating intervals overlap")
    # clopen: each complement is a finite union of intervals
    lower = ao_partition(E, w.atom_a, w.l)
    if lower.head != w.down:
        raise Falsification("down interval is not the partition head")
    complement_of_up(E, w.atom_b, w.k)


# -- block-finite covers ---------------------------------------------------


@dataclasses.dataclass(frozen=True)
class BlockCover:
    block: int  # index into blocks(E).blocks
    case: str  # "both-in", "x-outside", "y-outside"
    atom: int
    J: Interval
    K: Interval


@dataclasses.dataclass(frozen=True)
class CoverWitness:
    x: int
    y: int
    per_block: tuple[BlockCover, ...]


def blockfinite_cover(E: EffectAlgebra, x: int, y: int) -> CoverWitness:
    """Two disjoint intervals per block covering it, none holding both x and y."""
    _require_arch_atomic(E, "blockfinite_cover")
    if E.leq(x, y):
        raise PreconditionError("blockfinite_cover needs x not below y")
    at = atom_analysis(E)
    bd = blocks(E)
    compat = compat_masks(E)
    out = []
    for i, M in enumerate(bd.blocks):
        batoms = block_atoms(E, M)
        if M >> x & 1 and M >> y & 1:
            found = next(
                (
                    (a, l)
                    for a in batoms
                    for l in range(1, at.ord[a] + 1)
                    if E.leq(E.multiple(a, l), x) and not E.leq(E.multiple(a, l), y)
                ),
                None,
            )
            if found is None:
                raise Falsification(f"no atom multiple of block {i} separates the pair")
            a, l = found
            k = at.ord[a] - l + 1
            J = interval(E, E.zero, E.supp(E.multiple(a, k)))
            K = interval(E, E.multiple(a, at.ord[a] + 1 - k), E.one)
            case = "both-in"
        else:
            case, outsider = ("x-outside", x) if not M >> x & 1 else ("y-outside", y)
            a = next((a for a in batoms if not compat[outsider] >> a & 1), None)
            if a is None:
                raise Falsification(f"every atom of block {i} is compatible with an outside element")
            J = interval(E, E.zero, E.supp(a))
            K = interval(E, E.multiple(a, at.ord[a]), E.one)
        out.append(BlockCover(i, case, a, J, K))
    w = CoverWitness(x, y, tuple(out))
    _verify_cover(E, w, bd.blocks)
    return w


def _verify_cover(E: EffectAlgebra, w: CoverWitness, block_masks) -> None:
    cover = 0
    both = (1 << w.x) | (1 << w.y)
    for bc in w.per_block:
        M = block_masks[bc.block]
        if M & ~(bc.J.members | bc.K.members):
            raise Falsification(f"block {bc.block} not covered by its two intervals")
        if bc.J.members & bc.K.members:
            raise Falsification(f"intervals of block {bc.block} overlap")
        for iv in (bc.J, bc.K):
            if iv.members & both == both:
                raise Falsification(f"interval {iv.show(E)} holds both points")
        cover |= bc.J.members | bc.K.members
    if cover != E.full:
        raise Falsification("intervals do not cover E")


# -- the function family Phi ----------------------------------------------


@dataclasses.dataclass(frozen=True)
class PhiFamily:
    u_set: tuple[int, ...]  # joins of atom multiples
    v_set: tuple[int, ...]  # supplements of u_set

    def f(self, E: EffectAlgebra, u: int, x: int) -> int:
        return int(E.leq(u, x))

    def g(self, E: EffectAlgebra, v: int, x: int) -> int:
        return int(E.leq(x, v))

    def preimages(self, E: EffectAlgebra) -> list[int]:
        """Masks f_u^{-1}(1), f_u^{-1}(0), g_v^{-1}(1), g_v^{-1}(0)."""
        out = []
        for u in self.u_set:
            m = E.order.up[u]
            out += [m, E.full & ~m]
        for v in self.v_set:
            m = E.order.down[v]
            out += [m, E.full & ~m]
        return out


@_cached
def phi_eval(E: EffectAlgebra) -> PhiFamily:
    at = _require_arch_atomic(E, "phi_eval")
    gens = {E.multiple(a, l) for a in at.atoms for l in range(1, at.ord[a] + 1)}
    us = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                j = E.join(u, g)
                if j not in us:
                    us.add(j)
                    nxt.append(j)
        frontier = nxt
    u_set = tuple(sorted(us))
    v_set = tuple(sorted({E.supp(u) for u in us}))
    return PhiFamily(u_set, v_set)


def phi_separates(E: EffectAlgebra, fam: PhiFamily | None = None) -> tuple[int, int] | None:
    """First unordered pair that no f_u or g_v tells apart; None if the family separates points."""
    fam = fam or phi_eval(E)
    sig = {}
    for x in range(E.n):
        key = tuple(E.leq(u, x) for u in fam.u_set) + tuple(E.leq(x, v) for v in fam.v_set)
        if key in sig:
            return sig[key], x
        sig[key] = x
    return None


def phi_closed_sets(E: EffectAlgebra, fam: PhiFamily | None = None) -> frozenset[int]:
    """Closed sets of the initial topology of the 0/1-valued family (complements of opens)."""
    fam = fam or phi_eval(E)
    sub = fam.preimages(E)
    nbhd = []
    for x in range(E.n):
        m = E.full
        for s in sub:
            if s >> x & 1:
                m &= s
        nbhd.append(m)
    opens = _union_closure(set(nbhd))
    return frozenset(E.full & ~o for o in opens)


@dataclasses.dataclass(frozen=True)
class Agreement:
    agree: bool
    interval_eq_order: bool
    order_eq_phi: bool
    phi_separates: bool


def topologies_agree(E: EffectAlgebra) -> Agreement:
    fam = phi_eval(E)
    sep = phi_separates(E, fam) is None
    ti = generate_topology(E).closed_sets
    to = discrete_closed_sets(E.n)
    tphi = phi_closed_sets(E, fam)
    a, b = ti == to, to == tphi
    return Agreement(a and b and sep, a, b, sep)


def subspace_topology_check(E: EffectAlgebra, F) -> bool:
    """Trace of E's interval topology on F equals F's own interval topology."""
    E.require_lattice("subspace topology")
    f = F if isinstance(F, int) else to_mask(F)
    if not f:
        raise PreconditionError("F is empty")
    for x in bits(f):
        for y in bits(f):
            if not (f >> E.meet(x, y) & 1 and f >> E.join(x, y) & 1):
                raise PreconditionError("F is not a sublattice")
    cap = current_caps().topology
    if E.n > cap:
        raise CapExceeded("subspace topology", E.n, cap)
    trace = frozenset(c & f for c in generate_topology(E).closed_sets)
    members = list(bits(f))

    def pos_mask(local: int) -> int:
        return to_mask(members[i] for i in bits(local))

    own = _closed_family_of_lattice(
        len(members),
        lambda i, j: E.leq(members[i], members[j]),
        lambda i, j: members.index(E.meet(members[i], members[j])),
        lambda i, j: members.index(E.join(members[i], members[j])),
        (1 << len(members)) - 1,
    )
    return trace == frozenset(pos_mask(c) for c in own)


def sub_lattice_ok(E: EffectAlgebra, F) -> bool:
    chk = is_sub_effect_algebra(E, F)
    return chk.ok and bool(chk.sublattice)
