"""Finite effect algebras: the partial sum table, axiom validation, and the induced order.

Elements are plain ``int`` indices into the carrier; labels are only for I/O.
Order relations are kept as Python-int bitmasks (``down[b]`` has bit ``a`` set
iff ``a <= b``), which makes meets and joins dictionary lookups.
"""

from __future__ import annotations

import dataclasses
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import AxiomError, NotALatticeError, PreconditionError, StructuralError

UNDEF = -1
INFINITE = float("inf")


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


@dataclasses.dataclass(frozen=True)
class ElementId:
    index: int
    label: str


class PartialSumTable:
    """Dense n x n table of a partial binary operation; ``UNDEF`` marks undefined pairs.

    Built from unordered triples it is symmetric by construction.  A raw
    matrix is also accepted so that commutativity can be checked at all.
    """

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.n = len(rows)
        self.rows = tuple(tuple(int(v) for v in r) for r in rows)
        for r in self.rows:
            if len(r) != self.n:
                raise StructuralError("sum table must be square")

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[tuple[int, int, int]], zero: int = 0) -> "PartialSumTable":
        rows = [[UNDEF] * n for _ in range(n)]
        seen: dict[tuple[int, int], int] = {}
        for x, y, z in triples:
            for v in (x, y, z):
                if not 0 <= v < n:
                    raise StructuralError(f"triple {(x, y, z)} mentions an element outside the carrier")
            key = (min(x, y), max(x, y))
            if key in seen and seen[key] != z:
                raise StructuralError(f"contradictory triples for pair {key}: {seen[key]} and {z}")
            seen[key] = z
            rows[x][y] = rows[y][x] = z
        for x in range(n):
            if rows[x][zero] == UNDEF:
                rows[x][zero] = rows[zero][x] = x
        return cls(rows)

    def __getitem__(self, ab: tuple[int, int]) -> int:
        a, b = ab
        return self.rows[a][b]

    def entries(self) -> dict[tuple[int, int], int]:
        """Defined entries keyed by unordered pair ``(i, j)`` with ``i <= j``."""
        return {
            (i, j): self.rows[i][j]
            for i in range(self.n)
            for j in range(i, self.n)
            if self.rows[i][j] != UNDEF
        }

    def __eq__(self, other):
        return isinstance(other, PartialSumTable) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)


@dataclasses.dataclass(frozen=True)
class Violation:
    axiom: str  # "Ei" .. "Eiv"
    witness: tuple

    def __str__(self):
        return f"{self.axiom} at {self.witness}"


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_structure(table: PartialSumTable, zero: int, one: int) -> None:
    n = table.n
    if n < 2:
        raise StructuralError("carrier needs at least two elements")
    if not (0 <= zero < n and 0 <= one < n):
        raise StructuralError("zero/one outside the carrier")
    if zero == one:
        raise StructuralError("zero and one must be distinct")
    for i, row in enumerate(table.rows):
        for j, v in enumerate(row):
            if v != UNDEF and not 0 <= v < n:
                raise StructuralError(f"entry ({i},{j}) = {v} outside the carrier")
    for x in range(n):
        if table.rows[x][zero] == UNDEF or table.rows[zero][x] == UNDEF:
            raise StructuralError(f"sum with zero must be total; ({x},{zero}) is undefined")


def validate(table: PartialSumTable, zero: int, one: int) -> ValidationReport:
    """Check the four effect-algebra axioms, listing every violated instance.

    Raises StructuralError for malformed tables; axiom failures go in the report.
    """
    _check_structure(table, zero, one)
    n, t = table.n, table.rows
    out: list[Violation] = []

    for a in range(n):
        for b in range(a + 1, n):
            if t[a][b] != t[b][a]:
                out.append(Violation("Ei", (a, b, None)))

    for a in range(n):
        ta = t[a]
        for b in range(n):
            ab = ta[b]
            tb = t[b]
            for c in range(n):
                lhs = UNDEF if ab == UNDEF else t[ab][c]
                bc = tb[c]
                rhs = UNDEF if bc == UNDEF else ta[bc]
                if lhs != rhs:
                    out.append(Violation("Eii", (a, b, c)))

    for a in range(n):
        comps = [b for b in range(n) if t[a][b] == one]
        if len(comps) != 1:
            pad = (comps + [None, None])[:2]
            out.append(Violation("Eiii", (a, *pad)))

    for a in range(n):
        if a != zero and t[one][a] != UNDEF:
            out.append(Violation("Eiv", (one, a, t[one][a])))

    return ValidationReport(tuple(out))


@dataclasses.dataclass(frozen=True)
class OrderStructure:
    """The order induced by the sum, with orthosupplements, differences, meets and joins."""

    n: int
    down: tuple[int, ...]  # down[b]: mask of all a <= b
    up: tuple[int, ...]  # up[a]: mask of all b >= a
    supp: tuple[int, ...]
    minus_table: dict[tuple[int, int], int]  # (b, a) -> b (-) a, only for a <= b
    meet_table: tuple[tuple[int, ...], ...]  # UNDEF where no meet exists
    join_table: tuple[tuple[int, ...], ...]
    is_lattice: bool

    def leq(self, a: int, b: int) -> bool:
        return bool(self.down[b] >> a & 1)

    def minus(self, b: int, a: int) -> int:
        try:
            return self.minus_table[(b, a)]
        except KeyError:
            raise PreconditionError(f"{b} (-) {a} requires {a} <= {b}") from None


def derive_order(E: "EffectAlgebra") -> OrderStructure:
    n, t = E.n, E.table.rows
    down = [0] * n
    up = [0] * n
    minus: dict[tuple[int, int], int] = {}
    for a in range(n):
        for c in range(n):
            b = t[a][c]
            if b != UNDEF:
                down[b] |= 1 << a
                up[a] |= 1 << b
                minus[(b, a)] = c
    supp = tuple(t[a].index(E.one) for a in range(n))

    by_down = {m: b for b, m in enumerate(down)}
    by_up = {m: a for a, m in enumerate(up)}
    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]
    lattice = True
    for x in range(n):
        for y in range(x, n):
            m = by_down.get(down[x] & down[y], UNDEF)
            j = by_up.get(up[x] & up[y], UNDEF)
            meet[x][y] = meet[y][x] = m
            join[x][y] = join[y][x] = j
            if m == UNDEF or j == UNDEF:
                lattice = False
    return OrderStructure(
        n=n,
        down=tuple(down),
        up=tuple(up),
        supp=supp,
        minus_table=minus,
        meet_table=tuple(map(tuple, meet)),
        join_table=tuple(map(tuple, join)),
        is_lattice=lattice,
    )


class EffectAlgebra:
    """A validated finite effect algebra.  Immutable; derived structure is cached.

    By convention element 0 is the zero and element n-1 is the unit.
    """

    def __init__(self, labels: Sequence[str], table: PartialSumTable, *, check: bool = True):
        labels = tuple(str(s) for s in labels)
        if len(labels) != table.n:
            raise StructuralError("label count does not match table size")
        if any(not s for s in labels) or len(set(labels)) != len(labels):
            raise StructuralError("labels must be nonempty and unique")
        self.labels = labels
        self.table = table
        self.n = table.n
        self.zero = 0
        self.one = self.n - 1
        if check:
            report = validate(table, self.zero, self.one)
            if not report.ok:
                raise AxiomError(report)
        self.validated = True
        self.index = {s: i for i, s in enumerate(labels)}

    @classmethod
    def from_triples(cls, labels: Sequence[str], triples: Iterable[tuple[str, str, str]]) -> "EffectAlgebra":
        labels = list(labels)
        idx = {s: i for i, s in enumerate(labels)}
        try:
            tr = [(idx[x], idx[y], idx[z]) for x, y, z in triples]
        except KeyError as e:
            raise StructuralError(f"unknown element label {e.args[0]!r}") from None
        return cls(labels, PartialSumTable.from_triples(len(labels), tr))

    def __repr__(self):
        return f"EffectAlgebra(n={self.n}, labels={list(self.labels)})"

    def __len__(self):
        return self.n

    @property
    def carrier(self) -> list[ElementId]:
        return [ElementId(i, s) for i, s in enumerate(self.labels)]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def elem(self, x: int | str) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.n:
                raise StructuralError(f"element index {x} outside the carrier")
            return x
        try:
            return self.index[x]
        except KeyError:
            raise StructuralError(f"unknown element label {x!r}") from None

    def label(self, x: int) -> str:
        return self.labels[x]

    def labelset(self, mask_or_iter) -> list[str]:
        it = bits(mask_or_iter) if isinstance(mask_or_iter, int) else mask_or_iter
        return [self.labels[i] for i in it]

    # -- the sum and derived operations --------------------------------

    def plus(self, a: int, b: int) -> int | None:
        v = self.table.rows[a][b]
        return None if v == UNDEF else v

    def defined(self, a: int, b: int) -> bool:
        return self.table.rows[a][b] != UNDEF

    @cached_property
    def order(self) -> OrderStructure:
        return derive_order(self)

    @property
    def is_lattice(self) -> bool:
        return self.order.is_lattice

    def require_lattice(self, what: str = "operation") -> None:
        if not self.order.is_lattice:
            raise NotALatticeError(f"{what} needs a lattice effect algebra")

    def leq(self, a: int, b: int) -> bool:
        return bool(self.order.down[b] >> a & 1)

    def supp(self, a: int) -> int:
        return self.order.supp[a]

    def minus(self, b: int, a: int) -> int:
        return self.order.minus(b, a)

    def meet(self, a: int, b: int) -> int:
        m = self.order.meet_table[a][b]
        if m == UNDEF:
            raise NotALatticeError(f"no meet of {self.labels[a]} and {self.labels[b]}")
        return m

    def join(self, a: int, b: int) -> int:
        j = self.order.join_table[a][b]
        if j == UNDEF:
            raise NotALatticeError(f"no join of {self.labels[a]} and {self.labels[b]}")
        return j

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.zero
        for x in xs:
            acc = self.join(acc, x)
        return acc

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.one
        for x in xs:
            acc = self.meet(acc, x)
        return acc

    def oplus_all(self, xs: Iterable[int]) -> int | None:
        """Left-to-right sum of a finite system, None if it is not orthogonal."""
        acc = self.zero
        for x in xs:
            acc = self.table.rows[acc][x]
            if acc == UNDEF:
                return None
        return acc

    @cached_property
    def _multiples(self) -> tuple[tuple[int, ...], ...]:
        # _multiples[x] = (0, x, 2x, ..., (ord x) x); hard stop at n terms
        t = self.table.rows
        out = []
        for x in range(self.n):
            seq = [self.zero, x]
            if x != self.zero:
                while len(seq) <= self.n:
                    nxt = t[seq[-1]][x]
                    if nxt == UNDEF:
                        break
                    seq.append(nxt)
            out.append(tuple(seq))
        return tuple(out)

    def multiple(self, x: int, k: int) -> int | None:
        """k-fold sum ``kx``, None when undefined."""
        if x == self.zero:
            return self.zero
        seq = self._multiples[x]
        return seq[k] if 0 <= k < len(seq) else None

    def ord(self, x: int) -> float | int:
        if x == self.zero:
            return INFINITE
        k = len(self._multiples[x]) - 1
        return INFINITE if k > self.n else k

    def interval(self, lo: int, hi: int) -> int:
        """Mask of [lo, hi]; empty mask when lo is not below hi."""
        o = self.order
        return o.up[lo] & o.down[hi]


@dataclasses.dataclass(frozen=True)
class SubCheck:
    ok: bool
    reason: str = ""
    witness: tuple | None = None
    sublattice: bool | None = None  # None when E itself is not a lattice


def is_sub_effect_algebra(E: EffectAlgebra, Q: Iterable[int] | int) -> SubCheck:
    q = Q if isinstance(Q, int) else to_mask(Q)
    if not q >> E.one & 1:
        return SubCheck(False, "1 missing")
    t = E.table.rows
    for a in range(E.n):
        for b in range(E.n):
            c = t[a][b]
            if c == UNDEF:
                continue
            inside = (q >> a & 1) + (q >> b & 1) + (q >> c & 1)
            if inside == 2:
                return SubCheck(False, "not closed", (a, b, c))
    sub = None
    if E.is_lattice:
        sub = all(
            q >> E.order.meet_table[x][y] & 1 and q >> E.order.join_table[x][y] & 1
            for x in bits(q)
            for y in bits(q)
        )
    return SubCheck(True, "", None, sub)


def restrict(E: EffectAlgebra, Q: Iterable[int] | int) -> tuple[EffectAlgebra, list[int]]:
    """The sub-effect algebra on Q with the inherited sum, and its index map back into E."""
    q = Q if isinstance(Q, int) else to_mask(Q)
    chk = is_sub_effect_algebra(E, q)
    if not chk.ok:
        raise PreconditionError(f"not a sub-effect algebra: {chk.reason} {chk.witness}")
    members = list(bits(q))
    pos = {x: i for i, x in enumerate(members)}
    rows = []
    for x in members:
        row = []
        for y in members:
            z = E.table.rows[x][y]
            row.append(pos[z] if z != UNDEF and z in pos else UNDEF)
        rows.append(row)
    sub = EffectAlgebra([E.labels[x] for x in members], PartialSumTable(rows))
    return sub, members


def dual(E: EffectAlgebra) -> EffectAlgebra:
    """The order dual, with ``a (+)* b = (a' (+) b')'``.  Dual index i is E's index n-1-i."""
    n = E.n
    s = E.order.supp
    rows = [[UNDEF] * n for _ in range(n)]
    for i in range(n):
        a = n - 1 - i
        for j in range(n):
            b = n - 1 - j
            c = E.table.rows[s[a]][s[b]]
            if c != UNDEF:
                rows[i][j] = n - 1 - s[c]
    return EffectAlgebra([E.labels[n - 1 - i] for i in range(n)], PartialSumTable(rows))
