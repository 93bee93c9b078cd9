"""States as points of an exact rational polytope.

Variables are the values v_x, one per element.  The sum table gives the
equalities v_a + v_b = v_c; Gauss-Jordan elimination solves them for pivot
variables in terms of the remaining free ones.  Free variables are original
values, hence >= 0, so what is left is a bounded system ``G y <= h, y >= 0``
handed to the exact simplex.
"""

from __future__ import annotations

import collections
import dataclasses
import itertools
from fractions import Fraction
from typing import Mapping

from .caps import current as current_caps
from .core import EffectAlgebra, bits, is_sub_effect_algebra, restrict, to_mask
from .errors import CapExceeded, Falsification, PreconditionError
from .simplex import maximize, minimize, solve_square
from .structure import all_decompositions, atom_analysis, decompose

ZERO, ONE = Fraction(0), Fraction(1)

# Outcomes of the atom-wise smearing candidate in extend_state.
FAST_PATH_STATS: collections.Counter = collections.Counter()


@dataclasses.dataclass(frozen=True)
class State:
    values: tuple[Fraction, ...]  # indexed like the carrier

    def __getitem__(self, x: int) -> Fraction:
        return self.values[x]

    def as_dict(self, E: EffectAlgebra) -> dict[str, str]:
        return {E.labels[x]: str(v) for x, v in enumerate(self.values)}


@dataclasses.dataclass(frozen=True)
class StateCheck:
    ok: bool
    kind: str = ""  # "range", "unit" or "additivity"
    witness: tuple = ()


def as_state(E: EffectAlgebra, candidate) -> State:
    if isinstance(candidate, State):
        return candidate
    if isinstance(candidate, Mapping):
        vals = [None] * E.n
        for k, v in candidate.items():
            vals[E.elem(k)] = Fraction(v)
        if any(v is None for v in vals):
            missing = [E.labels[x] for x, v in enumerate(vals) if v is None]
            raise PreconditionError(f"candidate undefined on {missing}")
        return State(tuple(vals))
    vals = tuple(Fraction(v) for v in candidate)
    if len(vals) != E.n:
        raise PreconditionError("candidate must give one value per element")
    return State(vals)


def is_state(E: EffectAlgebra, candidate) -> StateCheck:
    w = as_state(E, candidate)
    for x, v in enumerate(w.values):
        if not ZERO <= v <= ONE:
            return StateCheck(False, "range", (x, v))
    if w[E.one] != ONE:
        return StateCheck(False, "unit", (E.one, w[E.one]))
    for (a, b), c in sorted(E.table.entries().items()):
        if w[a] + w[b] != w[c]:
            return StateCheck(False, "additivity", (a, b, c))
    return StateCheck(True)


# -- the polytope ---------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Affine:
    const: Fraction
    coef: tuple[Fraction, ...]  # over the free variables

    def at(self, y) -> Fraction:
        return self.const + sum((c * v for c, v in zip(self.coef, y)), ZERO)

    @property
    def is_constant(self) -> bool:
        return not any(self.coef)


@dataclasses.dataclass(frozen=True)
class StatePolytope:
    n: int
    equalities: tuple[tuple[tuple[tuple[int, Fraction], ...], Fraction], ...]  # (sparse row, rhs)
    consistent: bool
    free: tuple[int, ...]  # free variables (element indices)
    exprs: tuple[Affine, ...] | None  # every v_x as an affine map of the free variables
    G: tuple[tuple[Fraction, ...], ...]  # G y <= h, y >= 0
    h: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.free)

    def point(self, y) -> State:
        return State(tuple(e.at(y) for e in self.exprs))


def _equalities(E: EffectAlgebra, pins: Mapping[int, Fraction]):
    rows = {}

    def add(row: dict[int, Fraction], rhs: Fraction):
        row = {k: v for k, v in row.items() if v != 0}
        key = (tuple(sorted(row.items())), Fraction(rhs))
        rows.setdefault(key, None)

    add({E.zero: ONE}, ZERO)
    add({E.one: ONE}, ONE)
    for (a, b), c in sorted(E.table.entries().items()):
        if E.zero in (a, b):
            continue
        row = collections.defaultdict(Fraction)
        row[a] += 1
        row[b] += 1
        row[c] -= 1
        add(row, ZERO)
    for x, v in sorted(pins.items()):
        add({x: ONE}, Fraction(v))
    return tuple(rows)


def build_polytope(E: EffectAlgebra, pins: Mapping[int, Fraction] | None = None) -> StatePolytope:
    n = E.n
    eqs = _equalities(E, pins or {})
    # incremental sparse Gauss-Jordan; each reduced row has its pivot at its
    # highest column, so the free variables end up low in the order (typically atoms)
    basis: dict[int, dict[int, Fraction]] = {}  # pivot column -> row (rhs under key n)
    consistent = True
    for row, rhs in eqs:
        r = dict(row)
        r[n] = rhs
        for col in sorted((c for c in r if c in basis), reverse=True):
            f = r.get(col)
            if f:
                for k, v in basis[col].items():
                    nv = r.get(k, ZERO) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        cols = [c for c in r if c != n]
        if not cols:
            consistent = consistent and not r.get(n)
            continue
        col = max(cols)
        p = r[col]
        r = {k: v / p for k, v in r.items()}
        for other in basis.values():
            f = other.get(col)
            if f:
                for k, v in r.items():
                    nv = other.get(k, ZERO) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        basis[col] = r
    free = tuple(x for x in range(n) if x not in basis)
    if not consistent:
        return StatePolytope(n, eqs, False, free, None, (), ())
    fpos = {f: i for i, f in enumerate(free)}
    exprs = []
    for x in range(n):
        if x in fpos:
            coef = [ZERO] * len(free)
            coef[fpos[x]] = ONE
            exprs.append(Affine(ZERO, tuple(coef)))
        else:
            row = basis[x]
            exprs.append(Affine(row.get(n, ZERO), tuple(-row.get(f, ZERO) for f in free)))
    G, h = [], []
    seen = set()
    ok = True

    def ineq(g, rhs):
        nonlocal ok
        if not any(g):
            ok = ok and rhs >= 0
            return
        if (g, rhs) not in seen:
            seen.add((g, rhs))
            G.append(g)
            h.append(rhs)

    for x in range(n):
        e = exprs[x]
        ineq(e.coef, ONE - e.const)  # v_x <= 1
        if x not in fpos:
            ineq(tuple(-c for c in e.coef), e.const)  # v_x >= 0
    if not ok:
        return StatePolytope(n, eqs, False, free, tuple(exprs), (), ())
    return StatePolytope(n, eqs, True, free, tuple(exprs), tuple(G), tuple(h))


# -- feasibility and the lexicographically least state ------------------


@dataclasses.dataclass(frozen=True)
class Unsat:
    reason: str
    infeasibility: Fraction | None = None


def _lexmin(P: StatePolytope) -> State | Unsat:
    if not P.consistent:
        return Unsat("equality system or constant bounds inconsistent")
    d = P.dim
    G, h = list(P.G), list(P.h)
    Aeq, beq = [], []
    if d == 0:
        return P.point(())
    res = minimize([ZERO] * d, G, h)
    if res.status != "optimal":
        return Unsat("bounds infeasible", res.infeasibility)
    y = res.x
    span: dict[int, list[Fraction]] = {}  # reduced pinned directions, keyed by pivot
    for e in P.exprs:
        v = list(e.coef)
        for piv, row in span.items():
            if v[piv]:
                f = v[piv]
                v = [a - f * b for a, b in zip(v, row)]
        if not any(v):
            continue  # constant on the region cut out so far
        res = minimize(e.coef, G, h, Aeq, beq)
        if res.status != "optimal":  # cannot happen: the region is nonempty and bounded
            raise Falsification(f"state polytope LP returned {res.status}")
        Aeq.append(e.coef)
        beq.append(res.value)
        y = res.x
        piv = next(i for i, c in enumerate(v) if c)
        row = [c / v[piv] for c in v]
        for k, other in span.items():
            if other[piv]:
                f = other[piv]
                span[k] = [a - f * b for a, b in zip(other, row)]
        span[piv] = row
    return P.point(y)


def find_state(E: EffectAlgebra) -> State | Unsat:
    """Lexicographically least state in the element order, or Unsat."""
    out = _lexmin(build_polytope(E))
    if isinstance(out, State):
        _check_returned(E, out)
    return out


def _check_returned(E: EffectAlgebra, w: State) -> None:
    chk = is_state(E, w)
    if not chk.ok:
        raise Falsification(f"solver returned a non-state ({chk.kind} at {chk.witness})")
    for x in range(E.n):
        if w[E.supp(x)] != ONE - w[x]:
            raise Falsification(f"w(x') != 1 - w(x) at {E.labels[x]}")
    o = E.order
    for a in range(E.n):
        for b in bits(o.up[a]):
            if w[a] > w[b]:
                raise Falsification(f"state not monotone at {E.labels[a]} <= {E.labels[b]}")


# -- vertices ------------------------------------------------------------


def _irredundant(G, h, d):
    """Drop inequalities implied by the rest (including y >= 0)."""
    rows = [(tuple(g), r) for g, r in zip(G, h)] + [
        (tuple(-ONE if j == i else ZERO for j in range(d)), ZERO) for i in range(d)
    ]
    kept = list(range(len(rows)))
    for k in range(len(rows)):
        others = [i for i in kept if i != k]
        # y is left free here so that the sign rows can be tested like any other
        A = [rows[i][0] for i in others]
        b = [rows[i][1] for i in others]
        res = _max_free(rows[k][0], A, b, d)
        if res is not None and res <= rows[k][1]:
            kept = others
    return [rows[i] for i in kept]


def _max_free(c, A, b, d):
    # maximise c.y over {A y <= b} with y free, as y = y+ - y-
    A2 = [list(a) + [-v for v in a] for a in A]
    c2 = list(c) + [-v for v in c]
    res = maximize(c2, A2, b)
    if res.status == "optimal":
        return res.value
    if res.status == "infeasible":
        raise Falsification("state polytope became empty during reduction")
    return None


def _vertices(P: StatePolytope) -> list[State]:
    d = P.dim
    if d == 0:
        return [P.point(())]
    rows = _irredundant(P.G, P.h, d)
    pts = set()
    for combo in itertools.combinations(range(len(rows)), d):
        y = solve_square([rows[i][0] for i in combo], [rows[i][1] for i in combo])
        if y is None:
            continue
        if all(sum((g * v for g, v in zip(rg, y)), ZERO) <= rh for rg, rh in rows):
            pts.add(y)
    return sorted((P.point(y) for y in pts), key=lambda s: s.values)


def extreme_states(E: EffectAlgebra) -> list[State]:
    """All vertices of the state polytope, sorted lexicographically."""
    cap = current_caps().states
    if E.n > cap:
        raise CapExceeded("extreme states", E.n, cap)
    P = build_polytope(E)
    if not P.consistent or minimize([ZERO] * P.dim, P.G, P.h).status != "optimal":
        return []
    out = _vertices(P)
    for w in out:
        _check_returned(E, w)
    return out


# -- extension -------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ExtensionProblem:
    sub: int  # mask of Q
    given: dict[int, Fraction]
    feasible: bool
    witness: State | None
    certificate: Unsat | None
    via: str  # "fast-path" or "solver"


def smearing_candidate(E: EffectAlgebra, given: Mapping[int, Fraction]) -> State | None:
    """w(x) = sum over the decomposition terms k a of (k / n_a) w(n_a a); None if not applicable."""
    at = atom_analysis(E)
    if not (E.is_lattice and at.is_atomic and at.is_archimedean):
        return None
    vals = [ZERO] * E.n
    decs = all_decompositions(E)
    for x in range(E.n):
        if x == E.zero:
            continue
        total = ZERO
        for a, k in decs[x].terms:
            top = E.multiple(a, at.ord[a])
            if top not in given:
                return None
            total += Fraction(k, at.ord[a]) * given[top]
        vals[x] = total
    return State(tuple(vals))


def extend_state(E: EffectAlgebra, Q, given) -> ExtensionProblem:
    q = Q if isinstance(Q, int) else to_mask(Q)
    chk = is_sub_effect_algebra(E, q)
    if not chk.ok:
        raise PreconditionError(f"Q is not a sub-effect algebra ({chk.reason})")
    if isinstance(given, State):
        given = {x: given[x] for x in bits(q)}
    given = {E.elem(k): Fraction(v) for k, v in given.items()}
    if set(given) != set(bits(q)):
        raise PreconditionError("the given state must be defined exactly on Q")
    S, members = restrict(E, q)
    if not is_state(S, [given[x] for x in members]).ok:
        raise PreconditionError("the given map is not a state on Q")

    cand = smearing_candidate(E, given)
    if cand is None:
        FAST_PATH_STATS["inapplicable"] += 1
    elif is_state(E, cand).ok and all(cand[x] == v for x, v in given.items()):
        FAST_PATH_STATS["hit"] += 1
        _check_returned(E, cand)
        return ExtensionProblem(q, given, True, cand, None, "fast-path")
    else:
        FAST_PATH_STATS["miss"] += 1
    out = _lexmin(build_polytope(E, given))
    if isinstance(out, Unsat):
        return ExtensionProblem(q, given, False, None, out, "solver")
    _check_returned(E, out)
    return ExtensionProblem(q, given, True, out, None, "solver")


# -- E1 ------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class E1Result:
    mask: int
    finite: int
    cofinite: int


def e1_subalgebra(E: EffectAlgebra) -> E1Result:
    """Finite elements (0 and finite sums of atoms) together with their supplements."""
    at = atom_analysis(E)
    if not (E.is_lattice and at.is_atomic and at.is_archimedean):
        raise PreconditionError("E1 needs an Archimedean atomic lattice effect algebra")
    finite = 1 << E.zero
    for x in range(E.n):
        if x != E.zero and decompose(E, x).terms:
            finite |= 1 << x
    cofinite = to_mask(E.supp(x) for x in bits(finite))
    mask = finite | cofinite
    chk = is_sub_effect_algebra(E, mask)
    if not chk.ok or not chk.sublattice:
        raise Falsification(f"E1 is not a sub-lattice effect algebra ({chk.reason})")
    return E1Result(mask, finite, cofinite)


def state_from_sub(E: EffectAlgebra, members: list[int], w: State) -> dict[int, Fraction]:
    """Values of a state of the restricted algebra, keyed by E's indices."""
    return {x: w[i] for i, x in enumerate(members)}

