"""Theorem suites run by ``check-all``.

Each suite either passes, fails (a falsification or a bug, never suppressed),
or is skipped because a brute-force cap was hit or its hypotheses do not hold
(a non-lattice instance, say).
"""

from __future__ import annotations

import dataclasses
import time
from typing import Callable

from .caps import current as current_caps
from .completion import closedness, mc_check, s_compact_matches_completion
from .core import INFINITE, EffectAlgebra, bits, restrict, validate
from .errors import CapExceeded, EAError, Falsification, PreconditionError
from .states import e1_subalgebra, extend_state, extreme_states, find_state, is_state, state_from_sub
from .structure import (
    all_decompositions,
    almost_orthogonality,
    atom_analysis,
    blocks,
    compat_masks,
    is_compact_element,
    is_s_compact,
    sharp_elements,
    sharp_mask,
)
from .topology import (
    ao_partition,
    blockfinite_cover,
    clopen_check,
    phi_separates,
    separate,
    subspace_topology_check,
    topologies_agree,
)

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclasses.dataclass(frozen=True)
class SuiteResult:
    name: str
    status: str
    checked: int = 0
    detail: str = ""
    seconds: float = 0.0

    @property
    def label(self) -> str:
        if self.status == SKIPPED and self.detail.startswith("cap"):
            return "SKIPPED(cap)"
        return self.status


def _fail(msg: str) -> None:
    raise Falsification(msg)


# -- suites: each returns the number of individual checks performed ----------


def suite_axioms(E: EffectAlgebra) -> int:
    rep = validate(E.table, E.zero, E.one)
    if not rep.ok:
        _fail(f"axiom {rep.violations[0].axiom} fails at {rep.violations[0].witness}")
    return 1


def suite_decomposition(E: EffectAlgebra) -> int:
    decs = all_decompositions(E)  # each one verified on construction
    smask = sharp_mask(E)
    at = atom_analysis(E)
    for x, d in decs.items():
        by_terms = all(k == at.ord[a] for a, k in d.terms)
        if by_terms != bool(smask >> x & 1):
            _fail(f"sharpness criterion disagrees at {E.labels[x]}")
    return len(decs)


def _levels(E: EffectAlgebra, x: int) -> range:
    o = E.ord(x)
    return range(1, (E.n if o == INFINITE else o) + 1)


def suite_orthogonality_lift(E: EffectAlgebra) -> int:
    """x ^ y = 0 and x <= y'  iff  kx ^ ly = 0 and kx <= (ly)', for every legal k, l."""
    E.require_lattice("orthogonality lift")
    n = 0
    for x in range(E.n):
        for y in range(E.n):
            lhs = E.meet(x, y) == E.zero and E.leq(x, E.supp(y))
            for k in _levels(E, x):
                kx = E.multiple(x, k)
                for l in _levels(E, y):
                    ly = E.multiple(y, l)
                    rhs = E.meet(kx, ly) == E.zero and E.leq(kx, E.supp(ly))
                    n += 1
                    if lhs != rhs:
                        _fail(f"lift fails at x={E.labels[x]}, y={E.labels[y]}, k={k}, l={l}")
    return n


def suite_sharp(E: EffectAlgebra) -> int:
    return len(sharp_elements(E))


def _brute_blocks(E: EffectAlgebra) -> set[int]:
    compat = compat_masks(E)
    cliques = []
    for m in range(1, 1 << E.n):
        if all(m & ~compat[x] == 0 for x in bits(m)):
            cliques.append(m)
    cl = set(cliques)
    return {m for m in cl if not any(m | (1 << x) in cl for x in range(E.n) if not m >> x & 1)}


def suite_blocks(E: EffectAlgebra) -> int:
    bd = blocks(E)
    if E.n <= current_caps().topology and set(bd.blocks) != _brute_blocks(E):
        _fail("clique enumeration disagrees with brute-force maximal compatible sets")
    return len(bd.blocks)


def suite_almost_orthogonality(E: EffectAlgebra) -> int:
    rep = almost_orthogonality(E)
    return len(rep.witnesses)


def suite_partition_clopen(E: EffectAlgebra) -> int:
    at = atom_analysis(E)
    pairs = [(a, l) for a in at.atoms for l in range(1, at.ord[a] + 1)]
    n = 0
    for a, l in pairs:
        ao_partition(E, a, l)
        n += 1
    for b, k in pairs:
        for a, l in pairs:
            res = clopen_check(E, b, k, a, l)
            if not res.clopen:
                _fail("interval not clopen")
            n += 1
    return n


def suite_separation(E: EffectAlgebra) -> int:
    n = 0
    for x in range(E.n):
        for y in range(E.n):
            if x != y:
                separate(E, x, y)
                n += 1
    return n


def suite_block_cover(E: EffectAlgebra) -> int:
    n = 0
    for x in range(E.n):
        for y in range(E.n):
            if not E.leq(x, y):
                blockfinite_cover(E, x, y)
                n += 1
    return n


def suite_phi_separation(E: EffectAlgebra) -> int:
    pair = phi_separates(E)
    if pair is not None:
        _fail(f"Phi does not separate {E.labels[pair[0]]} and {E.labels[pair[1]]}")
    return E.n * (E.n - 1) // 2


def suite_topologies(E: EffectAlgebra) -> int:
    ag = topologies_agree(E)
    if not ag.agree:
        _fail(f"topologies differ: {ag}")
    return 1


def suite_subspace(E: EffectAlgebra) -> int:
    subs = list(blocks(E).blocks) + [sharp_mask(E), E.full]
    for F in subs:
        if not subspace_topology_check(E, F):
            _fail(f"subspace topology differs on {E.labelset(bits(F))}")
    return len(subs)


def suite_compactness(E: EffectAlgebra) -> int:
    E.require_lattice("compactness")
    compact = [is_compact_element(E, u) for u in range(E.n)]
    if not all(compact):
        _fail(f"{E.labels[compact.index(False)]} is not compact")
    for u in range(E.n):
        if not is_s_compact(E, u):
            _fail(f"{E.labels[u]} is not s-compact")
    n = 2 * E.n
    # closure of compact elements under orthogonal sums
    for c in range(E.n):
        for d in range(E.n):
            if compact[c] and compact[d] and E.leq(c, E.supp(d)):
                if not compact[E.plus(c, d)]:
                    _fail(f"{E.labels[c]} (+) {E.labels[d]} is not compact")
                n += 1
    return n


def suite_completion(E: EffectAlgebra) -> int:
    if not mc_check(E):
        _fail("completion differs from the source or moves atoms")
    bd = blocks(E)
    subs = list(bd.blocks) + [sharp_mask(E), bd.b_e, bd.c_e]
    for D in subs:
        rep = closedness(E, D)
        if not rep.agree:
            _fail(f"closedness conditions disagree on {E.labelset(bits(D))}: {rep.conditions}")
        if not all(rep.conditions.values()):
            _fail(f"{E.labelset(bits(D))} is not a complete sublattice")
    return 1 + len(subs)


def suite_s_compact_completion(E: EffectAlgebra) -> int:
    if not s_compact_matches_completion(E):
        _fail("s-compactness in E differs from compactness in the completion")
    return E.n


def suite_states(E: EffectAlgebra) -> int:
    w = find_state(E)
    n = 0
    if hasattr(w, "values"):
        if not is_state(E, w).ok:
            _fail("find_state returned a non-state")
        n += 1
    if E.n > current_caps().states:
        return n  # vertex enumeration is capped; the lexicographic witness is still checked
    for v in extreme_states(E):
        if not is_state(E, v).ok:
            _fail("extreme_states returned a non-state")
        n += 1
    return n


def suite_state_smearing(E: EffectAlgebra) -> int:
    e1 = e1_subalgebra(E)
    if e1.mask != E.full:
        _fail("E1 differs from E on a finite instance")
    S = sharp_mask(E)
    sub, members = restrict(E, S)
    n = 0
    for w in extreme_states(sub):
        prob = extend_state(E, S, state_from_sub(E, members, w))
        if not prob.feasible:
            _fail(f"extreme state {w.as_dict(sub)} of S(E) does not extend")
        n += 1
    return n


SUITES: list[tuple[str, Callable[[EffectAlgebra], int]]] = [
    ("axioms", suite_axioms),
    ("decomposition", suite_decomposition),
    ("orthogonality-lift", suite_orthogonality_lift),
    ("sharp-elements", suite_sharp),
    ("blocks", suite_blocks),
    ("almost-orthogonality", suite_almost_orthogonality),
    ("partition-clopen", suite_partition_clopen),
    ("separation", suite_separation),
    ("block-cover", suite_block_cover),
    ("phi-separation", suite_phi_separation),
    ("topologies", suite_topologies),
    ("subspace-topology", suite_subspace),
    ("compactness", suite_compactness),
    ("completion", suite_completion),
    ("s-compact-completion", suite_s_compact_completion),
    ("states", suite_states),
    ("state-smearing", suite_state_smearing),
]


def run_suite(name: str, fn, E: EffectAlgebra) -> SuiteResult:
    t = time.perf_counter()
    try:
        n = fn(E)
        status, detail = PASS, ""
    except CapExceeded as e:
        n, status, detail = 0, SKIPPED, f"cap: {e}"
    except Falsification as e:
        n, status, detail = 0, FAIL, str(e)
    except PreconditionError as e:
        n, status, detail = 0, SKIPPED, f"hypothesis: {e}"
    except EAError as e:
        if not E.is_lattice:
            n, status, detail = 0, SKIPPED, f"hypothesis: {e}"
        else:
            n, status, detail = 0, FAIL, f"{type(e).__name__}: {e}"
    return SuiteResult(name, status, n, detail, time.perf_counter() - t)


def check_all(E: EffectAlgebra, only: list[str] | None = None) -> list[SuiteResult]:
    return [run_suite(name, fn, E) for name, fn in SUITES if only is None or name in only]
