"""Symbolic infinite families and their property verdicts.

Grammar (whitespace is ignored)::

    family  := "hsum" "(" term ("," term)* ")" | summand
    term    := summand ["*" count]
    summand := "chain:" INT | "chain:n>=" INT | "boolean:" (INT | "inf")
    count   := INT | "inf"

``chain:n`` is the n-element chain, ``boolean:k`` the Boolean algebra with k
atoms (``inf``: a complete atomic Boolean algebra with countably many atoms),
``chain:n>=3`` one chain of every length from 3 on.  Examples:
``hsum(chain:3 * inf)``, ``hsum(boolean:inf * 2)``, ``chain:7``.

Verdicts come from a forward-chaining rule base.  Base facts are computed
directly from the description; every other flag is set only by a rule whose
premises are already known, and flags no rule reaches stay UNKNOWN.
"""

from __future__ import annotations

import dataclasses
import enum
import re
import warnings

from .caps import current as current_caps
from .core import EffectAlgebra
from .errors import CapExceeded, Falsification, PreconditionError, StructuralError
from .generators import boolean, chain, horizontal_sum
from .structure import ao_witness_set, atom_analysis

INF = "inf"


class FamilySyntaxError(StructuralError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text, self.pos = text, pos
        super().__init__(f"column {pos + 1}: {msg}\n  {text}\n  {' ' * pos}^")


@dataclasses.dataclass(frozen=True)
class Summand:
    kind: str  # "chain" or "boolean"
    size: int | str  # chain length, Boolean atom count, INF, or "n>=K" for the chain schema
    count: int | str  # multiplicity, or INF

    @property
    def is_schema(self) -> bool:
        return isinstance(self.size, str) and self.size.startswith("n>=")

    @property
    def atoms(self) -> int | str:
        """Atoms in one copy."""
        if self.kind == "chain":
            return 1
        return self.size

    @property
    def degenerate(self) -> bool:
        # the two-element chain (or a one-atom Boolean algebra) adds nothing to a horizontal sum
        return (self.kind == "chain" and self.size == 2) or (self.kind == "boolean" and self.size == 1)


class Kind(enum.Enum):
    HORIZONTAL_SUM_OF_CHAINS = "horizontal sum of chains"
    HORIZONTAL_SUM_OF_BOOLEANS = "horizontal sum of Boolean algebras"
    MV_CHAIN = "MV chain"


@dataclasses.dataclass(frozen=True)
class SymbolicFamily:
    kind: Kind
    summands: tuple[Summand, ...]
    text: str = ""

    @property
    def summand_count(self) -> int | str:
        total = 0
        for s in self.summands:
            if s.degenerate:
                continue
            if s.count == INF or s.is_schema:
                return INF
            total += s.count
        return total

    def spec(self) -> str:
        def one(s: Summand) -> str:
            body = f"{s.kind}:{s.size}"
            return body if s.count == 1 or s.is_schema else f"{body} * {s.count}"

        if self.kind is Kind.MV_CHAIN:
            return one(self.summands[0])
        return "hsum(" + ", ".join(one(s) for s in self.summands) + ")"


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<word>[A-Za-z]+)|(?P<op>>=|[():,*]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FamilySyntaxError(text, start, f"unexpected character {text[start]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None, what=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            got = tok[1] or "end of input"
            raise FamilySyntaxError(self.text, tok[2], f"expected {what or value or kind}, got {got!r}")
        self.i += 1
        return tok

    def family(self) -> SymbolicFamily:
        tok = self.peek()
        if tok == ("word", "hsum", tok[2]):
            self.take()
            self.take("op", "(")
            terms = [self.term()]
            while self.peek()[1] == ",":
                self.take()
                terms.append(self.term())
            self.take("op", ")")
            hsum = True
        else:
            terms = [self.summand(1)]
            hsum = False
        self.take("end", what="end of input")
        k = terms[0].kind
        if any(t.kind != k for t in terms):
            other = "boolean" if k == "chain" else "chain"
            raise FamilySyntaxError(
                self.text, self.text.find(other), "mixing chains and Boolean algebras is not supported"
            )
        if not hsum and k == "chain" and not terms[0].is_schema:
            kind = Kind.MV_CHAIN
        elif k == "chain":
            kind = Kind.HORIZONTAL_SUM_OF_CHAINS
        else:
            kind = Kind.HORIZONTAL_SUM_OF_BOOLEANS
        return SymbolicFamily(kind, tuple(terms), self.text)

    def term(self) -> Summand:
        s = self.summand(1)
        if self.peek()[1] == "*":
            star = self.take()
            if s.is_schema:
                raise FamilySyntaxError(self.text, star[2], "the chain schema already has one summand per length")
            s = dataclasses.replace(s, count=self.count())
        return s

    def count(self) -> int | str:
        tok = self.peek()
        if tok[0] == "word" and tok[1] == INF:
            self.take()
            return INF
        n = int(self.take("num", what="a count or 'inf'")[1])
        if n < 1:
            raise FamilySyntaxError(self.text, tok[2], "count must be at least 1")
        return n

    def summand(self, count) -> Summand:
        tok = self.take("word", what="'chain' or 'boolean'")
        if tok[1] not in ("chain", "boolean"):
            raise FamilySyntaxError(self.text, tok[2], f"unknown summand kind {tok[1]!r}")
        self.take("op", ":")
        nxt = self.peek()
        if tok[1] == "chain":
            if nxt[0] == "word" and nxt[1] == "n":
                self.take()
                self.take("op", ">=")
                lo = self.take("num", what="a length")
                if int(lo[1]) < 3:
                    raise FamilySyntaxError(self.text, lo[2], "chain schema starts at length 3 or more")
                return Summand("chain", f"n>={int(lo[1])}", INF)
            if nxt[1] == INF:
                raise FamilySyntaxError(self.text, nxt[2], "an infinite chain is not Archimedean atomic; use a finite length")
            n = self.take("num", what="a chain length")
            if int(n[1]) < 2:
                raise FamilySyntaxError(self.text, n[2], "chain length must be at least 2")
            return Summand("chain", int(n[1]), count)
        if nxt[0] == "word" and nxt[1] == INF:
            self.take()
            return Summand("boolean", INF, count)
        k = self.take("num", what="an atom count or 'inf'")
        if int(k[1]) < 1:
            raise FamilySyntaxError(self.text, k[2], "a Boolean summand needs at least one atom")
        return Summand("boolean", int(k[1]), count)


def parse_family(text: str) -> SymbolicFamily:
    return _Parser(text).family()


# -- verdicts ---------------------------------------------------------------

TRUE, FALSE, UNKNOWN = "TRUE", "FALSE", "UNKNOWN"

PROPERTIES = (
    "atomic",
    "archimedean",
    "complete",
    "block_finite",
    "mv",
    "almost_orthogonal",
    "tau_i_hausdorff",
    "tau_i_compact",
    "compactly_generated",
    "o_continuous",
    "tau_i_equals_tau_o",
    "tau_equalities",  # tau_i = tau_o = tau_Phi
)

# The rule base.  Keys are the justifications attached to flags.
THEOREM_MAP = {
    "direct": "computed from the family description",
    "mv-archimedean-atomic": (
        "an Archimedean atomic MV-effect algebra has a Hausdorff interval topology "
        "and tau_i = tau_o = tau_Phi"
    ),
    "compactly-generated-o-continuous": "a compactly generated lattice effect algebra is (o)-continuous",
    "ao-hausdorff": "an almost orthogonal Archimedean atomic lattice effect algebra has a Hausdorff interval topology",
    "ao-compactly-generated": (
        "an almost orthogonal Archimedean atomic lattice effect algebra is compactly generated, "
        "hence (o)-continuous"
    ),
    "ao-topologies-coincide": "an almost orthogonal Archimedean atomic lattice effect algebra has tau_i = tau_o = tau_Phi",
    "block-finite-hausdorff": "an Archimedean atomic block-finite lattice effect algebra has tau_i = tau_o Hausdorff",
    "block-finite-complete-equivalences": (
        "for a block-finite complete atomic lattice effect algebra: almost orthogonal iff compactly "
        "generated iff (o)-continuous iff tau_i = tau_o = tau_Phi"
    ),
    "archimedean-atomic-characterisation": (
        "for an Archimedean atomic lattice effect algebra: tau_i = tau_o = tau_Phi iff "
        "(o)-continuous with tau_i Hausdorff iff almost orthogonal"
    ),
    "complete-iff-compact": "a bounded lattice is complete iff its interval topology is compact",
}


@dataclasses.dataclass(frozen=True)
class Flag:
    value: str
    justification: str
    premises: tuple[tuple[str, str], ...] = ()
    note: str = ""


@dataclasses.dataclass
class FamilyVerdict:
    family: SymbolicFamily
    flags: dict[str, Flag]

    def value(self, prop: str) -> str:
        f = self.flags.get(prop)
        return f.value if f else UNKNOWN

    def table(self) -> dict[str, str]:
        return {p: self.value(p) for p in PROPERTIES}


def _atoms_total(summands) -> int | str:
    total = 0
    for s in summands:
        a = s.atoms
        if s.count == INF or a == INF:
            return INF
        total += a * s.count
    return total


def _ao_from_description(f: SymbolicFamily) -> tuple[str, str]:
    # For an atom a of one summand, every atom of another summand lies outside
    # a' (the summands meet only in 0 and 1); inside an MV summand at most a
    # itself does.  So A_a is infinite iff the other summands carry infinitely
    # many atoms.
    live = [s for s in f.summands if not s.degenerate]
    for i, s in enumerate(live):
        rest = list(live[:i]) + list(live[i + 1 :])
        if s.count == INF or s.is_schema:
            rest.append(s)  # the other copies of the same summand
        elif s.count > 1:
            rest.append(dataclasses.replace(s, count=s.count - 1))
        if rest and _atoms_total(rest) == INF:
            return FALSE, f"an atom of {s.kind}:{s.size} sees infinitely many non-orthogonal atoms"
    return TRUE, "every atom has finitely many non-orthogonal atoms"


def _base_facts(f: SymbolicFamily) -> dict[str, Flag]:
    live = [s for s in f.summands if not s.degenerate]
    facts = {}

    def put(p, v, note):
        facts[p] = Flag(v, "direct", (), note)

    put("atomic", TRUE, "every summand is atomic and the sum only glues 0 and 1")
    put("archimedean", TRUE, "chain lengths are finite and Boolean elements have order 1")
    put("complete", TRUE, "finite chains and complete Boolean algebras glued at 0 and 1 stay complete")
    n = f.summand_count
    put("block_finite", TRUE if n != INF else FALSE, f"the blocks are the {n} summands")
    put("mv", TRUE if n in (0, 1) else FALSE, "single block iff at most one nontrivial summand")
    put("almost_orthogonal", *_ao_from_description(f))
    if all(s.kind == "chain" for s in live):
        put(
            "compactly_generated",
            TRUE,
            "every element is k a inside a finite chain, and such elements are compact",
        )
    return facts


def _rules():
    """(justification, premises, conclusion).

    Premises are (property, required value) pairs, '*' accepting any known
    value; a conclusion maps the premise values to new flags.
    """
    T, F = TRUE, FALSE
    aa = (("archimedean", T), ("atomic", T))
    ao_t = (("almost_orthogonal", T),) + aa
    ao_f = (("almost_orthogonal", F),) + aa
    bfc = (("block_finite", T), ("complete", T), ("atomic", T), ("almost_orthogonal", "*"))
    charac = "archimedean-atomic-characterisation"
    return [
        (
            "mv-archimedean-atomic",
            (("mv", T),) + aa,
            lambda v: {"tau_i_hausdorff": T, "tau_i_equals_tau_o": T, "tau_equalities": T},
        ),
        ("compactly-generated-o-continuous", (("compactly_generated", T),), lambda v: {"o_continuous": T}),
        ("ao-hausdorff", ao_t, lambda v: {"tau_i_hausdorff": T}),
        ("ao-compactly-generated", ao_t, lambda v: {"compactly_generated": T, "o_continuous": T}),
        ("ao-topologies-coincide", ao_t, lambda v: {"tau_equalities": T, "tau_i_equals_tau_o": T}),
        ("block-finite-hausdorff", (("block_finite", T),) + aa, lambda v: {"tau_i_hausdorff": T, "tau_i_equals_tau_o": T}),
        (
            "block-finite-complete-equivalences",
            bfc,
            lambda v: {p: v["almost_orthogonal"] for p in ("compactly_generated", "o_continuous", "tau_equalities")},
        ),
        (charac, ao_t, lambda v: {"tau_equalities": T, "o_continuous": T, "tau_i_hausdorff": T}),
        (charac, ao_f, lambda v: {"tau_equalities": F}),
        (charac, ao_f + (("o_continuous", T),), lambda v: {"tau_i_hausdorff": F}),
        (charac, ao_f + (("tau_i_hausdorff", T),), lambda v: {"o_continuous": F}),
        ("complete-iff-compact", (("complete", "*"),), lambda v: {"tau_i_compact": v["complete"]}),
    ]


def family_analyze(f: SymbolicFamily | str) -> FamilyVerdict:
    if isinstance(f, str):
        f = parse_family(f)
    flags = _base_facts(f)
    changed = True
    while changed:
        changed = False
        for name, premises, conclude in _rules():
            vals = {p: fl.value for p, fl in flags.items()}
            if not all(p in vals and (req == "*" or vals[p] == req) for p, req in premises):
                continue
            used = tuple((p, vals[p]) for p, _ in premises)
            for prop, value in conclude(vals).items():
                if prop in flags:
                    if flags[prop].value != value:
                        raise Falsification(
                            f"rule {name} concludes {prop}={value} against {flags[prop].value} "
                            f"({flags[prop].justification})"
                        )
                    continue
                flags[prop] = Flag(value, name, used)
                changed = True
    return FamilyVerdict(f, {p: flags[p] for p in PROPERTIES if p in flags})


# A documented verdict row for the standard MV-algebra on the real unit
# interval.  It is not atomic, so it sits outside the symbolic kinds above and
# the rule base does not apply; the values are recorded as known facts.
REAL_UNIT_INTERVAL = {
    "atomic": FALSE,
    "archimedean": TRUE,
    "complete": TRUE,
    "mv": TRUE,
    "o_continuous": TRUE,
    "tau_i_hausdorff": TRUE,
    "tau_i_equals_tau_o": TRUE,
}


# -- truncation ------------------------------------------------------------


def family_truncate(f: SymbolicFamily | str, k: int | None = None, atoms: int = 2) -> EffectAlgebra:
    """Finite instance: the first k summands, infinite Boolean summands cut to ``atoms`` atoms."""
    if isinstance(f, str):
        f = parse_family(f)
    pieces = []
    for s in f.summands:
        if s.is_schema:
            lo = int(s.size[3:])
            if k is None:
                raise PreconditionError("an infinite family needs a summand bound k")
            pieces += [chain(lo + i) for i in range(k)]
            continue
        reps = s.count
        if reps == INF:
            if k is None:
                raise PreconditionError("an infinite family needs a summand bound k")
            reps = k
        for _ in range(reps):
            if s.kind == "chain":
                pieces.append(("chain", s.size))
            else:
                pieces.append(("boolean", atoms if s.size == INF else s.size))
    if k is not None:
        pieces = pieces[:k]
    size = 2 + sum(
        (p.n - 2) if isinstance(p, EffectAlgebra) else (p[1] - 2 if p[0] == "chain" else (1 << p[1]) - 2)
        for p in pieces
    )
    cap = current_caps().truncate
    if size > cap:
        raise CapExceeded("family truncation", size, cap)
    built = [p if isinstance(p, EffectAlgebra) else (chain(p[1]) if p[0] == "chain" else boolean(p[1])) for p in pieces]
    if len(built) == 1:
        return built[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return horizontal_sum(built)


def ao_growth(f: SymbolicFamily | str, params: list[dict]) -> list[int]:
    """|A_a| for the first atom of each truncation."""
    out = []
    for p in params:
        E = family_truncate(f, **p)
        a = atom_analysis(E).atoms[0]
        out.append(len(ao_witness_set(E, a)))
    return out
