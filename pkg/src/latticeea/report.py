"""Reports: plain dicts of JSON values, rendered as text or as a stable JSON document.

Every builder returns data in element labels (never indices), so a machine
report can be read without the instance file.  Rationals are written "n/d".
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .checks import check_all
from .completion import dm_complete, mc_check
from .core import INFINITE, EffectAlgebra
from .errors import CapExceeded, NotALatticeError, PreconditionError
from .instance_io import dumps
from .states import State, extreme_states, find_state
from .structure import (
    almost_orthogonality,
    atom_analysis,
    blocks,
    decompose,
    sharp_mask,
)
from .topology import (
    BlockCover,
    CoverWitness,
    Interval,
    PartitionWitness,
    SeparationWitness,
    generate_topology,
    phi_eval,
    phi_separates,
    topologies_agree,
)


def digest(E: EffectAlgebra) -> str:
    return hashlib.sha256(dumps(E).encode()).hexdigest()[:16]


def _ord(v) -> int | str:
    return "inf" if v == INFINITE else int(v)


def _frac(v: Fraction) -> str:
    return str(Fraction(v))


def interval_doc(E: EffectAlgebra, iv: Interval) -> dict:
    return {"interval": iv.show(E), "members": E.labelset(iv.members)}


def state_doc(E: EffectAlgebra, w: State) -> dict:
    return {E.labels[x]: _frac(v) for x, v in enumerate(w.values)}


def term_doc(E: EffectAlgebra, terms) -> list[list]:
    return [[E.labels[a], k] for a, k in terms]


def _guard(fn):
    """Run a section builder; caps and unmet hypotheses become SKIPPED markers."""
    try:
        return fn()
    except CapExceeded as e:
        return {"status": "SKIPPED(cap)", "reason": str(e)}
    except (PreconditionError, NotALatticeError) as e:
        return {"status": "SKIPPED", "reason": str(e)}


# -- sections --------------------------------------------------------------


def instance_section(E: EffectAlgebra) -> dict:
    return {"digest": digest(E), "size": E.n, "elements": list(E.labels)}


def structure_section(E: EffectAlgebra) -> dict:
    at = atom_analysis(E)
    out = {
        "lattice": E.is_lattice,
        "atoms": E.labelset(at.atoms),
        "ord": {E.labels[x]: _ord(at.ord[x]) for x in range(E.n) if x != E.zero},
        "atomic": at.is_atomic,
        "archimedean": at.is_archimedean,
    }
    if not E.is_lattice:
        return out
    bd = blocks(E)
    out.update(
        blocks=[E.labelset(m) for m in bd.blocks],
        mv=bd.is_mv,
        sharp=E.labelset(sharp_mask(E)),
        block_intersection=E.labelset(bd.b_e),
        center=E.labelset(bd.c_e),
    )
    if at.is_atomic and at.is_archimedean:
        out["decompositions"] = {
            E.labels[x]: term_doc(E, decompose(E, x).terms) for x in range(E.n) if x != E.zero
        }
        ao = almost_orthogonality(E)
        out["almost_orthogonality"] = {
            "non_orthogonal_atoms": {E.labels[a]: E.labelset(A) for a, A in ao.per_atom.items()},
            "witnesses": {
                f"{E.labels[a]},{l}": [[E.labels[c], j] for c, j in w] for (a, l), w in ao.witnesses.items()
            },
            "minimal": {
                f"{E.labels[a]},{l}": [[E.labels[c], j] for c, j in w] for (a, l), w in ao.minimal.items()
            },
        }
    return out


def topology_section(E: EffectAlgebra) -> dict:
    def build():
        fam = phi_eval(E)
        pair = phi_separates(E, fam)
        out = {
            "phi_u": E.labelset(fam.u_set),
            "phi_v": E.labelset(fam.v_set),
            "phi_separates": pair is None,
        }
        gen = _guard(lambda: generate_topology(E))
        if isinstance(gen, dict):
            out["interval_topology"] = gen
        else:
            ag = topologies_agree(E)
            out["interval_topology"] = {
                "closed_sets": len(gen.closed_sets),
                "discrete": gen.is_discrete,
                "hausdorff": gen.is_hausdorff_witnessed,
                "equals_order_topology": ag.interval_eq_order,
                "equals_phi_topology": ag.order_eq_phi,
            }
        return out

    return _guard(build)


def completion_section(E: EffectAlgebra) -> dict:
    dm = dm_complete(E)
    out = {"cuts": len(dm.cuts), "isomorphic_to_source": dm.is_isomorphic_to_source}
    if E.is_lattice:
        out["atoms_preserved"] = mc_check(E)
    else:
        out["note"] = "order completion only; the sum is not carried over"
    return out


def states_section(E: EffectAlgebra) -> dict:
    w = find_state(E)
    out = {"lexicographic": state_doc(E, w) if isinstance(w, State) else {"unsat": w.reason}}
    ext = _guard(lambda: extreme_states(E))
    out["extreme"] = ext if isinstance(ext, dict) else [state_doc(E, v) for v in ext]
    return out


def verdicts_section(E: EffectAlgebra) -> dict:
    """Property flags of the concrete instance, named as in the family verdicts."""
    at = atom_analysis(E)
    yes = lambda b: "TRUE" if b else "FALSE"  # noqa: E731
    out = {
        "lattice": yes(E.is_lattice),
        "atomic": yes(at.is_atomic),
        "archimedean": yes(at.is_archimedean),
    }
    if not E.is_lattice:
        return out
    bd = blocks(E)
    out.update(complete="TRUE", block_finite="TRUE", mv=yes(bd.is_mv))
    if at.is_atomic and at.is_archimedean:
        out["almost_orthogonal"] = yes(almost_orthogonality(E).is_almost_orthogonal)
        out["phi_separates"] = yes(phi_separates(E) is None)
        ag = _guard(lambda: topologies_agree(E))
        out["tau_equalities"] = ag["status"] if isinstance(ag, dict) else yes(ag.agree)
    return out


def checks_section(E: EffectAlgebra, only=None) -> list[dict]:
    return [
        {"suite": r.name, "status": r.label, "checked": r.checked, "detail": r.detail}
        for r in check_all(E, only)
    ]


def analyze(E: EffectAlgebra) -> dict:
    return {
        "instance": instance_section(E),
        "validation": {"status": "PASS", "violations": []},
        "structure": structure_section(E),
        "topology": topology_section(E),
        "completion": _guard(lambda: completion_section(E)),
        "states": _guard(lambda: states_section(E)),
        "verdicts": verdicts_section(E),
        "checks": checks_section(E),
    }


def separation_doc(E: EffectAlgebra, w: SeparationWitness) -> dict:
    return {
        "x": E.labels[w.x],
        "y": E.labels[w.y],
        "swapped": w.swapped,
        "atom_b": E.labels[w.atom_b],
        "k": w.k,
        "atom_a": E.labels[w.atom_a],
        "l": w.l,
        "up": interval_doc(E, w.up),
        "down": interval_doc(E, w.down),
    }


def partition_doc(E: EffectAlgebra, w: PartitionWitness) -> dict:
    return {
        "atom": E.labels[w.atom],
        "level": w.level,
        "head": interval_doc(E, w.head),
        "tail": [interval_doc(E, iv) for iv in w.tail],
    }


def cover_doc(E: EffectAlgebra, w: CoverWitness) -> dict:
    def one(bc: BlockCover) -> dict:
        return {
            "block": bc.block,
            "case": bc.case,
            "atom": E.labels[bc.atom],
            "J": interval_doc(E, bc.J),
            "K": interval_doc(E, bc.K),
        }

    return {"x": E.labels[w.x], "y": E.labels[w.y], "per_block": [one(bc) for bc in w.per_block]}


def has_failure(doc) -> bool:
    """True if any nested 'status' says FAIL."""
    if isinstance(doc, dict):
        if doc.get("status") == "FAIL":
            return True
        return any(has_failure(v) for v in doc.values())
    if isinstance(doc, list):
        return any(has_failure(v) for v in doc)
    return False


# -- rendering -------------------------------------------------------------


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "{" + ", ".join(str(x) for x in v) + "}" if v else "none"
    if isinstance(v, list) and all(isinstance(x, list) and len(x) == 2 for x in v):
        return " (+) ".join(f"{k}{a}" if k != 1 else str(a) for a, k in v) or "0"
    if isinstance(v, dict) and set(v) == {"interval", "members"}:
        return f"{v['interval']} = {{{', '.join(v['members'])}}}"
    return str(v)


def _is_leaf(v) -> bool:
    if isinstance(v, dict):
        return set(v) == {"interval", "members"}
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v) or all(
            isinstance(x, list) and len(x) == 2 and not isinstance(x[0], (list, dict)) for x in v
        )
    return True


def render_human(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if _is_leaf(v):
                lines.append(f"{pad}{k}: {_scalar(v)}")
            else:
                lines.append(f"{pad}{k}:")
                lines.append(render_human(v, indent + 1).rstrip("\n"))
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, dict) and "suite" in v:
                tail = f"  {v['detail']}" if v.get("detail") else ""
                lines.append(f"{pad}{v['status']:<13} {v['suite']} ({v['checked']} checks){tail}")
            elif _is_leaf(v):
                lines.append(f"{pad}- {_scalar(v)}")
            else:
                lines.append(f"{pad}-")
                lines.append(render_human(v, indent + 1).rstrip("\n"))
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines) + "\n"


def render(doc, fmt: str) -> str:
    return to_json(doc) if fmt == "machine" else render_human(doc)

