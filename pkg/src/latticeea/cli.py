"""Command-line interface.

Exit codes: 0 all good, 1 usage/IO/input error, 2 a theorem check failed
(or ``verify`` found an axiom violation), 3 a brute-force cap was exceeded.

Family specs (``gen``, ``family``)::

    spec     := summand | "hsum(" term ("," term)* ")"
    term     := summand ["*" count] | "chain:n>=" NUM
    summand  := "chain:" NUM | "boolean:" (NUM | "inf")
    count    := NUM | "inf"

e.g. ``hsum(chain:3 * inf)``, ``hsum(chain:n>=3)`` (one chain of every
length from 3 on), ``hsum(boolean:inf * 2)``, ``chain:7``.
``gen`` also accepts the named instances E2, C3, B4, HS2C3 and HSB4B4.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys

from . import report as rp
from .caps import current as current_caps
from .completion import closedness, dm_complete, mc_check
from .core import EffectAlgebra, restrict, validate
from .dot import to_dot
from .enumeration import enumerate_up_to
from .errors import AxiomError, CapExceeded, EAError, Falsification
from .families import PROPERTIES, THEOREM_MAP, UNKNOWN, family_analyze, family_truncate
from .generators import NAMED
from .instance_io import dumps, from_document, load, read_text, table_from_document, to_document
from .states import State, e1_subalgebra, extend_state, extreme_states, find_state, state_from_sub
from .structure import blocks, decompose, sharp_mask
from .topology import ao_partition, blockfinite_cover, interval, separate

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclasses.dataclass
class Result:
    doc: object
    code: int = 0
    head: str | None = None  # human headline printed before the body
    body: bool = True  # False: the headline is the whole human output


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- commands: each returns a Result, or raw text for gen and dot ---------------


def _json_doc(path: str) -> dict:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise UsageError(f"instance is not valid JSON: line {e.lineno} column {e.colno}: {e.msg}") from None


def cmd_verify(args):
    doc = _json_doc(args.file)
    table, zero, one, labels = table_from_document(doc)
    rep = validate(table, zero, one)
    name = lambda i: None if i is None else labels[i]  # noqa: E731
    violations = [{"axiom": v.axiom, "witness": [name(i) for i in v.witness]} for v in rep.violations]
    if rep.ok:
        dig = rp.digest(from_document(doc))
    else:
        dig = hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]
    out = {
        "instance": {"digest": dig, "size": len(labels), "elements": labels},
        "validation": {"status": "PASS" if rep.ok else "FAIL", "violations": violations},
    }
    head = "valid effect algebra" if rep.ok else f"not an effect algebra: {len(violations)} violation(s)"
    return Result(out, EXIT_OK if rep.ok else EXIT_FAIL, head)


def _load(path: str) -> EffectAlgebra:
    try:
        return load(path)
    except json.JSONDecodeError as e:
        raise UsageError(str(e)) from None


def cmd_analyze(args):
    E = _load(args.file)
    out = rp.analyze(E)
    return Result(out, EXIT_FAIL if rp.has_failure(out) else EXIT_OK, None)


def cmd_blocks(args):
    E = _load(args.file)
    E.require_lattice("blocks")
    bd = blocks(E)
    out = {
        "instance": rp.instance_section(E),
        "blocks": [E.labelset(m) for m in bd.blocks],
        "mv": bd.is_mv,
        "block_finite": bd.is_block_finite,
        "block_intersection": E.labelset(bd.b_e),
        "center": E.labelset(bd.c_e),
    }
    return Result(out, EXIT_OK, f"{len(bd.blocks)} block(s)")


def cmd_decompose(args):
    E = _load(args.file)
    x = E.elem(args.elem)
    d = decompose(E, x)
    terms = rp.term_doc(E, d.terms)
    out = {"element": E.labels[x], "terms": terms, "sharp": bool(sharp_mask(E) >> x & 1)}
    text = " (+) ".join(f"{k}{a}" if k != 1 else a for a, k in terms) or "0"
    return Result(out, EXIT_OK, f"{E.labels[x]} = {text}")


def cmd_separate(args):
    E = _load(args.file)
    w = separate(E, E.elem(args.x), E.elem(args.y))
    out = rp.separation_doc(E, w)
    return Result(out, EXIT_OK, f"up={w.up.show(E)}, down={w.down.show(E)}")


def cmd_cover(args):
    E = _load(args.file)
    w = blockfinite_cover(E, E.elem(args.x), E.elem(args.y))
    return Result(rp.cover_doc(E, w), EXIT_OK, None)


def cmd_partition(args):
    E = _load(args.file)
    w = ao_partition(E, E.elem(args.atom), args.level)
    tail = ", ".join(iv.show(E) for iv in w.tail)
    return Result(rp.partition_doc(E, w), EXIT_OK, f"head={w.head.show(E)}, tail={{{tail}}}")


def _sub_mask(E: EffectAlgebra, source: str) -> int:
    if source == "sharp":
        return sharp_mask(E)
    if source == "e1":
        return e1_subalgebra(E).mask
    if source.startswith("block:"):
        try:
            i = int(source[6:])
        except ValueError:
            raise UsageError(f"bad block index in {source!r}") from None
        bl = blocks(E).blocks
        if not 0 <= i < len(bl):
            raise UsageError(f"block index {i} out of range (0..{len(bl) - 1})")
        return bl[i]
    raise UsageError(f"--extend-from expects sharp, e1 or block:I, not {source!r}")


def cmd_states(args):
    E = _load(args.file)
    w = find_state(E)
    out = {
        "instance": rp.instance_section(E),
        "lexicographic": rp.state_doc(E, w) if isinstance(w, State) else {"unsat": w.reason},
    }
    code = EXIT_OK
    if args.extreme:
        out["extreme"] = [rp.state_doc(E, v) for v in extreme_states(E)]
    if args.extend_from:
        Q = _sub_mask(E, args.extend_from)
        sub, members = restrict(E, Q)
        rows = []
        for v in extreme_states(sub):
            prob = extend_state(E, Q, state_from_sub(E, members, v))
            row = {"given": rp.state_doc(sub, v), "feasible": prob.feasible, "via": prob.via}
            if prob.feasible:
                row["extension"] = rp.state_doc(E, prob.witness)
            else:
                row["certificate"] = prob.certificate.reason
            rows.append(row)
        # failure to extend from S(E) or E1 contradicts a theorem; from a block it need not
        must = args.extend_from in ("sharp", "e1")
        status = "PASS" if all(r["feasible"] for r in rows) or not must else "FAIL"
        out["extension"] = {"source": args.extend_from, "subalgebra": E.labelset(Q), "status": status, "cases": rows}
        if status == "FAIL":
            code = EXIT_FAIL
    return Result(out, code, None)


def cmd_complete(args):
    E = _load(args.file)
    dm = dm_complete(E)
    out = {
        "instance": rp.instance_section(E),
        "cuts": [E.labelset(L) for L, _ in dm.cuts],
        "embedding": {E.labels[x]: k for x, k in enumerate(dm.embedding)},
        "isomorphic_to_source": dm.is_isomorphic_to_source,
    }
    if E.is_lattice:
        out["atoms_preserved"] = mc_check(E)
        bd = blocks(E)
        subs = [(f"block {i}", m) for i, m in enumerate(bd.blocks)]
        subs += [("sharp", sharp_mask(E)), ("block_intersection", bd.b_e), ("center", bd.c_e)]
        out["closedness"] = {}
        for name, D in subs:
            rep = closedness(E, D)
            out["closedness"][name] = {**rep.conditions, "status": "PASS" if rep.agree else "FAIL"}
    code = EXIT_FAIL if rp.has_failure(out) else EXIT_OK
    return Result(out, code, f"{len(dm.cuts)} cuts")


def cmd_gen(args):
    if args.spec in NAMED:
        E = NAMED[args.spec]()
    else:
        E = family_truncate(args.spec, k=args.k, atoms=args.atoms)
    return dumps(E)


def cmd_enumerate(args):
    found = enumerate_up_to(args.max_size)
    counts: dict[str, int] = {}
    for E in found:
        counts[str(E.n)] = counts.get(str(E.n), 0) + 1
    out = {
        "max_size": args.max_size,
        "counts": counts,
        "lattices": sum(E.is_lattice for E in found),
        "instances": [to_document(E) for E in found] if args.format == "machine" else len(found),
    }
    return Result(out, EXIT_OK, None)


def cmd_family(args):
    v = family_analyze(args.spec)
    flags = {}
    for p in PROPERTIES:
        f = v.flags.get(p)
        if f is None:
            flags[p] = {"value": UNKNOWN, "justification": None}
        else:
            flags[p] = {
                "value": f.value,
                "justification": f.justification,
                "premises": [[q, val] for q, val in f.premises],
            }
    out = {"family": v.family.spec(), "flags": flags}
    if args.format == "human":
        head = [f"family {v.family.spec()}"]
        for p, f in flags.items():
            why = f["justification"]
            head.append(f"  {p:<22} {f['value']:<8} {why + ': ' + THEOREM_MAP[why] if why else ''}".rstrip())
        return Result(out, EXIT_OK, "\n".join(head), body=False)
    return Result(out, EXIT_OK, None)


def cmd_check_all(args):
    E = _load(args.file)
    out = {"instance": rp.instance_section(E), "checks": rp.checks_section(E)}
    return Result(out, EXIT_FAIL if rp.has_failure(out) else EXIT_OK, None)


def _highlight_groups(E: EffectAlgebra, specs: list[str]) -> list[tuple[str, int]]:
    groups = []
    for spec in specs:
        kind, _, rest = spec.partition(":")
        parts = [p.strip() for p in rest.split(",")] if rest else []
        if len(parts) != 2:
            raise UsageError(f"--highlight expects KIND:A,B, not {spec!r}")
        if kind == "separate":
            w = separate(E, E.elem(parts[0]), E.elem(parts[1]))
            groups += [(f"up {w.up.show(E)}", w.up.members), (f"down {w.down.show(E)}", w.down.members)]
        elif kind == "partition":
            try:
                level = int(parts[1])
            except ValueError:
                raise UsageError(f"partition level must be an integer, not {parts[1]!r}") from None
            w = ao_partition(E, E.elem(parts[0]), level)
            groups.append((f"head {w.head.show(E)}", w.head.members))
            groups.append(("tail " + " ".join(iv.show(E) for iv in w.tail), w.tail_union))
        elif kind == "cover":
            w = blockfinite_cover(E, E.elem(parts[0]), E.elem(parts[1]))
            for bc in w.per_block:
                groups.append((f"block {bc.block} J {bc.J.show(E)}", bc.J.members))
                groups.append((f"block {bc.block} K {bc.K.show(E)}", bc.K.members))
        elif kind == "interval":
            iv = interval(E, E.elem(parts[0]), E.elem(parts[1]))
            groups.append((iv.show(E), iv.members))
        else:
            raise UsageError(f"unknown highlight kind {kind!r} (separate, partition, cover, interval)")
    return groups


def cmd_dot(args):
    E = _load(args.file)
    return to_dot(E, _highlight_groups(E, args.highlight or []))


COMMANDS = {
    "verify": cmd_verify,
    "analyze": cmd_analyze,
    "blocks": cmd_blocks,
    "decompose": cmd_decompose,
    "separate": cmd_separate,
    "cover": cmd_cover,
    "partition": cmd_partition,
    "states": cmd_states,
    "complete": cmd_complete,
    "gen": cmd_gen,
    "enumerate": cmd_enumerate,
    "family": cmd_family,
    "check-all": cmd_check_all,
    "dot": cmd_dot,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    p = _Parser(prog="latticeea", description="Finite lattice effect algebras: checks, witnesses and reports.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help, *positionals):
        s = sub.add_parser(name, help=help, parents=[common])
        for arg in positionals:
            s.add_argument(arg)
        return s

    cmd("verify", "check the effect-algebra axioms", "file")
    cmd("analyze", "full report", "file")
    cmd("blocks", "blocks, B(E) and C(E)", "file")
    cmd("decompose", "atomic decomposition of an element", "file", "elem")
    cmd("separate", "disjoint intervals separating two elements", "file", "x", "y")
    cmd("cover", "per-block interval covers for x not below y", "file", "x", "y")
    s = cmd("partition", "clopen partition from an atom and level", "file", "atom")
    s.add_argument("level", type=int)
    s = cmd("states", "states, extreme states and extensions", "file")
    s.add_argument("--extreme", action="store_true")
    s.add_argument("--extend-from", metavar="{sharp|e1|block:I}")
    cmd("complete", "Dedekind-MacNeille completion", "file")
    s = cmd("gen", "emit an instance file", "spec")
    s.add_argument("--k", type=int, default=None, help="summand bound for infinite families")
    s.add_argument("--atoms", type=int, default=2, help="atom count for infinite Boolean summands")
    s = cmd("enumerate", "all effect algebras up to a size")
    s.add_argument("--max-size", type=int, required=True)
    cmd("family", "verdicts for a symbolic family", "spec")
    cmd("check-all", "run every theorem suite", "file")
    s = cmd("dot", "Hasse diagram in DOT", "file")
    s.add_argument("--highlight", action="append", metavar="KIND:A,B")
    return p


def _emit(result, fmt: str, stdout) -> int:
    if isinstance(result, str):
        stdout.write(result)
        return EXIT_OK
    if fmt == "machine":
        stdout.write(rp.to_json(result.doc))
    else:
        if result.head:
            stdout.write(result.head + "\n")
        if result.body:
            stdout.write(rp.render_human(result.doc))
    return result.code


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        current_caps()  # a malformed EA_CAPS is a usage error
        args = build_parser().parse_args(argv)
        result = COMMANDS[args.command](args)
        return _emit(result, getattr(args, "format", "human"), stdout)
    except UsageError as e:
        stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except CapExceeded as e:
        stderr.write(f"cap exceeded: {e} (raise it with EA_CAPS)\n")
        return EXIT_CAP
    except Falsification as e:
        stderr.write(f"FALSIFIED: {e}\n")
        return EXIT_FAIL
    except AxiomError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (EAError, OSError, ValueError) as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())

