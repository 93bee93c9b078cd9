"""Instance files.

An instance is a JSON document::

    {
      "elements": ["0", "a", "b", "1"],
      "zero": "0",
      "one": "1",
      "plus": [
        ["a", "a", "1"],
        ["b", "b", "1"]
      ]
    }

``zero``/``one`` are optional (first and last element otherwise).  Rows
``x (+) 0 = x`` are implicit; any pair not listed is undefined.
``dumps`` is canonical: the same algebra always serialises to the same bytes.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .core import EffectAlgebra, PartialSumTable
from .errors import StructuralError


def parse_document(doc: dict) -> tuple[list[str], int, int, list[tuple[int, int, int]]]:
    """Structural parse only: labels, zero, one and index triples (no axiom check)."""
    if not isinstance(doc, dict) or "elements" not in doc:
        raise StructuralError("instance document needs an 'elements' list")
    labels = doc["elements"]
    if not isinstance(labels, list) or len(labels) < 2:
        raise StructuralError("'elements' must list at least two labels")
    labels = [str(s) for s in labels]
    if len(set(labels)) != len(labels) or any(not s for s in labels):
        raise StructuralError("element labels must be nonempty and unique")
    idx = {s: i for i, s in enumerate(labels)}

    def lookup(s, where):
        try:
            return idx[str(s)]
        except KeyError:
            raise StructuralError(f"unknown element label {s!r} in {where}") from None

    zero = lookup(doc.get("zero", labels[0]), "zero")
    one = lookup(doc.get("one", labels[-1]), "one")
    if zero == one:
        raise StructuralError("zero and one must be distinct")
    triples = []
    for k, tr in enumerate(doc.get("plus", [])):
        if not isinstance(tr, (list, tuple)) or len(tr) != 3:
            raise StructuralError(f"plus[{k}] must be a triple [x, y, z]")
        triples.append(tuple(lookup(s, f"plus[{k}]") for s in tr))
    return labels, zero, one, triples


def from_document(doc: dict) -> EffectAlgebra:
    labels, zero, one, triples = parse_document(doc)
    # zero first, one last; the remaining order is kept
    order = [zero] + [i for i in range(len(labels)) if i not in (zero, one)] + [one]
    pos = {old: new for new, old in enumerate(order)}
    tr = [(pos[x], pos[y], pos[z]) for x, y, z in triples]
    table = PartialSumTable.from_triples(len(labels), tr)
    return EffectAlgebra([labels[i] for i in order], table)


def table_from_document(doc: dict) -> tuple[PartialSumTable, int, int, list[str]]:
    labels, zero, one, triples = parse_document(doc)
    return PartialSumTable.from_triples(len(labels), triples, zero=zero), zero, one, labels


def to_document(E: EffectAlgebra) -> dict:
    plus = []
    for (i, j), k in sorted(E.table.entries().items()):
        if i == E.zero or j == E.zero:
            continue
        plus.append([E.labels[i], E.labels[j], E.labels[k]])
    return {
        "elements": list(E.labels),
        "zero": E.labels[E.zero],
        "one": E.labels[E.one],
        "plus": plus,
    }


def dumps(E: EffectAlgebra) -> str:
    doc = to_document(E)
    lines = ["{"]
    lines.append(f'  "elements": {json.dumps(doc["elements"])},')
    lines.append(f'  "zero": {json.dumps(doc["zero"])},')
    lines.append(f'  "one": {json.dumps(doc["one"])},')
    if doc["plus"]:
        lines.append('  "plus": [')
        body = [f"    {json.dumps(t)}" for t in doc["plus"]]
        lines.append(",\n".join(body))
        lines.append("  ]")
    else:
        lines.append('  "plus": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> EffectAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructuralError(f"instance is not valid JSON: line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_document(doc)


def read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load(path: str | Path) -> EffectAlgebra:
    return loads(read_text(path))


def save(E: EffectAlgebra, path: str | Path) -> None:
    Path(path).write_text(dumps(E))
