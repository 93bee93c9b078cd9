"""Hasse diagrams in DOT.

Atoms sit on one shared rank, sharp elements are drawn as double circles and
highlighted node groups get a fill colour each (a node in several groups is
drawn as a wedge of their colours).
"""

from __future__ import annotations

from .core import EffectAlgebra, bits
from .structure import atom_analysis, sharp_mask

PALETTE = ("lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon", "lightcyan", "wheat")


def covers(E: EffectAlgebra) -> list[tuple[int, int]]:
    """Pairs (x, y) with y covering x in the induced order."""
    down = E.order.down
    out = []
    for y in range(E.n):
        below = down[y] & ~(1 << y)
        for x in bits(below):
            # y covers x when nothing strictly between them
            between = below & ~down[x]
            if all(not (down[z] >> x & 1) for z in bits(between)):
                out.append((x, y))
    return out


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(E: EffectAlgebra, groups: list[tuple[str, int]] | None = None, name: str = "hasse") -> str:
    """DOT source; ``groups`` is a list of (caption, member mask) to highlight."""
    groups = groups or []
    atoms = atom_analysis(E).atoms
    smask = sharp_mask(E) if E.is_lattice else 0
    colour = {}
    for i, (_, m) in enumerate(groups):
        for x in bits(m):
            colour.setdefault(x, []).append(PALETTE[i % len(PALETTE)])

    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, fontsize=11];"]
    for x in range(E.n):
        attrs = [f"label={_quote(E.labels[x])}"]
        if smask >> x & 1:
            attrs.append("shape=doublecircle")
        cs = colour.get(x)
        if cs:
            style = "filled" if len(cs) == 1 else "wedged"
            attrs += [f"style={style}", f"fillcolor={_quote(':'.join(cs))}"]
        lines.append(f"  n{x} [{', '.join(attrs)}];")
    if atoms:
        lines.append("  { rank=same; " + " ".join(f"n{a};" for a in atoms) + " }")
    for x, y in covers(E):
        lines.append(f"  n{x} -> n{y} [arrowhead=none];")
    if groups:
        lines.append("  subgraph cluster_legend {")
        lines.append('    label="highlight"; style=dashed;')
        for i, (caption, _) in enumerate(groups):
            c = PALETTE[i % len(PALETTE)]
            lines.append(f"    legend{i} [shape=box, style=filled, fillcolor={c}, label={_quote(caption)}];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
