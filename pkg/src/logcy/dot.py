"""Dual graph export in DOT text."""
from __future__ import annotations

from .divisor import DivisorConfig, IntersectionPoint, SmoothPoint
from .lattice import adjunction_genus


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(D: DivisorConfig, name: str = "D") -> str:
    """Vertices are components labelled by self-intersection; one edge per
    intersection point.  Positive genus vertices are drawn as boxes and
    markings show up as ``*`` on their vertex or edge."""
    smooth = {}
    at_edge = {}
    for m in D.markings:
        if isinstance(m.center, SmoothPoint):
            smooth[m.center.component] = smooth.get(m.center.component, 0) + 1
        elif isinstance(m.center, IntersectionPoint):
            at_edge[m.center.edge] = at_edge.get(m.center.edge, 0) + 1

    lines = [f"graph {_quote(name)} {{", f"  // ambient {D.lattice}"]
    for i, (nm, c) in enumerate(zip(D.names, D.classes)):
        label = str(c.square) + "*" * smooth.get(i, 0)
        attrs = [f"label={_quote(label)}", f"tooltip={_quote(f'{nm} = {c}')}"]
        g = adjunction_genus(c)
        if g:
            attrs.append('shape="box"')
            attrs.append(f"xlabel={_quote(f'g={g}')}")
        lines.append(f"  v{i + 1} [{', '.join(attrs)}];")
    for t, (a, b) in enumerate(D.edges):
        extra = f' [label="{"*" * at_edge[t]}"]' if t in at_edge else ""
        lines.append(f"  v{a + 1} -- v{b + 1}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"
