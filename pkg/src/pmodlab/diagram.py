"""Box diagrams of Omega^2(F_p) and Omega^-2(F_p) over C_p x C_p.

Each basis vector of the explicit presentation is a box.  A box at column
``x`` and row ``y`` (rows grow downward) sends ``sigma_1 - 1`` to the box at
``(x-1, y+1)`` (southwest) and ``sigma_2 - 1`` to ``(x+1, y+1)`` (southeast).
Edges are read off the module action, not drawn from the formulas.  The dual
module is drawn with every edge reversed.

Text format: a fixed-width grid, one 4-character cell per column, followed by
an edge list ``src -s1-> dst``.  SVG format: one ``rect`` per box, one ``line``
per edge, a ``text`` label in each box.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp_linalg as la
from .decomp import CpCpPresentation, verify_presentation

MAX_DIAGRAM_P = 7
CELL = 48


@dataclass(frozen=True)
class Box:
    name: str
    short: str
    x: int
    y: int


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    gen: int          # 1 or 2
    coeff: int


@dataclass
class Diagram:
    p: int
    which: str
    boxes: list[Box]
    edges: list[Edge]


def _boxes(p: int) -> list[Box]:
    out = [Box("a1", "a1", -p, p - 2), Box("a2", "a2", p, p - 2)]
    for k in range(p):
        for l in range(p):
            if k + l < 2 * p - 2:
                name = "a0" if k == l == 0 else f"({k},{l})"
                short = "a0" if k == l == 0 else f"{k}{l}"
                out.append(Box(name, short, l - k, k + l))
    return out


def action_edges(pres: CpCpPresentation) -> list[Edge]:
    """Express ``(sigma_i - 1) b`` in the presentation basis for every box ``b``."""
    p = pres.p
    names = ["a1", "a2"] + [
        "a0" if k == l == 0 else f"({k},{l})"
        for k in range(p) for l in range(p) if k + l < 2 * p - 2
    ]
    basis = np.stack([v for _, v in pres.basis])            # rows
    edges = []
    for gi, low in enumerate(pres.lowering, start=1):
        images = la.matmul_mod(low, basis.T, p)              # columns
        for j, src in enumerate(names):
            coords = la.solve_mod(basis.T, images[:, j], p)
            if coords is None:
                raise AssertionError("presentation basis is not stable under the action")
            for i in np.flatnonzero(coords):
                edges.append(Edge(src, names[i], gi, int(coords[i])))
    return edges


def build_diagram(p: int, which: str = "omega2") -> Diagram:
    if p > MAX_DIAGRAM_P:
        raise ValueError(f"diagram guard: p <= {MAX_DIAGRAM_P}")
    if which not in ("omega2", "omega_minus_2"):
        raise ValueError(f"unknown diagram {which!r}")
    pres = verify_presentation(p, force=True)
    edges = action_edges(pres)
    if which == "omega_minus_2":
        edges = [Edge(e.dst, e.src, e.gen, e.coeff) for e in edges]
    return Diagram(p, which, _boxes(p), edges)


def _edge_text(e: Edge) -> str:
    c = "" if e.coeff == 1 else f"[{e.coeff}]"
    return f"{e.src} -s{e.gen}{c}-> {e.dst}"


def to_text(d: Diagram) -> str:
    xs = [b.x for b in d.boxes]
    ys = [b.y for b in d.boxes]
    x0, width = min(xs), max(xs) - min(xs) + 1
    grid = [["    "] * width for _ in range(max(ys) + 1)]
    for b in d.boxes:
        grid[b.y][b.x - x0] = f"[{b.short}]".ljust(4)
    title = "Omega^2(F_p)" if d.which == "omega2" else "Omega^-2(F_p)"
    lines = [f"{title} over C{d.p} x C{d.p}: {len(d.boxes)} boxes, {len(d.edges)} edges"]
    lines += ["".join(row).rstrip() for row in grid]
    lines.append("edges:")
    lines += ["  " + _edge_text(e) for e in d.edges]
    return "\n".join(lines) + "\n"


def to_svg(d: Diagram) -> str:
    xs = [b.x for b in d.boxes]
    x0 = min(xs)
    w = (max(xs) - x0 + 2) * CELL
    h = (max(b.y for b in d.boxes) + 2) * CELL
    side = CELL * 0.6
    pos = {b.name: ((b.x - x0 + 1) * CELL, (b.y + 1) * CELL) for b in d.boxes}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
        f'viewBox="0 0 {w:.0f} {h:.0f}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" '
        'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>',
    ]
    for e in d.edges:
        (xa, ya), (xb, yb) = pos[e.src], pos[e.dst]
        dx, dy = xb - xa, yb - ya
        norm = max(np.hypot(dx, dy), 1e-9)
        cut = side / 2 * 1.2
        ux, uy = dx / norm * cut, dy / norm * cut
        color = "#1f5fa8" if e.gen == 1 else "#b03a2e"
        out.append(
            f'<line class="s{e.gen}" x1="{xa + ux:.1f}" y1="{ya + uy:.1f}" '
            f'x2="{xb - ux:.1f}" y2="{yb - uy:.1f}" stroke="{color}" '
            f'stroke-width="1.5" marker-end="url(#arrow)"/>'
        )
    for b in d.boxes:
        cx, cy = pos[b.name]
        out.append(
            f'<rect x="{cx - side / 2:.1f}" y="{cy - side / 2:.1f}" width="{side:.1f}" '
            f'height="{side:.1f}" fill="white" stroke="black"/>'
        )
        label = b.short if b.name in ("a0", "a1", "a2") else ""
        out.append(
            f'<text x="{cx:.1f}" y="{cy + 4:.1f}" font-family="monospace" font-size="11" '
            f'text-anchor="middle">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_diagram(p: int, which: str = "omega2", format: str = "text") -> str:
    d = build_diagram(p, which)
    if format == "text":
        return to_text(d)
    if format == "svg":
        return to_svg(d)
    raise ValueError(f"unknown format {format!r}")
