import re

import pytest

from pmodlab.diagram import MAX_DIAGRAM_P, build_diagram, render_diagram


@pytest.mark.parametrize("p", (2, 3, 5))
@pytest.mark.parametrize("which", ("omega2", "omega_minus_2"))
def test_diagram_shape(p, which):
    d = build_diagram(p, which)
    assert len(d.boxes) == p * p + 1
    names = {b.name for b in d.boxes}
    assert {"a1", "a2", "a0", "(1,0)", "(0,1)"} <= names
    for e in d.edges:
        assert e.src in names and e.dst in names and e.coeff % p


@pytest.mark.parametrize("p", (2, 3, 5))
def test_omega2_edges_go_down(p):
    d = build_diagram(p, "omega2")
    pos = {b.name: (b.x, b.y) for b in d.boxes}
    for e in d.edges:
        (x0, y0), (x1, y1) = pos[e.src], pos[e.dst]
        assert y1 > y0
        # s1 southwest, s2 southeast
        assert (x1 < x0) if e.gen == 1 else (x1 > x0)


@pytest.mark.parametrize("p", (2, 3))
def test_dual_reverses_edges(p):
    down = {(e.src, e.dst) for e in build_diagram(p, "omega2").edges}
    up = {(e.dst, e.src) for e in build_diagram(p, "omega_minus_2").edges}
    assert down == up


def test_svg_and_text():
    svg = render_diagram(3, format="svg")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert len(re.findall(r"<rect", svg)) >= 10
    txt = render_diagram(2)
    assert "a0" in txt and "a1" in txt and "a2" in txt


def test_diagram_guard():
    with pytest.raises(ValueError):
        build_diagram(MAX_DIAGRAM_P + 4)
    with pytest.raises(ValueError):
        build_diagram(3, "omega3")
