"""SVG drawings of disc diagrams with the pulled-back separator and extreme
cells highlighted.  Layout comes from networkx; the SVG is written by hand."""

from __future__ import annotations

from xml.sax.saxutils import escape

import networkx as nx

from .complex import TwoComplex
from .diagrams import DiscDiagram
from .pullback import PulledBackSeparator, extreme_cells

SIZE = 480
MARGIN = 40


def _spring(g: nx.Graph, pos, fixed):
    try:
        return nx.spring_layout(g, pos=pos, fixed=fixed, seed=0)
    except ImportError:  # spring layouts need numpy
        return nx.circular_layout(list(g))


def _layout(d: DiscDiagram) -> dict[int, tuple[float, float]]:
    vid = d.vertex_of()
    g = nx.Graph()
    g.add_nodes_from(set(vid.values()))
    for a, b in d.edges():
        if vid[a] != vid[b]:
            g.add_edge(vid[a], vid[b])
    # boundary vertices on a circle keep the outer face outside
    ring = []
    for e in d.boundary:
        if vid[e] not in ring:
            ring.append(vid[e])
    if len(ring) >= 3:
        pos = nx.circular_layout(ring)
        if len(g) > len(ring):
            pos = _spring(g, pos, ring)
    else:
        pos = _spring(g, None, None) if len(g) > 1 else {v: (0.0, 0.0) for v in g}
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = (SIZE - 2 * MARGIN) / span
    return {v: (MARGIN + (p[0] - min(xs)) * scale, MARGIN + (p[1] - min(ys)) * scale) for v, p in pos.items()}


def _node_point(pb: PulledBackSeparator, node, pos, vid) -> tuple[float, float]:
    """Nodes are spread evenly along their edge in the order they occur."""
    key = node[1]
    a = pos[vid[key]]
    b = pos[vid[pb.diagram.alpha[key]]]
    along = pb.edge_nodes.get(key, [node])
    t = (along.index(node) + 1) / (len(along) + 1) if node in along else 0.5
    return a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t


def render_svg(d: DiscDiagram, x: TwoComplex, pb: PulledBackSeparator | None = None) -> str:
    vid = d.vertex_of()
    pos = _layout(d)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">', '<rect width="100%" height="100%" fill="white"/>']
    extreme = {c.face for c in extreme_cells(pb)} if pb is not None else set()
    for k, cell in enumerate(d.faces):
        pts = " ".join(f"{pos[vid[e]][0]:.1f},{pos[vid[e]][1]:.1f}" for e in cell.darts)
        fill = "#f6d7a7" if k in extreme else "#dfe9f5"
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="none" opacity="0.8"/>')
    for a, b in d.edges():
        p, q = pos[vid[a]], pos[vid[b]]
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        out.append(f'<line x1="{p[0]:.1f}" y1="{p[1]:.1f}" x2="{q[0]:.1f}" y2="{q[1]:.1f}" '
                   'stroke="black" stroke-width="1.5"/>')
        out.append(f'<text x="{mid[0]:.1f}" y="{mid[1]:.1f}" font-size="11" fill="#333">'
                   f'{escape(x.format((d.label[a],)))}</text>')
    if pb is not None:
        for s, t, _ in pb.arcs:
            p = _node_point(pb, s, pos, vid)
            q = _node_point(pb, t, pos, vid)
            out.append(f'<line x1="{p[0]:.1f}" y1="{p[1]:.1f}" x2="{q[0]:.1f}" y2="{q[1]:.1f}" '
                       'stroke="#c0392b" stroke-width="2" stroke-dasharray="4 2"/>')
        for node in pb.nodes:
            p = _node_point(pb, node, pos, vid)
            out.append(f'<circle cx="{p[0]:.1f}" cy="{p[1]:.1f}" r="3" fill="#c0392b"/>')
    for v, (px, py) in pos.items():
        out.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="3.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
