"""Pulling a separator back to a disc diagram and the structure checks that
run on the result: forest and leaf audit, connection graph, simple
connectivity of regions, outermost components, dangling subdiagrams and
extreme cells.

The diagram is cut into open cells: vertices, edge segments between
separator nodes, and per face the Z region and one cap region per chord.
Separator nodes and arcs form the graph Gamma'.  A union-find over the
complement cells gives the components of D minus Gamma'; each carries the
type (Y or Z) of the face regions it contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .complex import TwoComplex
from .diagrams import DiscDiagram
from .windmill import GENERATOR, Chord, SeparatorGraph

QUARTER = Fraction(1, 4)
Z_REGION = -1


def _effective_offset(sep: SeparatorGraph, gp_id: int) -> Fraction:
    g = sep.gamma_points[gp_id]
    if g.at_vertex:
        return QUARTER if g.offset == 0 else 1 - QUARTER
    return g.offset


def _face_chords(sep: SeparatorGraph, x_face: int) -> list[Chord]:
    """Chords of an X face with corner endpoints nudged onto the adjacent
    B side, next to the gamma point they stand for."""
    fd = sep.per_face[x_face]
    out = []
    for c in fd.chords:
        s, e = c.start, c.end
        if sep.kind == GENERATOR:
            s = (s - QUARTER) % fd.length
            e = (e + QUARTER) % fd.length
        if c.start_gp is None or c.end_gp is None:
            raise ValueError("chord endpoint without a gamma point cannot be pulled back")
        out.append(Chord(s, e, c.start_gp, c.end_gp, c.label))
    return out


@dataclass
class LocalChord:
    start: Fraction  # position on the diagram face, counterclockwise
    end: Fraction
    start_node: tuple
    end_node: tuple


def _in_arc(t: Fraction, s: Fraction, e: Fraction, n: int) -> bool:
    d = (t - s) % n
    return 0 < d < (e - s) % n


@dataclass
class PulledBackSeparator:
    diagram: DiscDiagram
    nodes: list[tuple]  # ("n", edge key, gamma point)
    arcs: list[tuple[tuple, tuple, tuple[int, int]]]  # (node, node, (face, chord))
    node_on_boundary: dict[tuple, bool]
    cell_class: dict[tuple, int]  # complement cell -> class id
    class_type: dict[int, str]  # class id -> "Y" / "Z" / "mixed"
    cells: nx.Graph  # closure adjacency between all cells, plus "ext"
    face_chords: dict[int, list[LocalChord]] = field(default_factory=dict)
    edge_nodes: dict[int, list[tuple]] = field(default_factory=dict)  # nodes along each key dart
    consistent: bool = True

    @property
    def gamma_graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.nodes)
        for a, b, key in self.arcs:
            g.add_edge(a, b, key=key)
        return g

    def classes(self) -> dict[int, set[tuple]]:
        out: dict[int, set[tuple]] = {}
        for c, k in self.cell_class.items():
            out.setdefault(k, set()).add(c)
        return out


def pullback_separator(d: DiscDiagram, x: TwoComplex, sep: SeparatorGraph) -> PulledBackSeparator:
    vid = d.vertex_of()
    key = {e: min(e, d.alpha[e]) for e in d.alpha}
    boundary_edges = {key[e] for e in d.boundary}

    # chords per diagram face, in face coordinates
    face_chords: dict[int, list[LocalChord]] = {}
    edge_nodes: dict[int, set[int]] = {}
    arcs = []
    for ci, cell in enumerate(d.faces):
        n = len(cell.darts)
        local = []
        for k, c in enumerate(_face_chords(sep, cell.x_face)):
            def to_face(t):
                side = int(t)
                pos = t - side
                if cell.orientation > 0:
                    j = (side - cell.offset) % n
                    return j + pos
                j = (cell.offset - side) % n
                return (j + 1 - pos) % n

            if cell.orientation > 0:
                ends = [(to_face(c.start), c.start_gp), (to_face(c.end), c.end_gp)]
            else:
                ends = [(to_face(c.end), c.end_gp), (to_face(c.start), c.start_gp)]
            nodes = []
            for t, gp in ends:
                dart = cell.darts[int(t)]
                edge_nodes.setdefault(key[dart], set()).add(gp)
                nodes.append(("n", key[dart], gp))
            local.append(LocalChord(ends[0][0], ends[1][0], nodes[0], nodes[1]))
            arcs.append((nodes[0], nodes[1], (ci, k)))
        face_chords[ci] = local

    # edge segments: sorted node offsets along the key dart
    def along_key(ekey, gp):
        q = _effective_offset(sep, gp)
        return q if d.label[ekey][1] > 0 else 1 - q

    seg_nodes: dict[int, list[int]] = {}
    for ekey in {key[e] for e in d.alpha}:
        gps = sorted(edge_nodes.get(ekey, ()), key=lambda g: along_key(ekey, g))
        seg_nodes[ekey] = gps

    def dart_positions(dart):
        """(node, position along the dart) for nodes on the dart's edge."""
        ekey = key[dart]
        out = []
        for g in seg_nodes[ekey]:
            q = along_key(ekey, g)
            out.append((("n", ekey, g), q if dart == ekey else 1 - q))
        out.sort(key=lambda p: p[1])
        return out

    def segment_id(dart, i):
        """i-th segment along the dart -> segment cell id."""
        ekey = key[dart]
        m = len(seg_nodes[ekey])
        return ("s", ekey, i if dart == ekey else m - i)

    # union-find over complement cells
    parent: dict[tuple, tuple] = {}

    def add(c):
        parent.setdefault(c, c)

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        add(a)
        add(b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    cells = nx.Graph()
    cells.add_node("ext")

    def region_at(ci, t, n):
        best, size = Z_REGION, None
        for k, lc in enumerate(face_chords[ci]):
            if _in_arc(t, lc.start, lc.end, n):
                s = (lc.end - lc.start) % n
                if size is None or s < size:
                    best, size = k, s
        return best

    def outer_of(ci, k, n):
        """Region on the far side of chord k."""
        lc = face_chords[ci][k]
        best, size = Z_REGION, None
        for j, other in enumerate(face_chords[ci]):
            if j == k:
                continue
            if _in_arc(lc.start, other.start, other.end, n) and _in_arc(lc.end, other.start, other.end, n):
                s = (other.end - other.start) % n
                if size is None or s < size:
                    best, size = j, s
        return best

    face_type: dict[tuple, str] = {}
    for ci, cell in enumerate(d.faces):
        n = len(cell.darts)
        chords = face_chords[ci]
        if chords:
            z_type = "Z"
        else:
            in_a = all(x.faces[cell.x_face].boundary[i][0] in sep.a_edges for i in range(n))
            z_type = "Y" if in_a and sep.a_edges else "Z"
        add(("f", ci, Z_REGION))
        face_type[("f", ci, Z_REGION)] = z_type
        for k in range(len(chords)):
            add(("f", ci, k))
            face_type[("f", ci, k)] = "Y"
            arc = ("a", ci, k)
            cells.add_edge(arc, ("f", ci, k))
            cells.add_edge(arc, ("f", ci, outer_of(ci, k, n)))
            cells.add_edge(arc, chords[k].start_node)
            cells.add_edge(arc, chords[k].end_node)
            for nd in (chords[k].start_node, chords[k].end_node):
                cells.add_edge(nd, ("f", ci, k))
                cells.add_edge(nd, ("f", ci, outer_of(ci, k, n)))
        for j, dart in enumerate(cell.darts):
            v = ("v", vid[dart])
            add(v)
            reg = ("f", ci, region_at(ci, Fraction(j), n))
            union(v, reg)
            cells.add_edge(v, reg)
            pts = dart_positions(dart)
            bounds = [Fraction(0)] + [p for _, p in pts] + [Fraction(1)]
            for i in range(len(pts) + 1):
                mid = j + (bounds[i] + bounds[i + 1]) / 2
                seg = segment_id(dart, i)
                reg = ("f", ci, region_at(ci, mid, n))
                union(seg, reg)
                cells.add_edge(seg, reg)

    # vertices and segments meeting at the ends of every edge
    for dart in d.alpha:
        ekey = key[dart]
        if dart != ekey:
            continue
        m = len(seg_nodes[ekey])
        tail, head = ("v", vid[dart]), ("v", vid[d.alpha[dart]])
        first, last = ("s", ekey, 0), ("s", ekey, m)
        for c in (tail, head, first, last):
            add(c)
        union(tail, first)
        union(head, last)
        cells.add_edge(tail, first)
        cells.add_edge(head, last)
        nodes_here = [("n", ekey, g) for g in seg_nodes[ekey]]
        for i, nd in enumerate(nodes_here):
            cells.add_edge(nd, ("s", ekey, i))
            cells.add_edge(nd, ("s", ekey, i + 1))
        if ekey in boundary_edges:
            for i in range(m + 1):
                cells.add_edge("ext", ("s", ekey, i))
            for nd in nodes_here:
                cells.add_edge("ext", nd)
            cells.add_edge("ext", tail)
            cells.add_edge("ext", head)

    cell_class = {c: find(c) for c in parent}
    ids = {r: i for i, r in enumerate(sorted(set(cell_class.values()), key=repr))}
    cell_class = {c: ids[r] for c, r in cell_class.items()}
    class_type: dict[int, str] = {}
    consistent = True
    for c, t in face_type.items():
        k = cell_class[c]
        if class_type.setdefault(k, t) != t:
            class_type[k] = "mixed"
            consistent = False
    for k in set(cell_class.values()):
        class_type.setdefault(k, "Z")
    nodes = sorted({nd for a, b, _ in arcs for nd in (a, b)})
    on_b = {nd: nd[1] in boundary_edges for nd in nodes}
    along = {k: [("n", k, g) for g in gps] for k, gps in seg_nodes.items()}
    return PulledBackSeparator(d, nodes, arcs, on_b, cell_class, class_type, cells, face_chords, along, consistent)


# ----------------------------------------------------------------- checks

@dataclass(frozen=True)
class ForestReport:
    is_forest: bool
    all_leaves_on_boundary: bool


def forest_check(pb: PulledBackSeparator) -> ForestReport:
    g = pb.gamma_graph
    forest = all(
        g.subgraph(comp).number_of_edges() == len(comp) - 1 for comp in nx.connected_components(g)
    )
    leaves_ok = all(pb.node_on_boundary[nd] for nd in g.nodes if g.degree(nd) <= 1)
    return ForestReport(forest, leaves_ok)


@dataclass
class ConnectionGraph:
    graph: nx.Graph
    gamma_components: list[frozenset]
    region_classes: list[int]

    @property
    def is_tree(self) -> bool:
        return nx.is_tree(self.graph) if self.graph.number_of_nodes() else True


def _gamma_components(pb: PulledBackSeparator) -> list[frozenset]:
    g = pb.gamma_graph
    comps = []
    for comp in nx.connected_components(g):
        arcs = {("a",) + key for a, b, key in pb.arcs if a in comp}
        comps.append(frozenset(comp) | frozenset(arcs))
    return sorted(comps, key=lambda c: sorted(map(repr, c)))


def connection_graph(pb: PulledBackSeparator) -> ConnectionGraph:
    """Bipartite: components of Gamma' and components of D minus Gamma',
    adjacent when the Gamma' component meets the closure of the region."""
    comps = _gamma_components(pb)
    classes = sorted(set(pb.cell_class.values()))
    g = nx.Graph()
    g.add_nodes_from(("R", k) for k in classes)
    for i, comp in enumerate(comps):
        g.add_node(("G", i))
        for cell in comp:
            for nb in pb.cells.neighbors(cell):
                if nb in pb.cell_class:
                    g.add_edge(("G", i), ("R", pb.cell_class[nb]))
    return ConnectionGraph(g, comps, classes)


def region_simply_connected(pb: PulledBackSeparator, k: int) -> bool:
    """An open region of the disc is simply connected iff everything outside
    it, together with the exterior of the disc, is connected."""
    inside = {c for c, kk in pb.cell_class.items() if kk == k}
    rest = pb.cells.subgraph([c for c in pb.cells.nodes if c not in inside])
    return nx.is_connected(rest)


@dataclass(frozen=True)
class SimpleConnectivityReport:
    regions_ok: bool
    gamma_ok: bool
    failures: tuple


def simple_connectivity(pb: PulledBackSeparator) -> SimpleConnectivityReport:
    bad = tuple(k for k in sorted(set(pb.cell_class.values())) if not region_simply_connected(pb, k))
    return SimpleConnectivityReport(not bad, forest_check(pb).is_forest, bad)


def z_components(pb: PulledBackSeparator) -> list[int]:
    return sorted(k for k, t in pb.class_type.items() if t == "Z")


@dataclass(frozen=True)
class Outermost:
    component: int
    separator: tuple  # arcs of the Gamma' component cutting it off; () when Z' is connected


def outermost_components(pb: PulledBackSeparator) -> list[Outermost]:
    zs = z_components(pb)
    if len(zs) <= 1:
        return [Outermost(k, ()) for k in zs]
    out = []
    for z0 in zs:
        inside = {c for c, kk in pb.cell_class.items() if kk == z0}
        rest = pb.cells.subgraph([c for c in pb.cells.nodes if c not in inside and c != "ext"])
        comp_of = {}
        for i, comp in enumerate(nx.connected_components(rest)):
            for c in comp:
                comp_of[c] = i
        homes = {comp_of[c] for c, kk in pb.cell_class.items() if kk in zs and kk != z0}
        if len(homes) == 1:
            home = homes.pop()
            sep = ()
            for comp in _gamma_components(pb):
                cells_here = [c for c in comp if c[0] == "a"]
                touches = any(pb.cell_class.get(nb) == z0 for c in comp for nb in pb.cells.neighbors(c))
                if touches and any(comp_of.get(c) == home for c in comp):
                    sep = tuple(sorted(cells_here))
                    break
            out.append(Outermost(z0, sep))
    return out


# ------------------------------------------------------------- dangling

@dataclass
class DanglingReport:
    nonsingular: bool
    cut_vertices: list[int]
    dangling: list[frozenset[int]]  # face indices of each dangling subdiagram


def _incidence(d: DiscDiagram) -> nx.Graph:
    vid = d.vertex_of()
    g = nx.Graph()
    for e in d.alpha:
        k = min(e, d.alpha[e])
        g.add_edge(("v", vid[e]), ("e", k))
    for i, f in enumerate(d.faces):
        for e in f.darts:
            g.add_edge(("f", i), ("e", min(e, d.alpha[e])))
    return g


def dangling_subdiagrams(d: DiscDiagram) -> DanglingReport:
    g = _incidence(d)
    cuts = sorted(v for v in nx.articulation_points(g) if v[0] == "v")
    if not cuts:
        return DanglingReport(True, [], [])
    rest = g.subgraph([c for c in g.nodes if c not in set(cuts)])
    dangling = []
    for comp in nx.connected_components(rest):
        attach = {c for c in cuts if any(nb in comp for nb in g.neighbors(c))}
        faces = frozenset(c[1] for c in comp if c[0] == "f")
        if len(attach) == 1 and faces:
            dangling.append(faces)
    dangling.sort(key=sorted)
    return DanglingReport(False, [c[1] for c in cuts], dangling)


# ----------------------------------------------------------------- extreme

@dataclass(frozen=True)
class ExtremeCell:
    face: int
    s_darts: tuple[int, ...]
    q_darts: tuple[int, ...]
    z_pieces: int


def _z_pieces_along(pb: PulledBackSeparator, darts: list[int], vid: dict[int, int]) -> int:
    """Non-trivial components of a boundary path intersected with the
    preimage of Z (Z classes plus Gamma' nodes).  Points alone do not
    count; pieces meeting at a shared vertex are one piece."""
    d = pb.diagram
    in_z = {c for c, k in pb.cell_class.items() if pb.class_type[k] == "Z"}
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    segments = []
    for dart in darts:
        ekey = min(dart, d.alpha[dart])
        nodes = list(pb.edge_nodes[ekey])
        segs = [("s", ekey, i) for i in range(len(nodes) + 1)]
        if dart != ekey:
            segs.reverse()
            nodes.reverse()
        seq = [("v", vid[dart])]
        for i, sg in enumerate(segs):
            seq.append(sg)
            if i < len(nodes):
                seq.append(nodes[i])
        seq.append(("v", vid[d.alpha[dart]]))
        for c in seq:
            if c in in_z or c[0] == "n":
                parent.setdefault(c, c)
        for a, b in zip(seq, seq[1:]):
            if a in parent and b in parent:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
        segments.extend(sg for sg in segs if sg in in_z)
    return len({find(sg) for sg in segments})


def extreme_cells(pb: PulledBackSeparator) -> list[ExtremeCell]:
    """Faces whose boundary splits as S Q, Q a nonempty run of consecutive
    boundary darts of the diagram and S meeting the preimage of Z in at most
    one non-trivial piece."""
    d = pb.diagram
    vid = d.vertex_of()
    bpos = {e: i for i, e in enumerate(d.boundary)}
    m = len(d.boundary)
    out = []
    for ci, cell in enumerate(d.faces):
        ds = cell.darts
        n = len(ds)
        on = [ds[j] in bpos for j in range(n)]
        if not any(on):
            continue
        runs = []
        if all(on) and all(bpos[ds[(j + 1) % n]] == (bpos[ds[j]] + 1) % m for j in range(n)):
            runs.append((0, n))
        else:
            for j in range(n):
                if not on[j]:
                    continue
                prev = ds[j - 1]
                if on[j - 1] and bpos[ds[j]] == (bpos[prev] + 1) % m:
                    continue
                r = 1
                while r < n and on[(j + r) % n] and bpos[ds[(j + r) % n]] == (bpos[ds[(j + r - 1) % n]] + 1) % m:
                    r += 1
                runs.append((j, r))
        best = None
        for j, r in runs:
            q = tuple(ds[(j + i) % n] for i in range(r))
            s = [ds[(j + r + i) % n] for i in range(n - r)]
            pieces = _z_pieces_along(pb, s, vid) if s else 0
            if pieces <= 1 and (best is None or pieces < best.z_pieces):
                best = ExtremeCell(ci, tuple(s), q, pieces)
        if best is not None:
            out.append(best)
    return out


@dataclass
class StructureReport:
    area: int
    forest: ForestReport
    tree_like: bool
    simply_connected: bool
    consistent: bool
    nonsingular: bool
    z_components: int
    outermost: int
    extreme: int
    dangling: int

    def violations(self) -> list[str]:
        v = []
        if not (self.forest.is_forest and self.forest.all_leaves_on_boundary):
            v.append("forest")
        if not self.tree_like:
            v.append("tree-like")
        if not self.simply_connected:
            v.append("simply-connected")
        if self.nonsingular and self.z_components > 1 and self.outermost < 2:
            v.append("outermost")
        if self.area >= 2 and self.extreme < 2:
            v.append("extreme")
        if not self.nonsingular and self.dangling < 2:
            v.append("dangling")
        return v


def structure_report(d: DiscDiagram, x: TwoComplex, sep: SeparatorGraph) -> StructureReport:
    pb = pullback_separator(d, x, sep)
    dr = dangling_subdiagrams(d)
    sc = simple_connectivity(pb)
    return StructureReport(
        area=d.area,
        forest=forest_check(pb),
        tree_like=connection_graph(pb).is_tree,
        simply_connected=sc.regions_ok and sc.gamma_ok,
        consistent=pb.consistent,
        nonsingular=dr.nonsingular,
        z_components=len(z_components(pb)),
        outermost=len(outermost_components(pb)),
        extreme=len(extreme_cells(pb)),
        dangling=len(dr.dangling),
    )
