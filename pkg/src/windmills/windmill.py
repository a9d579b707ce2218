"""Separator graphs for the boundary and generator constructions, the
windmill predicate, essence graphs and splitting-windmill certificates.

A separator is stored as chord data per face.  Positions on the boundary
circle of a face of length ``L`` are fractions ``t`` in ``[0, L)``: side ``i``
covers ``[i, i + 1]`` and corner ``i`` (the tail of side ``i``) sits at
``t = i``.  Every chord cuts off a cap, the counterclockwise arc from
``start`` to ``end``; the cap lies on the Y side and everything else in the
face is Z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex import TwoComplex, find_redundant_faces, rotation_between
from .folding import LabeledGraph, is_pi1_injective, subdivide_by_words
from .words import Word

BOUNDARY = "boundary"
GENERATOR = "generator"

ONE_THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


@dataclass(frozen=True)
class GammaPoint:
    id: int
    edge: int
    offset: Fraction  # along the edge in its own direction
    at_vertex: bool = False  # sits at an end of the edge (generator graphs)


@dataclass(frozen=True)
class Chord:
    start: Fraction
    end: Fraction
    start_gp: int | None
    end_gp: int | None
    label: Word  # the A-path the chord runs parallel to, start to end


@dataclass(frozen=True)
class ChordDiagram:
    face: int
    length: int
    chords: tuple[Chord, ...]
    isolated_corners: tuple[int, ...] = ()

    def arc_length(self, c: Chord) -> Fraction:
        return (c.end - c.start) % self.length

    def in_cap(self, c: Chord, t: Fraction) -> bool:
        """Strictly inside the cap arc of ``c``."""
        d = (t - c.start) % self.length
        return 0 < d < self.arc_length(c)

    def region_at(self, t: Fraction) -> int:
        """Region index for a boundary point that is not a chord endpoint:
        ``i`` for the cap of chord ``i``, ``-1`` for the Z region."""
        for i, c in enumerate(self.chords):
            if self.in_cap(c, t):
                return i
        return -1

    def endpoints(self) -> set[Fraction]:
        return {c.start % self.length for c in self.chords} | {c.end % self.length for c in self.chords}


@dataclass
class SeparatorGraph:
    kind: str
    complex: TwoComplex
    a_edges: frozenset[int]
    a_vertices: frozenset[int]
    gamma_points: list[GammaPoint]
    per_face: list[ChordDiagram]
    essence: LabeledGraph | None = None
    essence_classes: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)

    def gp_lookup(self) -> dict[tuple[int, Fraction], GammaPoint]:
        return {(g.edge, g.offset): g for g in self.gamma_points}

    def chord_edges(self) -> list[tuple[int, int, Word, tuple[int, int]]]:
        out = []
        for fd in self.per_face:
            for i, c in enumerate(fd.chords):
                out.append((c.start_gp, c.end_gp, c.label, (fd.face, i)))
        return out

    def abstract_counts(self) -> tuple[int, int]:
        return len(self.gamma_points), sum(len(fd.chords) for fd in self.per_face)

    def components(self) -> int:
        parent = {g.id: g.id for g in self.gamma_points}

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for s, t, _, _ in self.chord_edges():
            if s is not None and t is not None:
                parent[find(s)] = find(t)
        return len({find(v) for v in parent})

    def word_graph(self) -> tuple[list[int], list[tuple[int, int, Word]]]:
        return [g.id for g in self.gamma_points], [(s, t, w) for s, t, w, _ in self.chord_edges()]


def _closed_a(x: TwoComplex, a_edges: Iterable[int], a_vertices: Iterable[int] | None) -> tuple[frozenset, frozenset]:
    a_edges = frozenset(a_edges)
    ends = {v for e in a_edges for v in x.edges[e]}
    if a_vertices is None:
        return a_edges, frozenset(ends)
    a_vertices = frozenset(a_vertices)
    if not ends <= a_vertices:
        raise ValueError("A is not a subcomplex: it omits an endpoint of one of its edges")
    return a_edges, a_vertices


def build_boundary_graph(x: TwoComplex, a_edges: Iterable[int], a_vertices: Iterable[int] | None = None) -> SeparatorGraph:
    """The boundary of a regular neighbourhood of A, as chords.

    One chord per component of ``A`` meeting a face boundary, running from
    the non-A side before the component to the non-A side after it.  Gamma
    points sit at offset 1/3 (near the edge's tail) or 2/3 (near its head) of
    non-A edges with an endpoint in A.
    """
    a_edges, a_vertices = _closed_a(x, a_edges, a_vertices)
    gps: list[GammaPoint] = []
    for e, (s, t) in enumerate(x.edges):
        if e in a_edges:
            continue
        if s in a_vertices:
            gps.append(GammaPoint(len(gps), e, ONE_THIRD))
        if t in a_vertices:
            gps.append(GammaPoint(len(gps), e, TWO_THIRDS))
    lookup = {(g.edge, g.offset): g.id for g in gps}

    per_face = []
    for fi, f in enumerate(x.faces):
        w = f.boundary
        n = len(w)
        corner_in = [x.tail(w[i]) in a_vertices for i in range(n)]
        side_in = [w[i][0] in a_edges for i in range(n)]
        items = []
        for i in range(n):
            items.append(corner_in[i])
            items.append(side_in[i])
        chords = []
        if any(items) and not all(items):
            m = 2 * n
            first = next(i for i in range(m) if items[i] and not items[i - 1])
            i = first
            while True:
                if items[i % m] and not items[(i - 1) % m]:
                    j = i
                    while items[(j + 1) % m]:
                        j += 1
                    cs, ce = (i % m) // 2, (j % m) // 2
                    label = tuple(w[k % n] for k in range(cs, cs + ((ce - cs) % n)))
                    before = w[(cs - 1) % n]
                    after = w[ce % n]
                    g0 = lookup[(before[0], TWO_THIRDS if before[1] > 0 else ONE_THIRD)]
                    g1 = lookup[(after[0], ONE_THIRD if after[1] > 0 else TWO_THIRDS)]
                    chords.append(Chord(Fraction((cs - 1) % n) + TWO_THIRDS, Fraction(ce % n) + ONE_THIRD, g0, g1, label))
                    i = j + 1
                else:
                    i += 1
                if i - first >= m:
                    break
        per_face.append(ChordDiagram(fi, n, tuple(chords)))
    return SeparatorGraph(BOUNDARY, x, a_edges, a_vertices, gps, per_face)


def build_generator_graph(x: TwoComplex, a_edges: Iterable[int]) -> SeparatorGraph:
    """Chords parallel to the maximal A-blocks of each face boundary.

    Chord ends live at the ends of the neighbouring B-edges, so B-edges are
    identified across faces according to their orientations.
    """
    a_edges = frozenset(a_edges)
    a_vertices = frozenset(v for e in a_edges for v in x.edges[e])
    gps: list[GammaPoint] = []
    for e in range(len(x.edges)):
        if e not in a_edges:
            gps.append(GammaPoint(len(gps), e, Fraction(0), True))
            gps.append(GammaPoint(len(gps), e, Fraction(1), True))
    lookup = {(g.edge, g.offset): g.id for g in gps}

    per_face = []
    for fi, f in enumerate(x.faces):
        w = f.boundary
        n = len(w)
        side_in = [w[i][0] in a_edges for i in range(n)]
        chords = []
        isolated = tuple(i for i in range(n) if not side_in[i] and not side_in[i - 1])
        if any(side_in) and not all(side_in):
            starts = [i for i in range(n) if side_in[i] and not side_in[i - 1]]
            for s in starts:
                e = s
                while side_in[(e + 1) % n]:
                    e += 1
                before = w[(s - 1) % n]
                after = w[(e + 1) % n]
                g0 = lookup[(before[0], Fraction(1) if before[1] > 0 else Fraction(0))]
                g1 = lookup[(after[0], Fraction(0) if after[1] > 0 else Fraction(1))]
                label = tuple(w[k % n] for k in range(s, e + 1))
                chords.append(Chord(Fraction(s), Fraction((e + 1) % n), g0, g1, label))
        per_face.append(ChordDiagram(fi, n, tuple(chords), isolated))
    return SeparatorGraph(GENERATOR, x, a_edges, a_vertices, gps, per_face)


def linked(fd: ChordDiagram, c1: Chord, c2: Chord) -> bool:
    """True when the chords cross or share an endpoint."""
    ends1 = {c1.start % fd.length, c1.end % fd.length}
    if {c2.start % fd.length, c2.end % fd.length} & ends1:
        return True
    inside = [fd.in_cap(c1, c2.start), fd.in_cap(c1, c2.end)]
    return inside[0] != inside[1]


@dataclass(frozen=True)
class FaceVerdict:
    face: int
    chords: int
    unlinked: bool
    z_connected: bool

    @property
    def ok(self) -> bool:
        return self.chords >= 2 and self.unlinked and self.z_connected


def check_windmill(x: TwoComplex, sep: SeparatorGraph) -> tuple[list[FaceVerdict], bool]:
    """A face passes when it has at least two pairwise unlinked chords whose
    caps are disjoint, which leaves a single connected Z region."""
    verdicts = []
    for fd in sep.per_face:
        cs = fd.chords
        unlinked = all(not linked(fd, a, b) for i, a in enumerate(cs) for b in cs[i + 1:])
        nested = any(fd.in_cap(a, b.start) for a in cs for b in cs if a is not b)
        verdicts.append(FaceVerdict(fd.face, len(cs), unlinked, unlinked and not nested))
    return verdicts, all(v.ok for v in verdicts)


def _shifted(fd: ChordDiagram, k: int) -> list[tuple]:
    """Chord keys after moving every position by ``-k`` (the diagram seen
    from a boundary rotated by ``k``)."""
    return sorted(((c.start - k) % fd.length, (c.end - k) % fd.length, c.label) for c in fd.chords)


def compute_essence(x: TwoComplex, sep: SeparatorGraph) -> tuple[LabeledGraph, dict[tuple[int, int], tuple[int, int]]]:
    """Quotient the chords by redundancy and proper-power rotation, keep one
    representative per class and subdivide the result into a letter graph.

    Returns the essence graph and a map from each chord ``(face, index)`` to
    its class representative.
    """
    keys = {}
    for fd in sep.per_face:
        for i, c in enumerate(fd.chords):
            keys[(fd.face, i)] = (c.start % fd.length, c.end % fd.length, c.label)
    parent = {k: k for k in keys}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    def index_of(face, key):
        for (f, i), kk in keys.items():
            if f == face and kk == key:
                return (f, i)
        return None

    for fd in sep.per_face:
        face = x.faces[fd.face]
        if face.exponent > 1:
            step = face.period_length
            for i, c in enumerate(fd.chords):
                moved = ((c.start + step) % fd.length, (c.end + step) % fd.length, c.label)
                j = index_of(fd.face, moved)
                if j is None:
                    raise AssertionError(f"chord diagram of face {fd.face} is not invariant under its period rotation")
                union((fd.face, i), j)

    for cls in find_redundant_faces(x):
        f0 = cls[0]
        for g in cls[1:]:
            k = rotation_between(x.faces[f0].boundary, x.faces[g].boundary)
            fd0, fdg = sep.per_face[f0], sep.per_face[g]
            if _shifted(fd0, k) != sorted(keys[(g, i)] for i in range(len(fdg.chords))):
                continue
            for i, c in enumerate(fd0.chords):
                moved = ((c.start - k) % fd0.length, (c.end - k) % fd0.length, c.label)
                union((f0, i), index_of(g, moved))

    classes = {k: find(k) for k in keys}
    reps = sorted(set(classes.values()))
    edges = []
    for f, i in reps:
        c = sep.per_face[f].chords[i]
        edges.append((c.start_gp, c.end_gp, c.label))
    graph = subdivide_by_words([g.id for g in sep.gamma_points], edges)
    sep.essence = graph
    sep.essence_classes = classes
    return graph, classes


CERTIFIED = "Certified"
REFUTED = "Refuted"
UNKNOWN = "Unknown"


@dataclass
class SplittingVerdict:
    verdict: str
    windmill: bool
    essence_injective: bool | None
    inclusion: str
    witness: tuple | None = None
    reasons: list[str] = field(default_factory=list)


def certify_splitting_windmill(x: TwoComplex, sep: SeparatorGraph, inclusion_verdict: str) -> SplittingVerdict:
    """Certified iff the windmill predicate holds, the essence folds without
    rank loss, and the inclusion of A into X is certified by some route."""
    _, ok = check_windmill(x, sep)
    if not ok:
        return SplittingVerdict(UNKNOWN, False, None, inclusion_verdict, reasons=["windmill predicate fails"])
    graph, _ = compute_essence(x, sep)
    inj = is_pi1_injective(graph)
    if not inj.injective:
        return SplittingVerdict(REFUTED, True, False, inclusion_verdict, inj.witness,
                                ["essence map is not pi_1-injective"])
    if inclusion_verdict != CERTIFIED:
        return SplittingVerdict(UNKNOWN, True, True, inclusion_verdict,
                                reasons=["inclusion of A is not certified pi_1-injective"])
    return SplittingVerdict(CERTIFIED, True, True, inclusion_verdict)


# ------------------------------------------------------------ file overlays

def _parse_position(tok: str) -> Fraction:
    if tok.startswith("c"):
        return Fraction(int(tok[1:]))
    side, _, frac = tok.partition("@")
    return Fraction(int(side)) + Fraction(frac)


def parse_overlay(x: TwoComplex, text: str, edge_ids: Sequence[str] | None = None) -> SeparatorGraph:
    """Read ``gp <edge> <num>/<den>`` and ``chord <face> <end> <end> <zside>``
    records.  An end is ``c<k>`` (corner k) or ``<side>@<num>/<den>``; zside
    ``ccw`` puts Y on the counterclockwise arc from the first end to the
    second, ``cw`` on the other arc.  Labels are read off the guarded arc.
    """
    names = list(edge_ids) if edge_ids is not None else list(x.names)
    gps: list[GammaPoint] = []
    chords: dict[int, list[Chord]] = {i: [] for i in range(len(x.faces))}
    face_ids: dict[str, int] = {}
    for raw in text.splitlines():
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] == "f":
            face_ids[parts[1]] = len(face_ids)
        elif parts[0] == "gp":
            gps.append(GammaPoint(len(gps), names.index(parts[1]), Fraction(parts[2])))
    lookup = {(g.edge, g.offset): g.id for g in gps}
    for raw in text.splitlines():
        parts = raw.split("#", 1)[0].split()
        if not parts or parts[0] != "chord":
            continue
        fi = face_ids.get(parts[1], None)
        if fi is None:
            fi = int(parts[1])
        a, b = _parse_position(parts[2]), _parse_position(parts[3])
        if parts[4] == "cw":
            a, b = b, a
        w = x.faces[fi].boundary
        n = len(w)

        def gp_at(t):
            side = int(t) % n
            pos = t - int(t)
            if pos == 0:
                return None
            e, sgn = w[side]
            return lookup.get((e, pos if sgn > 0 else 1 - pos))

        first = int(a) + (1 if a != int(a) else 0)
        last = int(b)
        span = (last - first) % n
        label = tuple(w[(first + k) % n] for k in range(span))
        chords[fi].append(Chord(a % n, b % n, gp_at(a), gp_at(b), label))
    per_face = [ChordDiagram(i, len(f.boundary), tuple(chords[i])) for i, f in enumerate(x.faces)]
    return SeparatorGraph("overlay", x, frozenset(), frozenset(), gps, per_face)
