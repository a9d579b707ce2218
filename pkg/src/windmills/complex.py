"""Combinatorial 2-complexes: standard complexes of presentations, general
complexes loaded from files, and redundant-face detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .words import Letter, Presentation, Word, inverse, is_cyclically_reduced, period_decompose, rotate


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    boundary: Word  # closed edge path; letters are (edge id, sign)
    period_length: int
    exponent: int

    def __len__(self):
        return len(self.boundary)


@dataclass(frozen=True)
class TwoComplex:
    """Vertices, directed edges ``(src, dst)`` and faces with boundary words.

    Letters of face boundaries are directed edges ``(edge id, sign)``.  For a
    standard complex edge ``i`` is generator ``i`` and ``names`` holds the
    generator names.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[Face, ...]
    names: tuple[str, ...] = ()
    presentation: Presentation | None = None
    vertex_names: tuple[str, ...] = ()

    def __post_init__(self):
        for f in self.faces:
            w = f.boundary
            if not w:
                raise ComplexError("face with empty boundary")
            if not is_cyclically_reduced(w):
                raise ComplexError("face boundary is not an immersed cycle")
            for a, b in zip(w, w[1:] + w[:1]):
                if self.head(a) != self.tail(b):
                    raise ComplexError("face boundary is not a closed edge path")

    def tail(self, x: Letter) -> int:
        s, t = self.edges[x[0]]
        return s if x[1] > 0 else t

    def head(self, x: Letter) -> int:
        s, t = self.edges[x[0]]
        return t if x[1] > 0 else s

    def edge_name(self, e: int) -> str:
        return self.names[e] if self.names else f"e{e}"

    def edge_id(self, name: str) -> int:
        return list(self.names).index(name)

    def vertex_id(self, name: str) -> int:
        if self.vertex_names:
            return list(self.vertex_names).index(name)
        return int(name)

    def format(self, w: Sequence[Letter]) -> str:
        from .words import format_word

        return format_word(w, self.names or [f"e{i}" for i in range(len(self.edges))])

    @property
    def is_standard(self) -> bool:
        return self.presentation is not None

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def readings(self):
        """All positioned readings ``(face, offset, orientation, word)``: every
        rotation of every boundary and of its inverse.  With orientation -1
        the word starting at ``offset`` reads side ``offset`` backwards, then
        ``offset - 1`` and so on."""
        out = []
        for fi, f in enumerate(self.faces):
            w = f.boundary
            n = len(w)
            for o in range(n):
                out.append((fi, o, 1, rotate(w, o)))
            for o in range(n):
                out.append((fi, o, -1, tuple((w[(o - j) % n][0], -w[(o - j) % n][1]) for j in range(n))))
        return out


def build_standard_complex(p: Presentation) -> TwoComplex:
    faces = []
    for r, per, exp in zip(p.relators, p.periods, p.exponents):
        faces.append(Face(r, len(per), exp))
    return TwoComplex(
        vertices=(0,),
        edges=tuple((0, 0) for _ in p.generators),
        faces=tuple(faces),
        names=tuple(p.generators),
        presentation=p,
    )


def make_complex(vertices, edges, boundaries, names=(), vertex_names=()) -> TwoComplex:
    faces = []
    for w in boundaries:
        w = tuple(w)
        per, exp = period_decompose(w)
        faces.append(Face(w, len(per), exp))
    return TwoComplex(tuple(vertices), tuple(edges), tuple(faces), tuple(names), vertex_names=tuple(vertex_names))


def parse_complex(text: str) -> TwoComplex:
    """Line format: ``v <id>``, ``e <id> <src> <dst>``, ``f <id> <signed edges>``.

    Signed edges are edge ids with an optional leading ``-``.  Ids are
    arbitrary tokens; they are renumbered densely in order of appearance and
    the originals kept as names.
    """
    vids: dict[str, int] = {}
    eids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    faces: list[list[Letter]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "v" and len(parts) == 2:
                vids.setdefault(parts[1], len(vids))
            elif kind == "e" and len(parts) == 4:
                if parts[1] in eids:
                    raise ComplexError(f"line {lineno}: duplicate edge {parts[1]}")
                s, t = (vids[x] for x in parts[2:4])
                eids[parts[1]] = len(edges)
                edges.append((s, t))
            elif kind == "f" and len(parts) >= 3:
                w = []
                for tok in parts[2:]:
                    sign = -1 if tok.startswith("-") else 1
                    w.append((eids[tok.lstrip("-+")], sign))
                faces.append(w)
            elif kind in ("gp", "chord", "A", "B"):
                continue  # overlay records, read by the windmill loader
            else:
                raise ComplexError(f"line {lineno}: cannot parse {raw!r}")
        except KeyError as exc:
            raise ComplexError(f"line {lineno}: unknown id {exc.args[0]}") from None
    names = [None] * len(eids)
    for k, i in eids.items():
        names[i] = k
    vnames = sorted(vids, key=vids.get)
    return make_complex(range(len(vids)), edges, faces, names, vnames)


def parse_subcomplex(x: TwoComplex, text: str) -> tuple[frozenset[int], frozenset[int] | None]:
    """Read ``A edges <ids>`` and ``A vertices <ids>`` records.  Returns
    ``(edges, vertices)``; vertices is None when no vertex record is given,
    meaning "the endpoints of the edges"."""
    edges: set[int] = set()
    vertices: set[int] | None = None
    for raw in text.splitlines():
        parts = raw.split("#", 1)[0].split()
        if len(parts) < 2 or parts[0] != "A":
            continue
        if parts[1] == "edges":
            edges.update(x.edge_id(t) for t in parts[2:])
        elif parts[1] == "vertices":
            vertices = (vertices or set()) | {x.vertex_id(t) for t in parts[2:]}
        else:
            raise ComplexError(f"cannot parse {raw!r}")
    return frozenset(edges), None if vertices is None else frozenset(vertices)


def complex_from_faces(boundaries: Sequence[Word], n_edges: int) -> TwoComplex:
    """A one-vertex complex with the given boundary words."""
    return make_complex((0,), [(0, 0)] * n_edges, boundaries)


def find_redundant_faces(x: TwoComplex) -> list[list[int]]:
    """Classes of faces whose boundary cycles agree up to rotation, with
    matching orientation."""
    classes: dict[Word, list[int]] = {}
    for i, f in enumerate(x.faces):
        key = min(rotate(f.boundary, k) for k in range(len(f.boundary)))
        classes.setdefault(key, []).append(i)
    return sorted(classes.values())


def rotation_between(u: Word, v: Word) -> int | None:
    """Smallest ``k`` with ``rotate(u, k) == v``."""
    if len(u) != len(v):
        return None
    for k in range(len(u) or 1):
        if rotate(u, k) == v:
            return k
    return None


def polygon(n: int) -> TwoComplex:
    """The n-gon: n vertices, n edges ``i -> i+1`` and one face."""
    return make_complex(range(n), [(i, (i + 1) % n) for i in range(n)], [[(i, 1) for i in range(n)]],
                        [f"e{i + 1}" for i in range(n)])


