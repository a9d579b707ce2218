"""Van Kampen disc diagrams as combinatorial maps: validation, face gluing,
minimal-area enumeration and cancellable-pair surgery.

Darts carry a letter of the complex (a directed edge).  ``alpha`` reverses a
dart.  Each inner face lists its darts counterclockwise (face on the left);
the boundary is the list of darts with the disc on their left, read
counterclockwise.  The outer face is implied by the boundary: its darts are
the reverses of boundary darts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import TwoComplex
from .words import Letter, Word, cyclic_reduce, inverse, inverse_letter, canonical_cyclic

OUTER = -1


@dataclass(frozen=True)
class FaceCell:
    x_face: int
    offset: int
    orientation: int
    darts: tuple[int, ...]


def reading(x: TwoComplex, face: int, offset: int, orientation: int) -> Word:
    w = x.faces[face].boundary
    n = len(w)
    if orientation > 0:
        return tuple(w[(offset + j) % n] for j in range(n))
    return tuple(inverse_letter(w[(offset - j) % n]) for j in range(n))


@dataclass
class DiscDiagram:
    alpha: dict[int, int]
    label: dict[int, Letter]
    faces: list[FaceCell]
    boundary: tuple[int, ...]

    # ----------------------------------------------------------- structure
    @property
    def area(self) -> int:
        return len(self.faces)

    def darts(self) -> list[int]:
        return sorted(self.alpha)

    def face_of(self) -> dict[int, int]:
        out = {d: OUTER for d in self.alpha}
        for i, f in enumerate(self.faces):
            for d in f.darts:
                out[d] = i
        return out

    def phi(self) -> dict[int, int]:
        """Next dart along the face on the left."""
        nxt = {}
        for f in self.faces:
            ds = f.darts
            for j, d in enumerate(ds):
                nxt[d] = ds[(j + 1) % len(ds)]
        b = self.boundary
        for k, d in enumerate(b):
            nxt[self.alpha[d]] = self.alpha[b[k - 1]]
        return nxt

    def vertex_of(self) -> dict[int, int]:
        """Dart -> vertex id (its tail); vertices are orbits of phi o alpha."""
        phi = self.phi()
        vid: dict[int, int] = {}
        v = -1
        for d in self.darts():
            if d in vid:
                continue
            v += 1
            e = d
            while e not in vid:
                vid[e] = v
                e = phi[self.alpha[e]]
        return vid

    def head(self, d: int, vid: dict[int, int] | None = None) -> int:
        vid = vid or self.vertex_of()
        return vid[self.alpha[d]]

    def counts(self) -> tuple[int, int, int]:
        vid = self.vertex_of()
        return len(set(vid.values())), len(self.alpha) // 2, len(self.faces)

    def boundary_word(self) -> Word:
        return tuple(self.label[d] for d in self.boundary)

    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(d, self.alpha[d]), max(d, self.alpha[d])) for d in self.alpha})

    def interior_darts(self) -> set[int]:
        """Darts whose edge lies on no boundary position."""
        on_b = set(self.boundary) | {self.alpha[d] for d in self.boundary}
        return {d for d in self.alpha if d not in on_b}

    # ----------------------------------------------------------- canonical
    def _encode(self, start: int, phi: dict[int, int], inner: set[int]) -> tuple:
        num = {start: 0}
        order = [start]
        code = []
        for d in order:
            for e in (self.alpha[d], phi[d]):
                if e not in num:
                    num[e] = len(order)
                    order.append(e)
            code.append((num[self.alpha[d]], num[phi[d]], self.label[d], d in inner))
        return tuple(code)

    def canonical_form(self, based: bool = False) -> tuple:
        """Least breadth-first encoding over boundary starting darts (only
        the first boundary dart when ``based``)."""
        phi = self.phi()
        inner = {d for f in self.faces for d in f.darts}
        starts = self.boundary[:1] if based else self.boundary
        return min(self._encode(s, phi, inner) for s in starts)

    def compact(self) -> "DiscDiagram":
        """Renumber darts densely in boundary-first breadth-first order."""
        phi = self.phi()
        start = self.boundary[0]
        num = {start: 0}
        order = [start]
        for d in order:
            for e in (self.alpha[d], phi[d]):
                if e not in num:
                    num[e] = len(order)
                    order.append(e)
        return DiscDiagram(
            {num[d]: num[self.alpha[d]] for d in order},
            {num[d]: self.label[d] for d in order},
            [FaceCell(f.x_face, f.offset, f.orientation, tuple(num[d] for d in f.darts)) for f in self.faces],
            tuple(num[d] for d in self.boundary),
        )

    def copy(self) -> "DiscDiagram":
        return DiscDiagram(dict(self.alpha), dict(self.label), list(self.faces), tuple(self.boundary))

    def __repr__(self):
        return f"DiscDiagram(area={self.area}, boundary_len={len(self.boundary)})"


# --------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    valid: bool
    problems: list[str] = field(default_factory=list)
    boundary_word: Word = ()


def validate_diagram(d: DiscDiagram, x: TwoComplex) -> ValidationReport:
    probs = []
    for a, b in d.alpha.items():
        if d.alpha.get(b) != a or a == b:
            probs.append(f"alpha is not a fixed-point-free involution at dart {a}")
        elif d.label[b] != inverse_letter(d.label[a]):
            probs.append(f"reverse dart {b} of {a} has a non-inverse label")
    seen: dict[int, str] = {}
    for i, f in enumerate(d.faces):
        if reading(x, f.x_face, f.offset, f.orientation) != tuple(d.label[e] for e in f.darts):
            probs.append(f"face {i}: label mismatch with its image face")
        for e in f.darts:
            if e in seen:
                probs.append(f"dart {e} lies on two faces")
            seen[e] = "face"
    outer = {d.alpha[b] for b in d.boundary}
    if len(outer) != len(d.boundary):
        probs.append("boundary repeats a dart")
    for e in outer:
        if e in seen:
            probs.append(f"dart {e} lies on a face and on the outer face")
        seen[e] = "outer"
    if set(seen) != set(d.alpha):
        probs.append("some darts lie on no face")
    if probs:
        return ValidationReport(False, probs)
    # closedness: consecutive darts of each cycle must meet at a vertex
    vid = d.vertex_of()
    for i, f in enumerate(d.faces):
        for a, b in zip(f.darts, f.darts[1:] + f.darts[:1]):
            if vid[d.alpha[a]] != vid[b]:
                probs.append(f"face {i} is not a closed path")
    for a, b in zip(d.boundary, d.boundary[1:] + d.boundary[:1]):
        if vid[d.alpha[a]] != vid[b]:
            probs.append("boundary is not a closed path")
    # vertex images must agree
    img: dict[int, int] = {}
    for e, v in vid.items():
        t = x.tail(d.label[e])
        if img.setdefault(v, t) != t:
            probs.append(f"vertex {v} maps to two vertices of X")
    V, E, F = d.counts()
    if V - E + F != 1:
        probs.append(f"not a disc: V - E + F = {V - E + F}")
    # connectivity: a single orbit under alpha and phi
    phi = d.phi()
    start = next(iter(d.alpha))
    comp = {start}
    stack = [start]
    while stack:
        e = stack.pop()
        for g in (d.alpha[e], phi[e]):
            if g not in comp:
                comp.add(g)
                stack.append(g)
    if len(comp) != len(d.alpha):
        probs.append("diagram is disconnected")
    return ValidationReport(not probs, probs, d.boundary_word())


# ----------------------------------------------------------------- building

class _Fresh:
    def __init__(self, start: int = 0):
        self.n = start

    def __call__(self) -> int:
        self.n += 1
        return self.n - 1


def single_face(x: TwoComplex, face: int = 0, offset: int = 0, orientation: int = 1) -> DiscDiagram:
    w = reading(x, face, offset, orientation)
    n = len(w)
    alpha, label = {}, {}
    for j, l in enumerate(w):
        alpha[2 * j], alpha[2 * j + 1] = 2 * j + 1, 2 * j
        label[2 * j], label[2 * j + 1] = l, inverse_letter(l)
    darts = tuple(2 * j for j in range(n))
    return DiscDiagram(alpha, label, [FaceCell(face, offset, orientation, darts)], darts)


def glue_face(d: DiscDiagram, x: TwoComplex, start: int, length: int, face: int, offset: int,
              orientation: int) -> DiscDiagram:
    """Attach a new face along the boundary arc of ``length`` darts starting
    at boundary position ``start``.  Its reading must begin with the inverse
    of the arc word; ``length`` 0 wedges the face on at a vertex."""
    r = reading(x, face, offset, orientation)
    b = list(d.boundary)
    m = len(b)
    arc = [b[(start + j) % m] for j in range(length)]
    if length > len(r) or length > m:
        raise ValueError("arc too long")
    if tuple(inverse(tuple(d.label[e] for e in arc))) != r[:length]:
        raise ValueError("face reading does not match the boundary arc")
    if length == len(r):
        vid = d.vertex_of()
        if vid[arc[0]] != vid[d.alpha[arc[-1]]]:
            raise ValueError("a face glued along its whole boundary needs a closed arc")
    out = d.copy()
    fresh = _Fresh(max(d.alpha) + 1)
    new = []
    for l in r[length:]:
        a, c = fresh(), fresh()
        out.alpha[a], out.alpha[c] = c, a
        out.label[a], out.label[c] = l, inverse_letter(l)
        new.append(a)
    darts = tuple(d.alpha[e] for e in reversed(arc)) + tuple(new)
    out.faces = list(d.faces) + [FaceCell(face, offset, orientation, darts)]
    rot = b[start:] + b[:start] if m else []
    out.boundary = tuple(new + rot[length:])
    return out


def attach_with_bridge(d: DiscDiagram, x: TwoComplex, pos: int, bridge: Sequence[Letter], face: int,
                       offset: int, orientation: int) -> DiscDiagram:
    """Hang a new face off the tail of boundary position ``pos`` at the end of
    a new path spelling ``bridge`` (possibly empty)."""
    out = d.copy()
    fresh = _Fresh(max(d.alpha) + 1)

    def new_edge(l):
        a, c = fresh(), fresh()
        out.alpha[a], out.alpha[c] = c, a
        out.label[a], out.label[c] = l, inverse_letter(l)
        return a

    path = [new_edge(l) for l in bridge]
    darts = tuple(new_edge(l) for l in reading(x, face, offset, orientation))
    out.faces = list(d.faces) + [FaceCell(face, offset, orientation, darts)]
    b = list(d.boundary)
    back = [out.alpha[e] for e in reversed(path)]
    out.boundary = tuple(b[:pos] + path + list(darts) + back + b[pos:])
    return out


def wedge(d1: DiscDiagram, pos1: int, d2: DiscDiagram, pos2: int) -> DiscDiagram:
    """Join two diagrams at the tails of boundary positions ``pos1``, ``pos2``."""
    shift = max(d1.alpha) + 1
    alpha = dict(d1.alpha)
    label = dict(d1.label)
    for a, b in d2.alpha.items():
        alpha[a + shift] = b + shift
        label[a + shift] = d2.label[a]
    faces = list(d1.faces) + [FaceCell(f.x_face, f.offset, f.orientation, tuple(e + shift for e in f.darts))
                              for f in d2.faces]
    b1 = list(d1.boundary[pos1:] + d1.boundary[:pos1])
    b2 = [e + shift for e in d2.boundary[pos2:] + d2.boundary[:pos2]]
    return DiscDiagram(alpha, label, faces, tuple(b1 + b2))


# -------------------------------------------------------------- min area

class AreaOracle:
    """Exact minimal area of cyclic words, by iterative deepening over the
    fill-the-first-letter recursion.  The minimal area of a word depends
    only on its cyclic reduction up to rotation."""

    def __init__(self, x: TwoComplex):
        self.x = x
        self.by_first: dict[Letter, list[Word]] = {}
        seen = set()
        for _, _, _, w in x.readings():
            if w not in seen:
                seen.add(w)
                self.by_first.setdefault(w[0], []).append(w)
        self.exact: dict[Word, int] = {(): 0}
        self.lower: dict[Word, int] = {}

    @staticmethod
    def key(w: Sequence[Letter]) -> Word:
        return canonical_cyclic(cyclic_reduce(w))

    def min_area(self, w: Sequence[Letter], cap: int) -> int | None:
        """Minimal area if at most ``cap``, else None."""
        k = self.key(w)
        if k in self.exact:
            v = self.exact[k]
            return v if v <= cap else None
        lo = self.lower.get(k, 1)
        for b in range(lo, cap + 1):
            if self._fill(k, b):
                self.exact[k] = b
                return b
            self.lower[k] = b + 1
        return None

    def _fill(self, w: Word, b: int) -> bool:
        first = w[0]
        inv = inverse_letter(first)
        for j in range(2, len(w) - 1):
            if w[j] == inv:
                m1 = self.min_area(w[1:j], b)
                if m1 is not None and self.min_area(w[j + 1:], b - m1) is not None:
                    return True
        if b >= 1:
            for r in self.by_first.get(first, ()):
                if self.min_area(w[1:] + inverse(r[1:]), b - 1) is not None:
                    return True
        return False


# -------------------------------------------------------------- enumeration

EXACT = "Exact"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class EnumerationResult:
    diagrams: list[DiscDiagram]
    status: str
    min_area: int | None


def enumerate_minimal_diagrams(x: TwoComplex, p: Sequence[Letter], max_area: int = 8,
                               oracle: AreaOracle | None = None, limit: int | None = None) -> EnumerationResult:
    """All minimal-area diagrams with boundary word ``p`` (based at its first
    letter), up to relabeling of darts.

    The search fills holes.  The first dart of the first hole either lies on
    a face (attach one, reading any boundary word of X that starts with its
    letter) or is the same edge as a later dart of the same hole carrying
    the inverse letter (glue them, splitting the hole in two).  Branches are
    pruned by the exact minimal areas of the holes.
    """
    p = tuple(p)
    oracle = oracle or AreaOracle(x)
    if not p:
        raise ValueError("empty boundary")
    target = oracle.min_area(p, max_area)
    if target is None:
        # the search up to max_area was exhaustive: no diagram that small
        return EnumerationResult([], EXACT, None)

    reps: dict[Word, tuple[int, int, int]] = {}
    for face, off, orient, w in x.readings():
        reps.setdefault(w, (face, off, orient))
    by_first: dict[Letter, list[Word]] = {}
    for w in reps:
        by_first.setdefault(w[0], []).append(w)

    n = len(p)
    alpha: dict[int, int] = {}
    label: dict[int, Letter] = {}
    for i, l in enumerate(p):
        alpha[2 * i], alpha[2 * i + 1] = 2 * i + 1, 2 * i
        label[2 * i], label[2 * i + 1] = l, inverse_letter(l)
    outer = [2 * i + 1 for i in range(n)]
    found: dict[tuple, DiscDiagram] = {}
    counter = [2 * n]

    def hole_word(h):
        return [label[e] for e in h]

    def lower_bound(holes, budget):
        total = 0
        for h in holes:
            m = oracle.min_area(hole_word(h), budget - total)
            if m is None:
                return None
            total += m
        return total

    def emit(faces):
        dg = DiscDiagram(dict(alpha), dict(label), list(faces), tuple(alpha[o] for o in outer))
        # drop darts deleted by gluing
        live = set(dg.boundary) | {o for o in outer}
        for f in faces:
            live.update(f.darts)
        live |= {alpha[e] for e in live}
        dg.alpha = {e: alpha[e] for e in live}
        dg.label = {e: label[e] for e in live}
        key = dg.canonical_form(based=True)
        if key not in found:
            found[key] = dg.compact()

    def search(holes, faces, budget):
        if limit is not None and len(found) >= limit:
            return
        if not holes:
            if budget == 0:
                emit(faces)
            return
        lb = lower_bound(holes, budget)
        if lb is None:
            return
        h, rest = holes[0], holes[1:]
        d0 = h[0]
        inv = inverse_letter(label[d0])
        for k in range(1, len(h)):
            if label[h[k]] != inv:
                continue
            dk = h[k]
            a0, ak = alpha[d0], alpha[dk]
            alpha[a0], alpha[ak] = ak, a0
            parts = [q for q in (h[1:k], h[k + 1:]) if q]
            search(parts + rest, faces, budget)
            alpha[a0], alpha[ak] = d0, dk
        if budget >= 1:
            for r in by_first.get(label[d0], ()):
                face, off, orient = reps[r]
                made = []
                for l in r[1:]:
                    f_, g_ = counter[0], counter[0] + 1
                    counter[0] += 2
                    alpha[f_], alpha[g_] = g_, f_
                    label[f_], label[g_] = l, inverse_letter(l)
                    made.append((f_, g_))
                cell = FaceCell(face, off, orient, (d0,) + tuple(f_ for f_, _ in made))
                new_hole = h[1:] + [g_ for _, g_ in reversed(made)]
                search([new_hole] + rest, faces + [cell], budget - 1)
                for f_, g_ in made:
                    for e in (f_, g_):
                        del alpha[e], label[e]

    search([[2 * i for i in range(n)]], [], target)
    diagrams = sorted(found.values(), key=lambda dg: dg.canonical_form(based=True))
    status = BUDGET_EXCEEDED if limit is not None and len(found) >= limit else EXACT
    return EnumerationResult(diagrams, status, target)


# -------------------------------------------------------- cancellable pairs

@dataclass(frozen=True)
class CancellablePair:
    face1: int
    face2: int
    vertex: int
    start1: int  # index into face1's darts: counterclockwise reading from the vertex
    start2: int  # index into face2's darts: the dart ending at the vertex; read clockwise


def find_cancellable_pair(d: DiscDiagram) -> CancellablePair | None:
    """Two faces meeting at a vertex whose boundary loops from that vertex,
    one read counterclockwise and the other clockwise, have the same image.
    Images are compared as label words, so any re-mapping of redundant faces
    or proper powers is covered."""
    vid = d.vertex_of()
    for i, f1 in enumerate(d.faces):
        n = len(f1.darts)
        for j, f2 in enumerate(d.faces):
            if i == j or len(f2.darts) != n:
                continue
            for a in range(n):
                v = vid[f1.darts[a]]
                ccw = [d.label[f1.darts[(a + m) % n]] for m in range(n)]
                for b in range(n):
                    if vid[d.alpha[f2.darts[b]]] != v:
                        continue
                    cw = [inverse_letter(d.label[f2.darts[(b - m) % n]]) for m in range(n)]
                    if ccw == cw:
                        return CancellablePair(i, j, v, a, b)
    return None


def cancel_pair(d: DiscDiagram, pair: CancellablePair) -> DiscDiagram:
    """Cut out both faces and sew the two boundary loops together.

    Darts of the removed faces are deleted; the m-th dart of one loop is
    matched with the m-th dart of the other, and each surviving dart is
    re-paired by chasing through deleted darts along that matching.  The
    component containing the outer face is kept.
    """
    f1, f2 = d.faces[pair.face1], d.faces[pair.face2]
    n = len(f1.darts)
    xs = [f1.darts[(pair.start1 + m) % n] for m in range(n)]
    ys = [f2.darts[(pair.start2 - m) % n] for m in range(n)]
    match = {}
    for a, b in zip(xs, ys):
        match[a], match[b] = b, a
    deleted = set(match)
    alpha = {}
    for s in d.alpha:
        if s in deleted:
            continue
        t = d.alpha[s]
        hops = 0
        while t in deleted:
            t = d.alpha[match[t]]
            hops += 1
            if hops > len(d.alpha):
                raise AssertionError("sewing loop did not terminate")
        alpha[s] = t
    faces = [f for k, f in enumerate(d.faces) if k not in (pair.face1, pair.face2)]
    outer = [d.alpha[b] for b in d.boundary]
    boundary = tuple(alpha[o] for o in outer)
    out = DiscDiagram(alpha, {s: d.label[s] for s in alpha}, faces, boundary)
    # keep the component of the outer face
    phi = out.phi()
    comp = set(outer)
    stack = list(outer)
    while stack:
        e = stack.pop()
        for g in (out.alpha[e], phi[e]):
            if g not in comp:
                comp.add(g)
                stack.append(g)
    if len(comp) != len(alpha):
        out = DiscDiagram({s: alpha[s] for s in comp}, {s: out.label[s] for s in comp},
                          [f for f in faces if f.darts[0] in comp], boundary)
    return out


def reduce_diagram(d: DiscDiagram) -> DiscDiagram:
    """Cancel pairs until none is left."""
    while True:
        pair = find_cancellable_pair(d)
        if pair is None:
            return d
        d = cancel_pair(d, pair)


# ---------------------------------------------------------------- fuzzing

def _reading_index(x: TwoComplex) -> dict[Word, tuple[int, int, int]]:
    out: dict[Word, tuple[int, int, int]] = {}
    for face, off, orient, w in x.readings():
        out.setdefault(w, (face, off, orient))
    return out


def random_diagram(x: TwoComplex, area: int, rng, min_arc: int = 1) -> DiscDiagram:
    """Glue random faces along random boundary arcs that match."""
    readings = _reading_index(x)
    words = list(readings)
    d = single_face(x, *readings[rng.choice(words)])
    while d.area < area:
        for _ in range(200):
            m = len(d.boundary)
            start = rng.randrange(m)
            length = rng.randint(min_arc, min(m, 3))
            arc = tuple(d.label[d.boundary[(start + j) % m]] for j in range(length))
            want = inverse(arc)
            options = [w for w in words if w[:length] == want and len(w) > length]
            if options:
                d = glue_face(d, x, start, length, *readings[rng.choice(options)])
                break
        else:
            break
    return d


def add_cancellable_pair(d: DiscDiagram, x: TwoComplex, rng) -> DiscDiagram:
    """Glue a face R1 on a boundary arc, then its mirror R2 along the rest of
    R1, leaving the boundary word unchanged."""
    readings = _reading_index(x)
    words = list(readings)
    for _ in range(500):
        m = len(d.boundary)
        start = rng.randrange(m)
        length = rng.randint(1, min(m, 2))
        arc = tuple(d.label[d.boundary[(start + j) % m]] for j in range(length))
        options = [w for w in words if w[:length] == inverse(arc) and len(w) > length]
        if not options:
            continue
        r = rng.choice(options)
        d1 = glue_face(d, x, start, length, *readings[r])
        # R1's free arc sits at the start of the new boundary
        return glue_face(d1, x, 0, len(r) - length, *readings[inverse(r)])
    raise ValueError("no boundary arc accepts a face")
