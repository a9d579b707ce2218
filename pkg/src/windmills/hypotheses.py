"""Sufficient conditions for the inclusion of a subgraph A into a 2-complex
to be pi_1-injective: Magnus' Freiheitssatz, staggered orderings and small
cancellation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .complex import TwoComplex
from .words import Word, inverse, rotate

CERTIFIED = "Certified"
UNKNOWN = "Unknown"

FREI = "frei"
STAGGERED = "staggered"
SMALLCANC = "smallcanc"


@dataclass
class RouteVerdict:
    route: str
    verdict: str
    reason: str = ""
    witness: object = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _edges_in(x: TwoComplex, face: int) -> set[int]:
    return {e for e, _ in x.faces[face].boundary}


def check_freiheitssatz(x: TwoComplex, a_edges: Iterable[int]) -> RouteVerdict:
    a_edges = frozenset(a_edges)
    if not x.is_standard:
        return RouteVerdict(FREI, UNKNOWN, "not a standard complex")
    if len(x.faces) != 1:
        return RouteVerdict(FREI, UNKNOWN, f"{len(x.faces)} relators, need exactly one")
    if not a_edges:
        return RouteVerdict(FREI, UNKNOWN, "A has no edges")
    omitted = sorted(_edges_in(x, 0) - a_edges)
    if not omitted:
        return RouteVerdict(FREI, UNKNOWN, "A contains every generator of the relator")
    return RouteVerdict(FREI, CERTIFIED, f"relator uses {x.edge_name(omitted[0])}, which A omits", omitted)


# ------------------------------------------------------------- staggered

@dataclass(frozen=True)
class StaggeredOrdering:
    edge_order: tuple[int, ...]  # non-A edges, lowest first
    face_order: tuple[int, ...]  # faces, lowest first


def _extremes(x: TwoComplex, a_edges: frozenset[int], rank: dict[int, int]) -> list[tuple[int, int]]:
    out = []
    for fi in range(len(x.faces)):
        ranks = [rank[e] for e in _edges_in(x, fi) if e not in a_edges]
        if not ranks:
            raise ValueError(f"face {fi} has no edge outside A")
        out.append((min(ranks), max(ranks)))
    return out


def verify_staggered(x: TwoComplex, a_edges: Iterable[int], order: StaggeredOrdering) -> bool:
    a_edges = frozenset(a_edges)
    rank = {e: i for i, e in enumerate(order.edge_order)}
    ext = _extremes(x, a_edges, rank)
    faces = order.face_order
    for lo, hi in zip(faces, faces[1:]):
        if not (ext[lo][1] < ext[hi][1] and ext[lo][0] < ext[hi][0]):
            return False
    return True


def find_staggered_ordering(x: TwoComplex, a_edges: Iterable[int], max_edges: int = 8) -> StaggeredOrdering | None:
    """Exhaustive over linear orders of the non-A edges.  Once the edge
    order is fixed the face order is forced (faces sorted by their highest
    edge), so only that order needs checking."""
    a_edges = frozenset(a_edges)
    free = sorted({e for fi in range(len(x.faces)) for e in _edges_in(x, fi)} - a_edges)
    others = [e for e in range(len(x.edges)) if e not in a_edges and e not in free]
    if len(free) > max_edges:
        return None
    for perm in itertools.permutations(free):
        rank = {e: i for i, e in enumerate(perm)}
        ext = _extremes(x, a_edges, rank)
        faces = tuple(sorted(range(len(x.faces)), key=lambda f: ext[f]))
        order = StaggeredOrdering(tuple(perm) + tuple(others), faces)
        if verify_staggered(x, a_edges, order):
            return order
    return None


def check_staggered(x: TwoComplex, a_edges: Iterable[int]) -> RouteVerdict:
    a_edges = frozenset(a_edges)
    try:
        order = find_staggered_ordering(x, a_edges)
    except ValueError as exc:
        return RouteVerdict(STAGGERED, UNKNOWN, str(exc))
    if order is None:
        return RouteVerdict(STAGGERED, UNKNOWN, "no staggered ordering found")
    return RouteVerdict(STAGGERED, CERTIFIED, "staggered ordering found", order)


# ------------------------------------------------------- small cancellation

@dataclass
class Piece:
    word: Word
    occurrences: list[tuple[int, int, int]] = field(default_factory=list)  # (face, offset, orientation)


def _prefix_table(x: TwoComplex) -> dict[Word, list[tuple[int, int, int]]]:
    table: dict[Word, list[tuple[int, int, int]]] = {}
    for face, offset, orient, w in x.readings():
        for n in range(1, len(w)):
            table.setdefault(w[:n], []).append((face, offset, orient))
    return table


def piece_set(x: TwoComplex) -> set[Word]:
    """Every word that is a proper prefix of two distinct positioned
    readings of face boundaries."""
    return {u for u, occ in _prefix_table(x).items() if len(occ) >= 2}


def compute_pieces(x: TwoComplex) -> list[Piece]:
    """Maximal pieces: pieces not extendable on the right to a longer piece
    with the same occurrences."""
    table = _prefix_table(x)
    out = []
    for u, occ in table.items():
        if len(occ) < 2:
            continue
        longer = [v for v in (u + (l,) for l in _letters(x)) if len(table.get(v, ())) == len(occ)]
        if not longer:
            out.append(Piece(u, sorted(occ)))
    out.sort(key=lambda p: (-len(p.word), p.word))
    return out


def _letters(x: TwoComplex):
    return [(e, s) for e in range(len(x.edges)) for s in (1, -1)]


def cover_count(w: Word, pieces: set[Word]) -> int:
    """Fewest pieces whose concatenation is ``w``; letters that are not
    pieces count one each, so the result never exceeds ``len(w)``."""
    i = n = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and w[i:j + 1] in pieces:
            j += 1
        i = j
        n += 1
    return n


def _piece_cover_exact(w: Word, pieces: set[Word]) -> int | None:
    """Fewest pieces covering ``w`` exactly, or None."""
    i = n = 0
    while i < len(w):
        if w[i:i + 1] not in pieces:
            return None
        j = i + 1
        while j < len(w) and w[i:j + 1] in pieces:
            j += 1
        i = j
        n += 1
    return n


@dataclass(frozen=True)
class MetricReport:
    max_c: int
    t4: bool


def symmetrized(x: TwoComplex) -> set[Word]:
    out = set()
    for f in x.faces:
        for k in range(len(f.boundary)):
            r = rotate(f.boundary, k)
            out.add(r)
            out.add(inverse(r))
    return out


def check_t4(x: TwoComplex) -> bool:
    """No triple r1, r2, r3 of the symmetrized set with r_i != r_{i+1}^-1
    such that every cyclically successive product r_i r_{i+1} cancels
    (such a triple is an interior vertex of degree three)."""
    rs = sorted(symmetrized(x))
    ends: dict = {}
    for r in rs:
        ends.setdefault(r[0], []).append(r)

    def follows(u, v):
        return u != inverse(v) and u[-1] == (v[0][0], -v[0][1])

    for r1 in rs:
        for r2 in ends.get((r1[-1][0], -r1[-1][1]), []):
            if not follows(r1, r2):
                continue
            for r3 in ends.get((r2[-1][0], -r2[-1][1]), []):
                if follows(r2, r3) and follows(r3, r1):
                    return False
    return True


def check_metric_conditions(x: TwoComplex) -> MetricReport:
    pieces = piece_set(x)
    best = None
    for f in x.faces:
        w = f.boundary
        c = min(cover_count(rotate(w, k), pieces) for k in range(len(w)))
        best = c if best is None else min(best, c)
    return MetricReport(best or 0, check_t4(x))


def find_qs_factor(x: TwoComplex, a_edges: frozenset[int], threshold: int):
    """A reading ``Q S`` of a face boundary with ``S`` inside A and ``Q`` a
    concatenation of at most ``threshold`` pieces (Q may be empty)."""
    pieces = piece_set(x)
    for face, offset, orient, w in x.readings():
        n = len(w)
        for i in range(n + 1):
            if all(e in a_edges for e, _ in w[i:]):
                c = 0 if i == 0 else _piece_cover_exact(w[:i], pieces)
                if c is not None and c <= threshold:
                    return face, offset, orient, w[:i], w[i:]
    return None


def check_small_cancellation(x: TwoComplex, a_edges: Iterable[int]) -> RouteVerdict:
    a_edges = frozenset(a_edges)
    m = check_metric_conditions(x)
    if m.max_c >= 6:
        threshold = 3
    elif m.max_c >= 4 and m.t4:
        threshold = 2
    else:
        return RouteVerdict(SMALLCANC, UNKNOWN, f"metric condition fails (C({m.max_c}), T(4)={m.t4})", m)
    bad = find_qs_factor(x, a_edges, threshold)
    if bad is not None:
        return RouteVerdict(SMALLCANC, UNKNOWN, "a face boundary reads Q S with S in A and Q short", bad)
    return RouteVerdict(SMALLCANC, CERTIFIED, f"C({m.max_c}) with T(4)={m.t4}, no short Q S factorization", m)


ROUTES = {FREI: check_freiheitssatz, STAGGERED: check_staggered, SMALLCANC: check_small_cancellation}


def inclusion_verdict(x: TwoComplex, a_edges: Iterable[int]) -> RouteVerdict:
    """The first route that certifies A -> X, or the last Unknown."""
    a_edges = frozenset(a_edges)
    last = None
    for fn in ROUTES.values():
        last = fn(x, a_edges)
        if last.certified:
            return last
    return last
