"""Exhaustive corpora of trivial words.

Every cyclically reduced word up to a length bound is visited once per
rotation class.  Two sound filters cut the search before the exact area
oracle runs: the exponent-sum vector has to lie in the span of the relator
vectors (pruned with the remaining length), and the word has to act
trivially in every supplied permutation representation of the group.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .complex import TwoComplex
from .diagrams import AreaOracle
from .words import Word, canonical_cyclic

Perm = tuple[int, ...]


@dataclass(frozen=True)
class PermRep:
    """Images of the edges (generators) as permutations of ``range(n)``."""

    images: tuple[Perm, ...]

    def inverse_images(self) -> tuple[Perm, ...]:
        out = []
        for p in self.images:
            q = [0] * len(p)
            for i, j in enumerate(p):
                q[j] = i
            out.append(tuple(q))
        return tuple(out)

    def act(self, w: Word, point: int) -> int:
        inv = self.inverse_images()
        for e, s in w:
            point = (self.images[e] if s > 0 else inv[e])[point]
        return point

    def kills(self, w: Word) -> bool:
        return all(self.act(w, i) == i for i in range(len(self.images[0])))

    def is_representation(self, x: TwoComplex) -> bool:
        return all(self.kills(f.boundary) for f in x.faces)


def affine_rep(p: int, maps: Sequence[tuple[int, int]]) -> PermRep:
    """Generator ``i`` acts on Z/p by ``u -> m*u + c`` for ``maps[i] = (m, c)``."""
    return PermRep(tuple(tuple((m * u + c) % p for u in range(p)) for m, c in maps))


def _compose(p: Perm, q: Perm) -> Perm:
    """Apply p then q."""
    return tuple(q[i] for i in p)


def _invert(p: Perm) -> Perm:
    q = [0] * len(p)
    for i, j in enumerate(p):
        q[j] = i
    return tuple(q)


def random_perm(n: int, rng: random.Random) -> Perm:
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def random_involution(n: int, rng: random.Random) -> Perm:
    pts = list(range(n))
    rng.shuffle(pts)
    p = list(range(n))
    for i in range(0, n - 1, 2):
        a, b = pts[i], pts[i + 1]
        p[a], p[b] = b, a
    return tuple(p)


def solve_last_letter(prefix: Perm, suffix_target: Perm) -> Perm:
    """The permutation ``g`` with ``prefix`` then ``g`` equal to ``suffix_target``."""
    return _compose(_invert(prefix), suffix_target)


def _vector(x: TwoComplex, w: Word) -> list[int]:
    v = [0] * len(x.edges)
    for e, s in w:
        v[e] += s
    return v


class _Lattice:
    """Integer span of the relator exponent vectors, in Hermite form."""

    def __init__(self, rows: list[list[int]]):
        basis: list[list[int]] = []
        rows = [r[:] for r in rows if any(r)]
        n = len(rows[0]) if rows else 0
        col = 0
        while rows and col < n:
            nz = [r for r in rows if r[col]]
            if not nz:
                col += 1
                continue
            while len(nz) > 1:
                nz.sort(key=lambda r: abs(r[col]))
                piv = nz[0]
                nxt = [piv]
                for r in nz[1:]:
                    q = r[col] // piv[col]
                    r2 = [a - q * b for a, b in zip(r, piv)]
                    if r2[col]:
                        nxt.append(r2)
                    elif any(r2):
                        rows.append(r2)
                nz = nxt
            piv = nz[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
            rows = [r for r in rows if not r[col] and any(r)]
            col += 1
        self.basis = basis

    def contains(self, v: list[int]) -> bool:
        v = v[:]
        for row in self.basis:
            c = next(i for i, a in enumerate(row) if a)
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)


def trivial_words(x: TwoComplex, max_length: int, max_area: int, reps: Sequence[PermRep] = (),
                  oracle: AreaOracle | None = None, edges: Sequence[int] | None = None) -> dict[Word, int]:
    """Every nonempty cyclically reduced word of length at most
    ``max_length`` with a disc diagram of area at most ``max_area``, one
    canonical rotation per class, mapped to its minimal area.  ``edges``
    restricts the alphabet."""
    if len(x.vertices) != 1:
        raise ValueError("word corpora need a one-vertex complex")
    for r in reps:
        if not r.is_representation(x):
            raise ValueError("a supplied permutation representation does not kill the relators")
    oracle = oracle or AreaOracle(x)
    lattice = _Lattice([_vector(x, f.boundary) for f in x.faces])
    edges = range(len(x.edges)) if edges is None else sorted(edges)
    letters = [(e, s) for e in edges for s in (1, -1)]
    single_face = len(x.faces) == 1
    rvec = _vector(x, x.faces[0].boundary) if single_face else None
    step = {}
    for rep in reps:
        inv = rep.inverse_images()
        step[id(rep)] = {(e, 1): rep.images[e] for e in range(len(x.edges))}
        step[id(rep)].update({(e, -1): inv[e] for e in range(len(x.edges))})
    found: dict[Word, int] = {}
    ident = [tuple(range(len(r.images[0]))) for r in reps]

    def reachable(v: list[int], room: int) -> bool:
        # distance to the nearest lattice point, for a single relator vector
        if not single_face:
            return True
        best = None
        norm = sum(abs(a) for a in rvec)
        if not norm:
            return sum(abs(a) for a in v) <= room
        kmax = (sum(abs(a) for a in v) + room) // norm + 1
        for k in range(-kmax, kmax + 1):
            d = sum(abs(a - k * b) for a, b in zip(v, rvec))
            best = d if best is None else min(best, d)
        return best <= room

    def visit(w: list, v: list[int], perms: list[Perm]):
        n = len(w)
        if n and w[0] != (w[-1][0], -w[-1][1]):
            t = tuple(w)
            if (canonical_cyclic(t) == t and lattice.contains(v)
                    and all(p == i for p, i in zip(perms, ident))):
                a = oracle.min_area(t, max_area)
                if a is not None:
                    found[t] = a
        if n == max_length:
            return
        for l in letters:
            if n and w[-1] == (l[0], -l[1]):
                continue
            if n and l < w[0]:
                continue  # the canonical rotation starts with its least letter
            v[l[0]] += l[1]
            if reachable(v, max_length - n - 1):
                w.append(l)
                visit(w, v, [_compose(p, step[id(r)][l]) for p, r in zip(perms, reps)])
                w.pop()
            v[l[0]] -= l[1]

    visit([], [0] * len(x.edges), ident)
    return found


def product_words(x: TwoComplex, k: int = 2) -> set[Word]:
    """Cyclic reductions of products of ``k`` positioned relator readings,
    one canonical rotation each; all are trivial with area at most ``k``."""
    from .words import cyclic_reduce

    readings = sorted({w for _, _, _, w in x.readings()})
    out: set[Word] = set()
    frontier = {()}
    for _ in range(k):
        frontier = {cyclic_reduce(u + r) for u in frontier for r in readings}
        out |= {canonical_cyclic(w) for w in frontier if w}
    return out
