"""Labeled graphs, Stallings folding and pi_1-injectivity verdicts.

Edges carry a single positive letter (a generator id, or an edge id of the
target graph when folding against a non-rose target).  A directed edge is
read forwards as ``(label, +1)`` and backwards as ``(label, -1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .words import Letter, Word, free_reduce

Dart = tuple[int, int]  # (edge index, +1 forwards / -1 backwards)


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, Hashable], ...]
    # edges labeled by the empty word that closed a loop when contracted
    trivial_loops: int = 0

    def dart_ends(self, d: Dart) -> tuple[int, int]:
        s, t, _ = self.edges[d[0]]
        return (s, t) if d[1] > 0 else (t, s)

    def dart_letter(self, d: Dart) -> Letter:
        return (self.edges[d[0]][2], d[1])

    def path_word(self, path: Sequence[Dart]) -> Word:
        return tuple(self.dart_letter(d) for d in path)

    def components(self) -> list[tuple[set[int], list[int]]]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for s, t, _ in self.edges:
            parent[find(s)] = find(t)
        comps: dict[int, tuple[set[int], list[int]]] = {}
        for v in self.vertices:
            comps.setdefault(find(v), (set(), []))[0].add(v)
        for i, (s, _, _) in enumerate(self.edges):
            comps[find(s)][1].append(i)
        return [comps[k] for k in sorted(comps)]

    def betti_numbers(self) -> list[int]:
        return [len(es) - len(vs) + 1 for vs, es in self.components()]

    def canonical_form(self):
        """An isomorphism invariant that is complete for folded graphs.

        Folded graphs are deterministic automata in both directions, so a
        traversal from a fixed root is determined by the root; minimise over
        roots per component and sort the components.
        """
        out = []
        for vs, es in self.components():
            adj: dict[int, list[tuple[Letter, int]]] = {v: [] for v in vs}
            for i in es:
                s, t, lab = self.edges[i]
                adj[s].append(((lab, 1), t))
                adj[t].append(((lab, -1), s))
            best = None
            for root in sorted(vs):
                num = {root: 0}
                order = [root]
                code = []
                for v in order:
                    for letter, w in sorted(adj[v], key=lambda p: (repr(p[0]), num.get(p[1], len(vs)))):
                        if w not in num:
                            num[w] = len(order)
                            order.append(w)
                        code.append((num[v], repr(letter), num[w]))
                code = tuple(sorted(code))
                if best is None or code < best:
                    best = code
            out.append((len(vs), best))
        return tuple(sorted(out))


def graph_from_edges(edges: Iterable[tuple[int, int, Letter | Hashable]], vertices: Iterable[int] = ()) -> LabeledGraph:
    """Build a graph from ``(src, dst, letter)`` edges; a negative letter is
    stored as the reversed positive edge."""
    es = []
    vs = set(vertices)
    for s, t, lab in edges:
        vs.update((s, t))
        if isinstance(lab, tuple) and len(lab) == 2 and lab[1] in (1, -1):
            g, sign = lab
            es.append((s, t, g) if sign > 0 else (t, s, g))
        else:
            es.append((s, t, lab))
    return LabeledGraph(tuple(sorted(vs)), tuple(es))


def subdivide_by_words(vertices: Iterable[int], edges: Iterable[tuple[int, int, Sequence[Letter]]]) -> LabeledGraph:
    """Replace word-labeled edges by paths of single letters.

    Edges labeled by the empty word are contracted, identifying their
    endpoints.  An empty edge whose ends are already identified is a loop
    reading the trivial word; those are counted in ``trivial_loops``.
    Surviving vertex ids are the smallest id of each identified class; new
    subdivision vertices are numbered after the input ids.
    """
    vertices = sorted(set(vertices))
    edges = list(edges)
    for s, t, _ in edges:
        for v in (s, t):
            if v not in vertices:
                vertices.append(v)
    vertices.sort()
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    trivial_loops = 0
    for s, t, w in edges:
        if not w:
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
            else:
                trivial_loops += 1
    fresh = (max(vertices) + 1) if vertices else 0
    out_edges = []
    out_vertices = {find(v) for v in vertices}
    for s, t, w in edges:
        if not w:
            continue
        chain = [find(s)]
        for _ in range(len(w) - 1):
            chain.append(fresh)
            out_vertices.add(fresh)
            fresh += 1
        chain.append(find(t))
        for (g, sign), a, b in zip(w, chain, chain[1:]):
            out_edges.append((a, b, g) if sign > 0 else (b, a, g))
    return LabeledGraph(tuple(sorted(out_vertices)), tuple(out_edges), trivial_loops)


@dataclass(frozen=True)
class FoldEvent:
    vertex: int
    label: Letter
    edges: tuple[int, int]
    rank_drop: bool


@dataclass
class FoldLog:
    events: list[FoldEvent] = field(default_factory=list)
    betti_before: list[int] = field(default_factory=list)
    betti_after: list[int] = field(default_factory=list)
    # first rank-dropping fold, lifted to a closed path of the input graph
    witness: tuple[Dart, ...] | None = None

    @property
    def rank_drops(self) -> int:
        return sum(e.rank_drop for e in self.events)


def _reduce_path(path: list[Dart]) -> list[Dart]:
    out: list[Dart] = []
    for d in path:
        if out and out[-1][0] == d[0] and out[-1][1] == -d[1]:
            out.pop()
        else:
            out.append(d)
    while len(out) >= 2 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


def _reverse_path(path: Sequence[Dart]) -> list[Dart]:
    return [(e, -s) for e, s in reversed(path)]


def fold_graph(g: LabeledGraph) -> tuple[LabeledGraph, FoldLog]:
    """Stallings-fold ``g`` until no vertex has two equally-labeled darts.

    Folds are taken in a fixed order (smallest vertex, then smallest label).
    Each surviving edge keeps a lift: a path in ``g`` between the class
    representatives of its endpoints whose label reduces to the edge label.
    The lift of the first rank-dropping fold is recorded as a witness.
    """
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    # edge id -> [src, dst, label, lift path in g from rep(src) to rep(dst)]
    live = {i: [s, t, lab, [(i, 1)]] for i, (s, t, lab) in enumerate(g.edges)}
    log = FoldLog(betti_before=g.betti_numbers())

    def darts_at():
        table: dict[tuple[int, Letter], list[tuple[int, int]]] = {}
        for i in sorted(live):
            s, t, lab, _ = live[i]
            table.setdefault((find(s), (lab, 1)), []).append((i, 1))
            table.setdefault((find(t), (lab, -1)), []).append((i, -1))
        return table

    def oriented(i, sign):
        s, t, lab, path = live[i]
        return (find(s), find(t), path) if sign > 0 else (find(t), find(s), _reverse_path(path))

    while True:
        table = darts_at()
        clash = None
        for key in sorted(table, key=lambda k: (k[0], repr(k[1]))):
            ds = table[key]
            if len(ds) >= 2:
                clash = (key, ds[0], ds[1])
                break
        if clash is None:
            break
        (u, letter), d1, d2 = clash
        _, v1, p1 = oriented(*d1)
        _, v2, p2 = oriented(*d2)
        drop = v1 == v2
        log.events.append(FoldEvent(u, letter, (d1[0], d2[0]), drop))
        if drop:
            if log.witness is None:
                log.witness = tuple(_reduce_path(p1 + _reverse_path(p2)))
            del live[d2[0]]
            continue
        # connector: rep(v1) -> rep(u) -> rep(v2), label reduces to empty
        connector = _reverse_path(p1) + p2
        del live[d2[0]]
        for i in live:
            s, t, lab, path = live[i]
            if find(s) == v2:
                path = connector + path
            if find(t) == v2:
                path = path + _reverse_path(connector)
            live[i][3] = path
        parent[v2] = v1

    vs = sorted({find(v) for v in g.vertices})
    es = tuple((find(s), find(t), lab) for i, (s, t, lab, _) in sorted(live.items()))
    folded = LabeledGraph(tuple(vs), es)
    log.betti_after = folded.betti_numbers()
    return folded, log


@dataclass(frozen=True)
class Verdict:
    injective: bool
    witness: tuple[Dart, ...] | None = None

    def __str__(self):
        return "Injective" if self.injective else "NotInjective"


def is_pi1_injective(g: LabeledGraph) -> Verdict:
    """Injective iff folding never identifies two parallel edges (and no
    loop was labeled by the empty word; its witness is the empty path)."""
    if g.trivial_loops:
        return Verdict(False, ())
    _, log = fold_graph(g)
    if log.rank_drops == 0:
        return Verdict(True)
    return Verdict(False, log.witness)


def is_closed_path(g: LabeledGraph, path: Sequence[Dart]) -> bool:
    if not path:
        return False
    for a, b in zip(path, path[1:]):
        if g.dart_ends(a)[1] != g.dart_ends(b)[0]:
            return False
    return g.dart_ends(path[-1])[1] == g.dart_ends(path[0])[0]


def is_reduced_cycle(path: Sequence[Dart]) -> bool:
    n = len(path)
    return n > 0 and all(not (path[i][0] == path[(i + 1) % n][0] and path[i][1] == -path[(i + 1) % n][1]) for i in range(n))


def short_kernel_witness(g: LabeledGraph, max_len: int) -> tuple[Dart, ...] | None:
    """Exhaustively search cyclically reduced closed paths of length at most
    ``max_len`` whose label freely reduces to the empty word."""
    out: dict[int, list[Dart]] = {v: [] for v in g.vertices}
    for i, (s, t, _) in enumerate(g.edges):
        out[s].append((i, 1))
        out[t].append((i, -1))

    def search(start, path, stack):
        # stack holds the free reduction of the label so far
        here = g.dart_ends(path[-1])[1]
        first, last = path[0], path[-1]
        if here == start and not stack and not (first[0] == last[0] and first[1] == -last[1]):
            return tuple(path)
        if len(path) == max_len or len(stack) > max_len - len(path):
            return None
        for d in out[here]:
            if d[0] == last[0] and d[1] == -last[1]:
                continue
            l = g.dart_letter(d)
            if stack and stack[-1] == (l[0], -l[1]):
                top = stack.pop()
                path.append(d)
                found = search(start, path, stack)
                path.pop()
                stack.append(top)
            else:
                stack.append(l)
                path.append(d)
                found = search(start, path, stack)
                path.pop()
                stack.pop()
            if found:
                return found
        return None

    for v in g.vertices:
        for d in out[v]:
            found = search(v, [d], [g.dart_letter(d)])
            if found:
                return found
    return None
