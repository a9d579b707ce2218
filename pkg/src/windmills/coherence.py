"""Perimeter and weight calculus, coherence certificates, spelling witnesses,
a triviality decision procedure and the perimeter-reducing enlargement loop."""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex import TwoComplex, build_standard_complex
from .diagrams import AreaOracle, DiscDiagram, enumerate_minimal_diagrams, EXACT
from .folding import is_pi1_injective
from .hypotheses import check_freiheitssatz, check_small_cancellation, check_staggered
from .windmill import build_boundary_graph, build_generator_graph, check_windmill, compute_essence
from .words import (Presentation, Word, alternation_decompose, cyclic_reduce, free_reduce, inverse,
                    is_cyclically_reduced, parse_presentation, rotate)

CERTIFIED = "Certified"
UNKNOWN = "Unknown"

T_WINDMILLS = "t-windmills"
AB_CASE = "ab-case"
ONE_REL_BOUNDARY = "one-relator-boundary"
STAGGERED = "staggered"
SMALL_CANCELLATION = "small-cancellation"
ROUTE_ORDER = (T_WINDMILLS, AB_CASE, ONE_REL_BOUNDARY, STAGGERED, SMALL_CANCELLATION)


# ------------------------------------------------------------------ weights

@dataclass(frozen=True)
class WeightAssignment:
    """Non-negative weight per face side ``(face, index)``.  ``unit_edges``
    records the edges whose sides got weight 1 when built from a scheme."""

    weights: dict
    unit_edges: frozenset = frozenset()

    def side(self, face: int, i: int) -> Fraction:
        return self.weights.get((face, i), Fraction(0))


def scheme_weights(x: TwoComplex, unit_edges: Iterable[int]) -> WeightAssignment:
    """Weight 1 on every side lying on a unit edge, 0 elsewhere."""
    unit = frozenset(unit_edges)
    w = {}
    for fi, f in enumerate(x.faces):
        for i, (e, _) in enumerate(f.boundary):
            w[(fi, i)] = Fraction(1 if e in unit else 0)
    return WeightAssignment(w, unit)


def all_one_weights(x: TwoComplex) -> WeightAssignment:
    return scheme_weights(x, range(len(x.edges)))


def weight_of_relator(x: TwoComplex, face: int, w: WeightAssignment) -> Fraction:
    return sum((w.side(face, i) for i in range(len(x.faces[face].boundary))), Fraction(0))


def _edge_load(x: TwoComplex, w: WeightAssignment) -> list[Fraction]:
    load = [Fraction(0)] * len(x.edges)
    for fi, f in enumerate(x.faces):
        for i, (e, _) in enumerate(f.boundary):
            load[e] += w.side(fi, i)
    return load


def perimeter_of_word(x: TwoComplex, u: Sequence, w: WeightAssignment) -> Fraction:
    """Sum over letter occurrences of the total weight of the sides lying on
    that letter's edge."""
    load = _edge_load(x, w)
    return sum((load[e] for e, _ in u), Fraction(0))


def perimeter_of_subcomplex(x: TwoComplex, y_edges: Iterable[int], y_faces: Iterable[int],
                            w: WeightAssignment) -> Fraction:
    """Total weight of the sides on edges of Y whose face is not in Y."""
    y_edges, y_faces = frozenset(y_edges), frozenset(y_faces)
    total = Fraction(0)
    for fi, f in enumerate(x.faces):
        if fi in y_faces:
            continue
        for i, (e, _) in enumerate(f.boundary):
            if e in y_edges:
                total += w.side(fi, i)
    return total


def _a_blocks(x: TwoComplex, a_edges: frozenset) -> list[tuple[int, Word]]:
    """Maximal cyclic runs of A-letters on each face boundary."""
    out = []
    for fi, f in enumerate(x.faces):
        w = f.boundary
        inside = [e in a_edges for e, _ in w]
        if all(inside):
            out.append((fi, w))
            continue
        n = len(w)
        start = next(i for i in range(n) if not inside[i])
        run: list = []
        for j in range(1, n + 1):
            letter = w[(start + j) % n]
            if inside[(start + j) % n]:
                run.append(letter)
            elif run:
                out.append((fi, tuple(run)))
                run = []
    return out


def route_inequalities(x: TwoComplex, a_edges: frozenset, w: WeightAssignment) -> tuple[bool, list]:
    """Perimeter(A_i) <= Weight(face) for every A-block of every face, and
    every face of positive weight."""
    rows = []
    ok = True
    for fi, block in _a_blocks(x, a_edges):
        per = perimeter_of_word(x, block, w)
        wt = weight_of_relator(x, fi, w)
        good = wt > 0 and per <= wt
        ok &= good
        rows.append([fi, x.format(block), str(per), str(wt), good])
    for fi in range(len(x.faces)):
        if weight_of_relator(x, fi, w) <= 0:
            ok = False
    return ok, rows


def find_scheme(x: TwoComplex, a_edges: frozenset) -> WeightAssignment | None:
    """First {0,1} scheme constant on letters (smallest unit sets first)
    satisfying the route inequalities."""
    edges = sorted({e for f in x.faces for e, _ in f.boundary})
    for size in range(1, len(edges) + 1):
        for unit in itertools.combinations(edges, size):
            w = scheme_weights(x, unit)
            if route_inequalities(x, a_edges, w)[0]:
                return w
    return None


# ------------------------------------------------------------- certificates

@dataclass
class Premise:
    name: str
    holds: bool
    detail: object = None


@dataclass
class Certificate:
    verdict: str
    route: str | None
    presentation: str
    a_letters: list[str] = field(default_factory=list)
    unit_letters: list[str] = field(default_factory=list)
    premises: list[Premise] = field(default_factory=list)
    attempts: list[list] = field(default_factory=list)  # [route, A letters, first failed premise]

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        data = dict(data)
        data["premises"] = [Premise(**p) for p in data.get("premises", [])]
        return cls(**data)


def _windmill_premises(x: TwoComplex, sep) -> list[Premise]:
    verdicts, ok = check_windmill(x, sep)
    chords = [len(fd.chords) for fd in sep.per_face]
    out = [Premise(f"windmill({sep.kind})", ok, {"chords per face": chords})]
    if not ok:
        return out
    graph, classes = compute_essence(x, sep)
    inj = is_pi1_injective(graph)
    ranks = graph.betti_numbers()
    out.append(Premise(f"essence({sep.kind}) injective", inj.injective,
                       {"classes": len(set(classes.values())), "component ranks": ranks}))
    return out


def _weight_premise(x: TwoComplex, a_edges: frozenset, w: WeightAssignment | None, label: str) -> Premise:
    if w is None:
        return Premise(label, False, "no {0,1} letter scheme satisfies the inequalities")
    ok, rows = route_inequalities(x, a_edges, w)
    return Premise(label, ok, {"unit": [x.edge_name(e) for e in sorted(w.unit_edges)], "blocks": rows})


def _t_windmill_premises(x: TwoComplex, a_edges: frozenset) -> tuple[list[Premise], frozenset]:
    t = frozenset(range(len(x.edges))) - a_edges
    (te,) = t
    out = _windmill_premises(x, build_generator_graph(x, a_edges))
    out.append(Premise("inclusion of A", check_freiheitssatz(x, a_edges).certified, "freiheitssatz"))
    w = scheme_weights(x, t)
    f = x.faces[0]
    per = perimeter_of_word(x, ((te, 1),), w)
    weight_n = weight_of_relator(x, 0, w)
    weight_1 = weight_n / f.exponent
    out.append(Premise("Perimeter(t) <= Weight(W^N)", 0 < per <= weight_n,
                       {"Perimeter(t)": str(per), "Weight(W)": str(weight_1), "Weight(W^N)": str(weight_n)}))
    return out, t


def _ab_case_premises(x: TwoComplex, a_edges: frozenset) -> tuple[list[Premise], frozenset]:
    out = [Premise("relator is a proper power", x.faces[0].exponent >= 2, {"exponent": x.faces[0].exponent})]
    out += _windmill_premises(x, build_generator_graph(x, a_edges))
    out.append(Premise("inclusion of A", check_freiheitssatz(x, a_edges).certified, "freiheitssatz"))
    w = scheme_weights(x, a_edges)
    out.append(_weight_premise(x, a_edges, w, "Perimeter(A_i) <= Weight(W^n)"))
    return out, a_edges


def _single_letter_blocks(x: TwoComplex, a_edges: frozenset) -> bool:
    word = x.faces[0].boundary
    n = len(word)
    for i, (e, _) in enumerate(word):
        if e not in a_edges and word[(i + 1) % n][0] not in a_edges:
            return False
    return sum(1 for e, _ in word if e not in a_edges) >= 2


def _one_rel_boundary_premises(x: TwoComplex, a_edges: frozenset) -> tuple[list[Premise], frozenset]:
    b = frozenset(range(len(x.edges))) - a_edges
    out = [Premise("relator alternates single b-letters with A-words", _single_letter_blocks(x, a_edges))]
    out += _windmill_premises(x, build_boundary_graph(x, a_edges))
    out.append(Premise("inclusion of A", check_freiheitssatz(x, a_edges).certified, "freiheitssatz"))
    out.append(_weight_premise(x, a_edges, scheme_weights(x, b), "Perimeter(A_i) <= Weight(W^n)"))
    return out, b


def _staggered_premises(x: TwoComplex, a_edges: frozenset) -> tuple[list[Premise], frozenset]:
    v = check_staggered(x, a_edges)
    detail = None
    if v.certified:
        detail = {"edges": [x.edge_name(e) for e in v.witness.edge_order], "faces": list(v.witness.face_order)}
    out = [Premise("staggered ordering", v.certified, detail or v.reason)]
    out += _windmill_premises(x, build_generator_graph(x, a_edges))
    w = find_scheme(x, a_edges)
    out.append(_weight_premise(x, a_edges, w, "Perimeter(A_i) <= Weight(face)"))
    return out, (w.unit_edges if w else frozenset())


def _small_cancellation_premises(x: TwoComplex, a_edges: frozenset) -> tuple[list[Premise], frozenset]:
    v = check_small_cancellation(x, a_edges)
    out = [Premise("small cancellation inclusion", v.certified, v.reason)]
    out += _windmill_premises(x, build_boundary_graph(x, a_edges))
    w = find_scheme(x, a_edges)
    out.append(_weight_premise(x, a_edges, w, "Perimeter(A_i) <= Weight(face)"))
    return out, (w.unit_edges if w else frozenset())


_PREMISES = {
    T_WINDMILLS: _t_windmill_premises,
    AB_CASE: _ab_case_premises,
    ONE_REL_BOUNDARY: _one_rel_boundary_premises,
    STAGGERED: _staggered_premises,
    SMALL_CANCELLATION: _small_cancellation_premises,
}


def _candidate_splits(x: TwoComplex, route: str, a_choice: frozenset | None) -> list[frozenset]:
    gens = frozenset(range(len(x.edges)))
    used = sorted({e for f in x.faces for e, _ in f.boundary})
    if route in (T_WINDMILLS, AB_CASE, ONE_REL_BOUNDARY) and len(x.faces) != 1:
        return []
    if route in (T_WINDMILLS, ONE_REL_BOUNDARY):
        cands = [gens - {e} for e in reversed(used)]  # later generators first as the stable letter
    else:
        cands = [frozenset(c) for r in range(1, len(used)) for c in itertools.combinations(used, r)]
    if a_choice is not None:
        cands = [c for c in cands if c == a_choice]
    return cands


def route_premises(x: TwoComplex, route: str, a_edges: Iterable[int]) -> tuple[list[Premise], frozenset]:
    """Recompute the premises of ``route`` for the split with A = ``a_edges``;
    also returns the unit edges of the weight scheme used."""
    return _PREMISES[route](x, frozenset(a_edges))


def certify_coherence(p: Presentation, a_letters: Iterable[str] | None = None,
                      routes: Sequence[str] = ROUTE_ORDER) -> Certificate:
    """Try each route in priority order over the admissible splits; the first
    split whose premises all hold gives a Certified certificate."""
    x = build_standard_complex(p)
    a_choice = None if a_letters is None else frozenset(p.gen_id(n) for n in a_letters)
    attempts = []
    for route in routes:
        cands = _candidate_splits(x, route, a_choice)
        if not cands:
            attempts.append([route, [], "route does not apply to this presentation"])
        for a in cands:
            premises, unit = route_premises(x, route, a)
            names = [p.generators[e] for e in sorted(a)]
            failed = next((q for q in premises if not q.holds), None)
            if failed is None:
                return Certificate(CERTIFIED, route, str(p), names, [p.generators[e] for e in sorted(unit)],
                                   premises, attempts)
            attempts.append([route, names, failed.name])
    return Certificate(UNKNOWN, None, str(p), attempts=attempts)


def replay_certificate(cert: Certificate) -> tuple[bool, list[str]]:
    """Recompute every premise of a stored certificate and compare."""
    problems = []
    p = parse_presentation(cert.presentation)
    if str(p) != cert.presentation:
        problems.append("presentation does not round-trip")
    if cert.route is None:
        return (cert.verdict == UNKNOWN and not problems), problems
    x = build_standard_complex(p)
    a = frozenset(p.gen_id(n) for n in cert.a_letters)
    premises, unit = route_premises(x, cert.route, a)
    fresh = json.loads(json.dumps([asdict(q) for q in premises], sort_keys=True))
    stored = json.loads(json.dumps([asdict(q) for q in cert.premises], sort_keys=True))
    if fresh != stored:
        problems.append("premises differ on recomputation")
    if sorted(p.generators[e] for e in unit) != sorted(cert.unit_letters):
        problems.append("weight scheme differs on recomputation")
    if cert.verdict == CERTIFIED and not all(q.holds for q in premises):
        problems.append("certified with a failing premise")
    return not problems, problems


# ----------------------------------------------------------------- spelling

BLOCK_FORM = "B A B"  # S inside B_{i-1} A_i B_i
SINGLE_B_FORM = "A B A"  # S inside A_i B_i A_{i+1}: at most one B-block


@dataclass(frozen=True)
class SpellingWitness:
    q: Word
    s: Word
    position: int  # start of Q in the cyclic word p
    offset: int
    orientation: int
    window: int  # index of the block window containing S
    b_letters: int  # occurrences of B-letters in S


def _windows(x: TwoComplex, a_edges: frozenset, form: str) -> list[frozenset[int]]:
    """Cyclic position sets of the relator allowed to contain S."""
    w = x.faces[0].boundary
    n = len(w)
    tags = ["A" if e in a_edges else "B" for e, _ in w]
    if len(set(tags)) == 1:
        return [frozenset(range(n))]
    start = next(i for i in range(n) if tags[i] != tags[i - 1])
    runs: list[tuple[str, list[int]]] = []
    for j in range(n):
        i = (start + j) % n
        if runs and runs[-1][0] == tags[i]:
            runs[-1][1].append(i)
        else:
            runs.append((tags[i], [i]))
    centre = "A" if form == BLOCK_FORM else "B"
    out = []
    m = len(runs)
    for k, (tag, pos) in enumerate(runs):
        if tag == centre:
            out.append(frozenset(runs[k - 1][1]) | frozenset(pos) | frozenset(runs[(k + 1) % m][1]))
    return out


def _find_cyclic(p: Word, q: Word) -> int | None:
    if len(q) > len(p):
        return None
    doubled = p + p[:len(q) - 1]
    n = len(q)
    for i in range(len(p)):
        if doubled[i:i + n] == q:
            return i
    return None


def verify_spelling(x: TwoComplex, p: Sequence, a_edges: Iterable[int],
                    form: str = BLOCK_FORM) -> SpellingWitness | None:
    """A subword Q of the cyclic word ``p`` and a word S with Q S a cyclic
    conjugate of the relator or its inverse and S inside one block window.
    The witness with fewest B-letters in S, then shortest S, is returned."""
    p = tuple(p)
    if not p or not is_cyclically_reduced(p):
        raise ValueError("spelling needs a nonempty cyclically reduced word")
    if len(x.faces) != 1:
        raise ValueError("spelling is defined for one-relator complexes")
    a_edges = frozenset(a_edges)
    windows = _windows(x, a_edges, form)
    n = len(x.faces[0].boundary)
    best = None
    for _, offset, orient, w in x.readings():
        sides = [(offset + orient * j) % n for j in range(n)]
        for i in range(n, 0, -1):
            s_sides = frozenset(sides[i:])
            k = next((k for k, win in enumerate(windows) if s_sides <= win), None)
            if k is None:
                continue
            pos = _find_cyclic(p, w[:i])
            if pos is None:
                continue
            s = w[i:]
            wit = SpellingWitness(w[:i], s, pos, offset, orient, k, sum(1 for e, _ in s if e not in a_edges))
            if best is None or (wit.b_letters, len(wit.s)) < (best.b_letters, len(best.s)):
                best = wit
    return best


# ---------------------------------------------------------------- triviality

TRIVIAL = "Trivial"
NONTRIVIAL_WITHIN_BUDGET = "NontrivialWithinBudget"


@dataclass
class TrivialityResult:
    verdict: str
    area: int | None = None
    diagram: DiscDiagram | None = None
    greedy_steps: int = 0


def _greedy_pass(x: TwoComplex, p: Word, max_steps: int) -> tuple[Word, int]:
    """Replace a long relator piece Q by the shorter S^-1 until stuck."""
    readings = [w for _, _, _, w in x.readings()]
    cur = cyclic_reduce(p)
    steps = 0
    while cur and steps < max_steps:
        for w in readings:
            n = len(w)
            hit = None
            for i in range(n, n // 2, -1):
                pos = _find_cyclic(cur, w[:i])
                if pos is not None:
                    hit = (i, pos)
                    break
            if hit:
                i, pos = hit
                c = rotate(cur, pos)
                cur = cyclic_reduce(inverse(w[i:]) + c[i:])
                steps += 1
                break
        else:
            break
    return cur, steps


def decide_trivial(x: TwoComplex, p: Sequence, max_area: int = 4, strategy: str = "greedy",
                   oracle: AreaOracle | None = None) -> TrivialityResult:
    """Trivial with a minimal diagram, or NontrivialWithinBudget when no
    diagram of area at most ``max_area`` exists.  The greedy pass only
    supplies an upper bound; the verdict always comes from enumeration."""
    p = free_reduce(p)
    oracle = oracle or AreaOracle(x)
    word = cyclic_reduce(p)
    if not word:
        return TrivialityResult(TRIVIAL, 0, None)
    budget, steps = max_area, 0
    if strategy == "greedy":
        rest, steps = _greedy_pass(x, word, max_area)
        if not rest:
            budget = steps
    res = enumerate_minimal_diagrams(x, word, max_area=budget, oracle=oracle, limit=1)
    if res.diagrams:
        return TrivialityResult(TRIVIAL, res.min_area, res.diagrams[0], steps)
    if res.status == EXACT:
        return TrivialityResult(NONTRIVIAL_WITHIN_BUDGET, None, None, steps)
    return TrivialityResult(UNKNOWN, None, None, steps)


# --------------------------------------------------------------- enlargement

CONVERGED = "converged"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class EnlargementStep:
    loop: Word
    attached_faces: list[int]
    edges: list[int]
    faces: list[int]
    perimeter: Fraction


@dataclass
class EnlargementResult:
    status: str
    initial_perimeter: Fraction
    trace: list[EnlargementStep]

    @property
    def perimeters(self) -> list[Fraction]:
        return [self.initial_perimeter] + [s.perimeter for s in self.trace]

    @property
    def strictly_decreasing(self) -> bool:
        ps = self.perimeters
        return all(a > b for a, b in zip(ps, ps[1:]))


def _candidate_loops(x: TwoComplex, y_edges: frozenset, y_faces: frozenset, max_loop: int,
                     max_area: int, oracle: AreaOracle) -> list[Word]:
    """Loops in Y that are trivial in X: first the boundaries of missing
    faces lying in Y, then short trivial words over the edges of Y."""
    from .corpus import trivial_words

    out = [f.boundary for i, f in enumerate(x.faces)
           if i not in y_faces and all(e in y_edges for e, _ in f.boundary)]
    if len(x.vertices) == 1 and y_edges:
        out += sorted(trivial_words(x, max_loop, max_area, oracle=oracle, edges=y_edges))
    return out


def enlargement_loop(x: TwoComplex, y_edges: Iterable[int], y_faces: Iterable[int], w: WeightAssignment,
                     budget: int, max_area: int = 4, max_loop: int = 6) -> EnlargementResult:
    """Grow Y by the faces of a minimal diagram for a loop that is essential
    in Y but trivial in X, until no such loop is found within the budget
    (converged) or ``budget`` steps have been taken."""
    from .complex import make_complex

    y_edges, y_faces = set(y_edges), set(y_faces)
    oracle = AreaOracle(x)
    start = perimeter_of_subcomplex(x, y_edges, y_faces, w)
    trace: list[EnlargementStep] = []
    for _ in range(budget + 1):
        if len(y_faces) == len(x.faces):
            return EnlargementResult(CONVERGED, start, trace)
        if len(trace) == budget:
            return EnlargementResult(BUDGET_EXHAUSTED, start, trace)
        y_complex = make_complex(x.vertices, x.edges, [x.faces[i].boundary for i in sorted(y_faces)])
        y_oracle = AreaOracle(y_complex)
        chosen = None
        for loop in _candidate_loops(x, frozenset(y_edges), frozenset(y_faces), max_loop, max_area, oracle):
            if y_oracle.min_area(loop, max_area) is not None:
                continue  # already null-homotopic in Y
            res = decide_trivial(x, loop, max_area, oracle=oracle)
            if res.verdict == TRIVIAL:
                chosen = (loop, res.diagram)
                break
        if chosen is None:
            return EnlargementResult(CONVERGED, start, trace)
        loop, dg = chosen
        new_faces = sorted({c.x_face for c in dg.faces} - y_faces)
        for fi in new_faces:
            y_edges.update(e for e, _ in x.faces[fi].boundary)
        y_faces.update(new_faces)
        trace.append(EnlargementStep(loop, new_faces, sorted(y_edges), sorted(y_faces),
                                     perimeter_of_subcomplex(x, y_edges, y_faces, w)))
    return EnlargementResult(BUDGET_EXHAUSTED, start, trace)
