"""Acceptance criteria 1-10, each at its stated tolerance and time limit."""

import random
import time
from collections import Counter

import pytest

from windmills.coherence import (CERTIFIED, CONVERGED, STAGGERED, UNKNOWN, BLOCK_FORM, certify_coherence,
                                 enlargement_loop, scheme_weights, verify_spelling)
from windmills.corpus import product_words, trivial_words
from windmills.diagrams import (AreaOracle, add_cancellable_pair, cancel_pair, enumerate_minimal_diagrams,
                                find_cancellable_pair, random_diagram, validate_diagram)
from windmills.folding import graph_from_edges, is_closed_path, is_pi1_injective, short_kernel_witness
from windmills.hypotheses import inclusion_verdict
from windmills.pullback import structure_report
from windmills.windmill import build_boundary_graph, build_generator_graph, certify_splitting_windmill
from windmills.words import free_reduce, parse_presentation

from conftest import group_reps, load_pres, load_standard, record_criterion, std

# presentations of the form <a..., b... | W_1 ... W_r> with A = the a-letters
COUNT_CORPUS = [
    ("<a, b | b a b^-1 a^-2>", 1),
    ("<a, b, t | t a t^-1 b^-1>", 2),
    ("<a, b, t | (t a t b)^2>", 2),
    ("<a, x, y | x a x^-1 a^-2, y a^2 y^-1 a^-3>", 1),
    ("<a, b | a^2 b^3>", 1),
    ("<a, t | t a t^-1 a^-2>", 1),
    ("<a, b, c | a b c b a c^-1>", 1),
    ("<a, c, x, y | x a y c x^-1, y^2 a^-1 x>", 2),
]

SINGLE_T = [
    "<a, b, t | t a t^-1 b^-1>",
    "<a, t | t a t^-1 a^-2>",
    "<a, b, t | (t a t b)^2>",
    "<a, t | t a t^-1 a^-3>",
    "<a, t | t a^2 t^-1 a^-3>",
    "<a, b, t | t a t^-1 b a b^-1>",
    "<a, b, t | t a b t^-1 a^-1 b^-2>",
    "<a, t | t^2 a t^-2 a^-1>",
    "<a, b, t | t a t^-1 b t a^-1 t^-1 b^-1>",
]

# diagram corpus for criteria 3-5: name -> (A letters, word length bound)
STRUCTURE = {"F1": ({0, 1}, 10), "F2": ({0}, 12), "F4": ({0, 1}, 12)}
MAX_AREA = 5


def test_criterion_1_boundary_graph_counts():
    t0 = time.perf_counter()
    bad = []
    for text, n_a in COUNT_CORPUS:
        _, x = std(text)
        a = set(range(n_a))
        sep = build_boundary_graph(x, a)
        q = len(x.edges) - n_a
        s = sum(1 for f in x.faces for e, _ in f.boundary if e not in a)
        if sep.abstract_counts() != (2 * q, s):
            bad.append(text)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1 and len(COUNT_CORPUS) >= 5
    record_criterion(1, ok, dt, 1, f"{len(COUNT_CORPUS)} presentations")
    assert ok, bad


def test_criterion_2_generator_graph_components():
    t0 = time.perf_counter()
    seen = []
    for text in SINGLE_T:
        p, x = std(text)
        t = p.gen_id("t")
        sep = build_generator_graph(x, set(range(len(x.edges))) - {t})
        seen.append(sep.components())
    dt = time.perf_counter() - t0
    ok = all(c in (1, 2) for c in seen) and dt < 1
    record_criterion(2, ok, dt, 1, f"components {Counter(seen)}")
    assert ok


@pytest.fixture(scope="module")
def structure_run():
    """Every minimal diagram (area <= 5) of every word in the corpus, with
    its structure report.  Built once for criteria 3, 4 and 5."""
    t0 = time.perf_counter()
    reports = []
    for name, (a, length) in STRUCTURE.items():
        x = load_standard(name)
        sep = build_generator_graph(x, a)
        verdict = certify_splitting_windmill(x, sep, inclusion_verdict(x, a).verdict).verdict
        assert verdict == CERTIFIED, name
        oracle = AreaOracle(x)
        words = set(trivial_words(x, length, MAX_AREA, group_reps(name), oracle))
        words |= product_words(x, 3)
        for w in sorted(words):
            for d in enumerate_minimal_diagrams(x, w, MAX_AREA, oracle=oracle).diagrams:
                reports.append((name, structure_report(d, x, sep)))
    return reports, time.perf_counter() - t0


def test_criterion_3_forest(structure_run):
    reports, dt = structure_run
    t0 = time.perf_counter()
    bad = [r for _, r in reports if not (r.forest.is_forest and r.forest.all_leaves_on_boundary)]
    dt += time.perf_counter() - t0
    per = Counter(n for n, _ in reports)
    ok = not bad and dt <= 300
    record_criterion(3, ok, dt, 300, f"{len(reports)} diagrams {dict(per)}, {len(bad)} violations")
    assert ok


def test_criterion_4_tree_like_and_simply_connected(structure_run):
    reports, _ = structure_run
    t0 = time.perf_counter()
    bad = [r for _, r in reports if not (r.tree_like and r.simply_connected)]
    dt = time.perf_counter() - t0
    record_criterion(4, not bad, dt, 300, f"{len(reports)} diagrams, {len(bad)} violations")
    assert not bad


def test_criterion_5_extreme_and_dangling(structure_run):
    reports, _ = structure_run
    t0 = time.perf_counter()
    bad = [r for _, r in reports
           if (r.area >= 2 and r.extreme < 2) or (not r.nonsingular and r.dangling < 2)]
    singular = sum(1 for _, r in reports if not r.nonsingular)
    dt = time.perf_counter() - t0
    record_criterion(5, not bad, dt, 300, f"{singular} singular, {len(bad)} violations")
    assert not bad


def test_criterion_6_spelling():
    t0 = time.perf_counter()
    failures = []
    counts = {}
    for name, a in (("F2", {0}), ("F4", {0, 1})):
        x = load_standard(name)
        words = trivial_words(x, 12, 4, group_reps(name))
        counts[name] = len(words)
        b = set(range(len(x.edges))) - a
        for w in words:
            wit = verify_spelling(x, w, a, BLOCK_FORM)
            if wit is None:
                failures.append((name, w))
            elif name == "F2" and sum(1 for e, _ in wit.s if e in b) > 1:
                failures.append((name, w, "more than one t in S"))
    dt = time.perf_counter() - t0
    ok = not failures and dt <= 600
    record_criterion(6, ok, dt, 600, f"words {counts}, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_7_folding_oracles():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = []
    for _ in range(1000):
        n_v = rng.randint(1, 5)
        edges = [(rng.randrange(n_v), rng.randrange(n_v), rng.randrange(3))
                 for _ in range(rng.randint(1, 8))]
        g = graph_from_edges(edges, range(n_v))
        v = is_pi1_injective(g)
        if v.injective:
            if short_kernel_witness(g, 8) is not None:
                bad.append(edges)
        elif not (is_closed_path(g, v.witness) and free_reduce(g.path_word(v.witness)) == ()):
            bad.append(edges)
    dt = time.perf_counter() - t0
    ok = not bad and dt <= 60
    record_criterion(7, ok, dt, 60, f"1000 graphs, {len(bad)} counterexamples")
    assert ok, bad[:3]


@pytest.mark.parametrize("name, expected, route", [
    ("F4", CERTIFIED, None), ("F2", CERTIFIED, None), ("F5", CERTIFIED, STAGGERED), ("torus_knot", UNKNOWN, None),
])
def test_criterion_8_certification(name, expected, route):
    t0 = time.perf_counter()
    c = certify_coherence(load_pres(name))
    dt = time.perf_counter() - t0
    ok = c.verdict == expected and (route is None or c.route == route) and dt < 5
    record_criterion(8, ok, dt, 5, f"{name}: {c.verdict} via {c.route}")
    assert ok


def test_criterion_9_enlargement():
    t0 = time.perf_counter()
    x = load_standard("F2")
    r = enlargement_loop(x, {0, 1}, (), scheme_weights(x, {1}), budget=10)
    dt = time.perf_counter() - t0
    ok = r.status == CONVERGED and r.strictly_decreasing and dt < 60
    record_criterion(9, ok, dt, 60, f"perimeters {[str(p) for p in r.perimeters]}")
    assert ok


def test_criterion_10_surgery():
    t0 = time.perf_counter()
    rng = random.Random(10)
    bad = 0
    for i in range(200):
        name = ("F1", "F2", "F4")[i % 3]
        x = load_standard(name)
        d = add_cancellable_pair(random_diagram(x, rng.randint(1, 4), rng), x, rng)
        pair = find_cancellable_pair(d)
        if pair is None:
            bad += 1
            continue
        c = cancel_pair(d, pair)
        if c.area != d.area - 2 or c.boundary_word() != d.boundary_word() or not validate_diagram(c, x).valid:
            bad += 1
    dt = time.perf_counter() - t0
    record_criterion(10, bad == 0, dt, 60, f"200 diagrams, {bad} violations")
    assert bad == 0
