from fractions import Fraction

import pytest

from windmills.complex import parse_subcomplex
from windmills.folding import is_pi1_injective
from windmills.windmill import (CERTIFIED, REFUTED, UNKNOWN, build_boundary_graph, build_generator_graph,
                                certify_splitting_windmill, check_windmill, compute_essence, linked,
                                parse_overlay)

from conftest import load_cx, load_standard, std

CORPUS = [
    "<a, b | b a b^-1 a^-2>",
    "<a, b, t | t a t^-1 b^-1>",
    "<a, b, t | (t a t b)^2>",
    "<a, x, y | x a x^-1 a^-2, y a^2 y^-1 a^-3>",
    "<a, b | a^2 b^3>",
    "<a, t | t a t^-1 a^-2>",
    "<a, b, c | a b c b a c^-1>",
]


def _expected_counts(x, a_edges):
    # two points per B generator, one edge per B letter
    b = [e for e in range(len(x.edges)) if e not in a_edges]
    letters = sum(1 for f in x.faces for e, _ in f.boundary if e not in a_edges)
    return 2 * len(b), letters


@pytest.mark.parametrize("text", CORPUS)
def test_boundary_graph_counts(text):
    _, x = std(text)
    sep = build_boundary_graph(x, [0])
    assert sep.abstract_counts() == _expected_counts(x, {0})


def test_boundary_graph_labels():
    _, x = std("<a, b | b a b^-1 a^-2>")
    sep = build_boundary_graph(x, [0])
    labels = sorted(c.label for fd in sep.per_face for c in fd.chords)
    assert labels == sorted([((0, 1),), ((0, -1), (0, -1))])


def test_boundary_graph_of_f1_has_one_chord_per_a_component():
    sep = build_boundary_graph(load_standard("F1"), [0, 1])
    assert sep.abstract_counts() == (2, 2)
    assert sorted(c.label for c in sep.per_face[0].chords) == [((0, 1),), ((1, -1),)]


def test_hexagon_subcomplexes():
    x, text = load_cx("F3a")
    sep = build_boundary_graph(x, *parse_subcomplex(x, text))
    assert sep.abstract_counts() == (8, 4)
    assert check_windmill(x, sep)[1]
    x, text = load_cx("F3b")
    sep = build_boundary_graph(x, *parse_subcomplex(x, text))
    assert sep.abstract_counts() == (4, 2)
    chords = sep.per_face[0].chords
    assert sorted(len(c.label) for c in chords) == [1, 2]
    assert all(c.start.denominator == 3 and c.end.denominator == 3 for c in chords)


def test_subcomplex_must_be_closed():
    x, _ = load_cx("F3")
    with pytest.raises(ValueError):
        build_boundary_graph(x, [0], [0])


@pytest.mark.parametrize("name, a, components", [("F2", [0], 2), ("F4", [0, 1], 1), ("F1", [0, 1], 2)])
def test_generator_graphs(name, a, components):
    x = load_standard(name)
    sep = build_generator_graph(x, a)
    assert sep.components() == components
    assert check_windmill(x, sep)[1]
    ess, _ = compute_essence(x, sep)
    assert is_pi1_injective(ess).injective


def test_f4_essence_merges_period_rotation():
    x = load_standard("F4")
    sep = build_generator_graph(x, [0, 1])
    assert sep.abstract_counts() == (2, 4)
    ess, classes = compute_essence(x, sep)
    assert len(set(classes.values())) == 2
    assert len(ess.edges) == 2


def test_torus_knot_boundary_essence_not_injective():
    _, x = std("<a, b | a^2 b^3>")
    sep = build_boundary_graph(x, [0])
    assert check_windmill(x, sep)[1]
    ess, _ = compute_essence(x, sep)
    assert ess.trivial_loops >= 1
    assert not is_pi1_injective(ess).injective
    assert certify_splitting_windmill(x, sep, CERTIFIED).verdict == REFUTED


def test_splitting_needs_certified_inclusion():
    x = load_standard("F2")
    sep = build_generator_graph(x, [0])
    assert certify_splitting_windmill(x, sep, CERTIFIED).verdict == CERTIFIED
    assert certify_splitting_windmill(x, sep, UNKNOWN).verdict == UNKNOWN


def test_overlay_with_linked_chords_fails_windmill():
    x, _ = load_cx("F3")
    text = "f R\ngp e1 1/2\ngp e2 1/2\ngp e4 1/2\ngp e5 1/2\n" \
           "chord R 0@1/2 3@1/2 ccw\nchord R 1@1/2 4@1/2 ccw\n"
    sep = parse_overlay(x, text)
    fd = sep.per_face[0]
    assert linked(fd, fd.chords[0], fd.chords[1])
    assert not check_windmill(x, sep)[1]


def test_overlay_positions():
    x, _ = load_cx("F3")
    sep = parse_overlay(x, "f R\ngp e1 1/2\ngp e4 1/2\nchord R 0@1/2 3@1/2 ccw\n")
    c = sep.per_face[0].chords[0]
    assert (c.start, c.end) == (Fraction(1, 2), Fraction(7, 2))
    assert c.label == ((1, 1), (2, 1))  # whole sides strictly inside the arc
