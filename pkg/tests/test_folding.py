import random

from hypothesis import given, settings, strategies as st

from windmills.folding import (fold_graph, graph_from_edges, is_closed_path, is_pi1_injective, short_kernel_witness,
                               subdivide_by_words)
from windmills.words import free_reduce

A, B = 0, 1


def test_subdivision_of_a_two_letter_edge():
    g = subdivide_by_words([0, 1], [(0, 1, ((A, 1), (B, 1)))])
    assert len(g.vertices) == 3
    assert len(g.edges) == 2


def test_empty_edge_identifies_its_ends():
    g = subdivide_by_words([0, 1], [(0, 1, ())])
    assert g.vertices == (0,)
    assert g.edges == ()
    assert g.trivial_loops == 0


def test_second_empty_edge_is_a_trivial_loop():
    g = subdivide_by_words([0, 1], [(0, 1, ()), (1, 0, ())])
    assert g.trivial_loops == 1
    v = is_pi1_injective(g)
    assert not v.injective and v.witness == ()


def test_inverse_square_loop():
    g = subdivide_by_words([0], [(0, 0, ((A, -1), (A, -1)))])
    assert len(g.edges) == 2
    assert all(lab == A for _, _, lab in g.edges)


def test_double_loop_folds_with_rank_drop():
    g = graph_from_edges([(0, 0, A), (0, 0, A)])
    folded, log = fold_graph(g)
    assert len(folded.edges) == 1
    assert log.rank_drops == 1
    v = is_pi1_injective(g)
    assert not v.injective
    assert is_closed_path(g, v.witness)
    assert free_reduce(g.path_word(v.witness)) == ()


def test_immersed_rose_is_unchanged():
    g = graph_from_edges([(0, 0, A), (0, 0, B)])
    folded, log = fold_graph(g)
    assert len(folded.edges) == 2 and not log.events
    assert is_pi1_injective(g).injective


def test_generator_graph_of_f2_folds_injectively():
    # {loop a} and {loop a^-2}
    g = subdivide_by_words([0, 1], [(0, 0, ((A, 1),)), (1, 1, ((A, -1), (A, -1)))])
    _, log = fold_graph(g)
    assert log.rank_drops == 0
    assert len(g.components()) == 2
    assert is_pi1_injective(g).injective
    assert short_kernel_witness(g, 8) is None


def test_boundary_graph_of_f1_is_injective():
    g = subdivide_by_words([0, 1], [(0, 1, ((A, 1),)), (0, 1, ((B, -1),))])
    assert is_pi1_injective(g).injective


def test_short_kernel_witness_examples():
    assert len(short_kernel_witness(graph_from_edges([(0, 0, A), (0, 0, A)]), 2)) == 2
    assert short_kernel_witness(graph_from_edges([(0, 0, A)]), 10) is None


def _random_graph(rng, n_edges):
    n_vertices = rng.randint(1, 4)
    edges = [(rng.randrange(n_vertices), rng.randrange(n_vertices), rng.randrange(2)) for _ in range(n_edges)]
    return graph_from_edges(edges, range(n_vertices))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_fold_agrees_with_brute_force(seed, n_edges):
    g = _random_graph(random.Random(seed), n_edges)
    verdict = is_pi1_injective(g)
    witness = short_kernel_witness(g, 8)
    if verdict.injective:
        assert witness is None
    else:
        assert is_closed_path(g, verdict.witness)
        assert free_reduce(g.path_word(verdict.witness)) == ()
    if witness is not None:
        assert not verdict.injective
        assert free_reduce(g.path_word(witness)) == ()


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7))
def test_folding_preserves_components(seed, n_edges):
    g = _random_graph(random.Random(seed), n_edges)
    folded, _ = fold_graph(g)
    assert len(folded.components()) == len(g.components())
