import random

from windmills.diagrams import add_cancellable_pair, enumerate_minimal_diagrams, random_diagram, single_face, wedge
from windmills.pullback import (connection_graph, dangling_subdiagrams, extreme_cells, forest_check,
                                outermost_components, pullback_separator, simple_connectivity, structure_report,
                                z_components)
from windmills.windmill import build_generator_graph
from windmills.words import parse_word

from conftest import load_standard


def _sep(x):
    return build_generator_graph(x, [0])


def test_single_face_pullback(F2):
    pb = pullback_separator(single_face(F2), F2, _sep(F2))
    assert len(pb.arcs) == 2 and len(pb.nodes) == 4
    assert pb.consistent
    fr = forest_check(pb)
    assert fr.is_forest and fr.all_leaves_on_boundary
    cg = connection_graph(pb)
    # two arc components and three regions
    assert cg.graph.number_of_nodes() == 5 and cg.is_tree
    cells = extreme_cells(pb)
    assert [c.face for c in cells] == [0] and c_is_whole(cells[0], 5)


def c_is_whole(cell, n):
    return len(cell.q_darts) == n and cell.s_darts == ()


def test_empty_separator(F2):
    pb = pullback_separator(single_face(F2), F2, build_generator_graph(F2, [0, 1]))
    assert pb.arcs == [] or len(pb.arcs) == 0
    assert forest_check(pb).is_forest
    assert connection_graph(pb).is_tree


def test_two_face_diagram_with_split_z(F2):
    p = parse_word("t a t^-1 a t a^-1 t^-1 a^-1", F2.names)
    (d,) = enumerate_minimal_diagrams(F2, p, 4).diagrams
    pb = pullback_separator(d, F2, _sep(F2))
    assert len(z_components(pb)) == 2
    outer = outermost_components(pb)
    assert len(outer) == 2 and all(o.separator for o in outer)
    assert len(extreme_cells(pb)) == 2
    assert structure_report(d, F2, _sep(F2)).violations() == []


def test_area_four_diagram(F2):
    p = parse_word("t a^4 t^-1 a^-8", F2.names)
    (d,) = enumerate_minimal_diagrams(F2, p, 5).diagrams
    rep = structure_report(d, F2, _sep(F2))
    assert rep.area == 4 and rep.extreme == 2 and not rep.violations()


def test_non_minimal_diagram_can_have_a_cycle(F2):
    # a cancellable pair can close a loop of the pulled-back separator
    rng = random.Random(3)
    found = False
    for _ in range(50):
        d = add_cancellable_pair(random_diagram(F2, rng.randint(1, 3), rng), F2, rng)
        if not forest_check(pullback_separator(d, F2, _sep(F2))).is_forest:
            found = True
            break
    assert found


def test_dangling_examples(F2):
    assert dangling_subdiagrams(single_face(F2)).nonsingular
    two = wedge(single_face(F2), 0, single_face(F2), 0)
    rep = dangling_subdiagrams(two)
    assert not rep.nonsingular and len(rep.dangling) == 2
    three = wedge(two, 2, single_face(F2), 0)
    rep = dangling_subdiagrams(three)
    assert len(rep.cut_vertices) == 2 and len(rep.dangling) == 2


def test_singular_diagram_structure(F2):
    two = wedge(single_face(F2), 0, single_face(F2), 0)
    rep = structure_report(two, F2, _sep(F2))
    assert not rep.nonsingular and rep.dangling == 2 and rep.violations() == []


def test_simple_connectivity_of_corpus_diagram(F4):
    sep = build_generator_graph(F4, [0, 1])
    pb = pullback_separator(single_face(F4), F4, sep)
    rep = simple_connectivity(pb)
    assert rep.regions_ok and rep.gamma_ok
