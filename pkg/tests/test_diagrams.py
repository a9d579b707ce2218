import random

import pytest
from hypothesis import given, settings, strategies as st

from windmills.diagrams import (AreaOracle, FaceCell, add_cancellable_pair, cancel_pair, enumerate_minimal_diagrams,
                                find_cancellable_pair, glue_face, random_diagram, reading, reduce_diagram,
                                single_face, validate_diagram, wedge)
from windmills.words import cyclic_reduce, inverse, inverse_letter, parse_word

from conftest import load_standard


def test_single_face_is_valid(F2):
    d = single_face(F2)
    rep = validate_diagram(d, F2)
    assert rep.valid
    assert rep.boundary_word == F2.faces[0].boundary
    assert d.area == 1
    v, e, f = d.counts()
    assert v - e + f == 1


def test_two_faces_sharing_an_edge(F2):
    d = single_face(F2)
    first = inverse_letter(d.label[d.boundary[0]])
    offset = next(o for o in range(5) if reading(F2, 0, o, 1)[0] == first)
    d2 = glue_face(d, F2, 0, 1, 0, offset, 1)
    assert validate_diagram(d2, F2).valid and d2.area == 2


def test_label_mismatch_is_reported(F2):
    d = single_face(F2)
    cell = d.faces[0]
    d.faces[0] = FaceCell(cell.x_face, (cell.offset + 1) % 5, cell.orientation, cell.darts)
    rep = validate_diagram(d, F2)
    assert not rep.valid and rep.problems


def test_glue_rejects_mismatched_arc(F2):
    d = single_face(F2)
    bad = next(o for o in range(5) if reading(F2, 0, o, 1)[0] != inverse_letter(d.label[d.boundary[0]]))
    with pytest.raises(ValueError):
        glue_face(d, F2, 0, 1, 0, bad, 1)


def test_enumerate_relator(F2):
    r = enumerate_minimal_diagrams(F2, F2.faces[0].boundary, 4)
    assert (r.status, r.min_area, len(r.diagrams)) == ("Exact", 1, 1)


def test_enumerate_nontrivial_word(F2):
    r = enumerate_minimal_diagrams(F2, parse_word("a", F2.names), 4)
    assert r.status == "Exact" and r.diagrams == [] and r.min_area is None


def test_enumerate_handles_rotation(F1):
    r = enumerate_minimal_diagrams(F1, parse_word("b^-1 t a t^-1", F1.names), 4)
    assert [d.area for d in r.diagrams] == [1]


def test_enumerated_diagrams_are_minimal(F2):
    o = AreaOracle(F2)
    p = parse_word("t a^2 t^-1 a^-4", F2.names)
    r = enumerate_minimal_diagrams(F2, p, 5, oracle=o)
    assert r.min_area == 2 == o.min_area(p, 5)
    for d in r.diagrams:
        assert validate_diagram(d, F2).valid
        assert find_cancellable_pair(d) is None
        assert cyclic_reduce(d.boundary_word()) in {cyclic_reduce(p[k:] + p[:k]) for k in range(len(p))}


@pytest.mark.parametrize("text", ["t a^2 t^-1 a^-4", "t a t^-1 a t a^-1 t^-1 a^-1", "t a t^-1 a^-2"])
def test_orientation_completeness(F2, text):
    p = parse_word(text, F2.names)
    a = enumerate_minimal_diagrams(F2, p, 5)
    b = enumerate_minimal_diagrams(F2, inverse(p), 5)
    assert len(a.diagrams) == len(b.diagrams) and a.min_area == b.min_area


def test_limit_reports_budget_exceeded(F2):
    p = parse_word("t a^2 t^-1 a^-4", F2.names)
    r = enumerate_minimal_diagrams(F2, p, 5, limit=0)
    assert r.status == "BudgetExceeded"


def test_doubled_face_cancels_to_single_face(F2):
    d = single_face(F2)
    dd = add_cancellable_pair(d, F2, random.Random(0))
    assert dd.area == 3
    pair = find_cancellable_pair(dd)
    assert pair is not None
    c = cancel_pair(dd, pair)
    assert c.area == 1
    assert c.boundary_word() == dd.boundary_word()
    assert validate_diagram(c, F2).valid
    assert find_cancellable_pair(c) is None


def test_single_face_has_no_pair(F2):
    assert find_cancellable_pair(single_face(F2)) is None


def test_proper_power_pair_uses_period_rotation(F4):
    d = single_face(F4)
    d1 = glue_face(d, F4, 0, 1, 0, 4, -1)
    d2 = glue_face(d1, F4, 0, 7, 0, 5, 1)
    assert validate_diagram(d2, F4).valid
    pair = find_cancellable_pair(d2)
    assert pair is not None and {pair.face1, pair.face2} == {0, 1}
    assert d2.faces[0].offset != d2.faces[1].offset


def test_wedge_keeps_boundary_and_area(F2):
    w = wedge(single_face(F2), 0, single_face(F2), 2)
    assert validate_diagram(w, F2).valid
    assert w.area == 2
    assert len(w.boundary_word()) == 10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_surgery_fuzz(seed, area):
    x = load_standard("F2")
    rng = random.Random(seed)
    d = add_cancellable_pair(random_diagram(x, area, rng), x, rng)
    assert validate_diagram(d, x).valid
    pair = find_cancellable_pair(d)
    assert pair is not None
    c = cancel_pair(d, pair)
    assert c.area == d.area - 2
    assert c.boundary_word() == d.boundary_word()
    assert validate_diagram(c, x).valid


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_reduce_diagram_removes_all_pairs(seed):
    x = load_standard("F2")
    rng = random.Random(seed)
    d = add_cancellable_pair(add_cancellable_pair(random_diagram(x, 2, rng), x, rng), x, rng)
    r = reduce_diagram(d)
    assert find_cancellable_pair(r) is None
    assert r.boundary_word() == d.boundary_word()
    assert (d.area - r.area) % 2 == 0


def test_area_oracle_keys_are_rotation_invariant(F2):
    p = parse_word("t a t^-1 a^-2", F2.names)
    assert AreaOracle.key(p) == AreaOracle.key(p[2:] + p[:2])
    assert AreaOracle(F2).min_area(p, 3) == 1
