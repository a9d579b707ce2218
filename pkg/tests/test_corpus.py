import hashlib
import random
from collections import Counter

import pytest

from windmills.corpus import (PermRep, _Lattice, affine_rep, product_words, random_involution, random_perm,
                              solve_last_letter, trivial_words)
from windmills.corpus import _compose
from windmills.diagrams import AreaOracle
from windmills.words import canonical_cyclic, format_word, is_cyclically_reduced

from conftest import group_reps, load_standard

# F2, length <= 12, area <= 4: agreed with a filter-free brute force
F2_COUNT = 168
F2_DIGEST = "058af848faffe69e"
F2_AREAS = [(1, 2), (2, 78), (3, 42), (4, 46)]


def _digest(x, words):
    text = "\n".join(sorted(format_word(w, x.names) for w in words))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _brute(x, max_length, max_area):
    oracle = AreaOracle(x)
    letters = [(e, s) for e in range(len(x.edges)) for s in (1, -1)]
    found = {}

    def rec(w):
        if w and is_cyclically_reduced(w) and canonical_cyclic(w) == w:
            a = oracle.min_area(w, max_area)
            if a is not None:
                found[w] = a
        if len(w) == max_length:
            return
        for l in letters:
            if not w or w[-1] != (l[0], -l[1]):
                rec(w + (l,))

    rec(())
    return found


def test_group_reps_are_representations():
    for name in ("F1", "F2", "F4"):
        x = load_standard(name)
        assert all(r.is_representation(x) for r in group_reps(name))


def test_filters_agree_with_brute_force_at_small_length(F2):
    assert trivial_words(F2, 8, 3, group_reps("F2")) == _brute(F2, 8, 3)


def test_frozen_f2_corpus(F2):
    words = trivial_words(F2, 12, 4, group_reps("F2"))
    assert len(words) == F2_COUNT
    assert _digest(F2, words) == F2_DIGEST
    assert sorted(Counter(words.values()).items()) == F2_AREAS


def test_non_representation_rejected(F2):
    with pytest.raises(ValueError):
        trivial_words(F2, 4, 2, [PermRep(((1, 2, 0), (0, 1, 2)))])


def test_affine_rep_of_f2_kills_the_relator(F2):
    rep = affine_rep(7, [(1, 1), (4, 0)])
    assert rep.kills(F2.faces[0].boundary)
    assert not rep.kills(((0, 1),))


def test_solve_last_letter():
    rng = random.Random(0)
    p, q = random_perm(6, rng), random_involution(6, rng)
    assert _compose(p, solve_last_letter(p, q)) == q
    assert _compose(q, q) == tuple(range(6))


def test_lattice_membership():
    lat = _Lattice([[2, 0, 0], [0, 3, 0]])
    assert lat.contains([4, -3, 0])
    assert not lat.contains([1, 0, 0])
    assert not lat.contains([0, 0, 1])


def test_product_words_are_trivial(F2):
    oracle = AreaOracle(F2)
    words = product_words(F2, 2)
    assert canonical_cyclic(F2.faces[0].boundary) in words
    for w in words:
        a = oracle.min_area(w, 2)
        assert a is not None and a <= 2
