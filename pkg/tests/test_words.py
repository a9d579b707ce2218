import pytest
from hypothesis import given, strategies as st

from windmills.words import (AlphabetSplit, PresentationError, alternation_decompose, canonical_cyclic,
                             cyclic_reduce, format_word, free_reduce, inverse, is_cyclically_reduced,
                             parse_presentation, parse_word, period_decompose, rotate)

letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=14).map(tuple)


def test_free_reduce_cancels_adjacent_pairs():
    assert free_reduce([(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]) == ((2, 1),)


def test_cyclic_reduce_strips_conjugation():
    assert cyclic_reduce([(1, 1), (0, 1), (0, 1), (1, -1)]) == ((0, 1), (0, 1))


@given(words)
def test_reductions_are_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    c = cyclic_reduce(w)
    assert is_cyclically_reduced(c)
    assert cyclic_reduce(c) == c


@given(words)
def test_inverse_cancels(w):
    assert free_reduce(tuple(w) + inverse(w)) == ()


@given(words, st.integers(0, 20))
def test_canonical_cyclic_is_rotation_invariant(w, k):
    assert canonical_cyclic(rotate(w, k)) == canonical_cyclic(w)


@given(st.lists(letters, min_size=1, max_size=5).map(tuple), st.integers(1, 4))
def test_period_decompose_recovers_power(u, n):
    w = u * n
    per, exp = period_decompose(w)
    assert per * exp == w
    assert exp % n == 0 or exp >= n


def test_period_of_intro_instance():
    p = parse_presentation("<a,b,t | (t a t b)^2>")
    assert p.exponents == (2,)
    assert p.format(p.periods[0]) == "t a t b"


def test_parser_grammar():
    p = parse_presentation("<a, b | a^2 b^-3, (a b)^2 a>")
    assert p.generators == ("a", "b")
    assert p.format(p.relators[0]) == "a^2 b^-3"
    assert p.format(p.relators[1]) == "a b a b a"
    assert parse_word("a^-2 b", ["a", "b"]) == ((0, -1), (0, -1), (1, 1))
    assert format_word((), ["a"]) in ("", "1")


def test_parser_rejects_trivial_relator():
    with pytest.raises(PresentationError):
        parse_presentation("<a | a a^-1>")


@pytest.mark.parametrize("bad", ["<a | b>", "<a, a | a>", "a | a", "<a | a^>"])
def test_parser_errors(bad):
    with pytest.raises(PresentationError):
        parse_presentation(bad)


def test_alternation_rotates_to_an_a_block():
    w = parse_word("t a t^-1 a^-2", ["a", "t"])
    alt = alternation_decompose(w, AlphabetSplit(frozenset({0}), frozenset({1})))
    assert alt.k == 2
    assert [b.tag for b in alt.blocks] == ["A", "B", "A", "B"]
    assert not alt.degenerate


def test_alternation_single_block_is_degenerate():
    w = parse_word("a^2 b^3", ["a", "b"])
    alt = alternation_decompose(w, AlphabetSplit(frozenset({0}), frozenset({1})))
    assert alt.k == 1 and alt.degenerate
