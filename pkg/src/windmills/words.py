"""Words over a finite alphabet, presentations, and the presentation parser.

A letter is a pair ``(generator_id, sign)`` with sign in ``{+1, -1}``; a word
is a tuple of letters.  Inverses are sign flags, never separate generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple[int, int]
Word = tuple[Letter, ...]

FREE = "free"
CYCLIC = "cyclic"


class PresentationError(ValueError):
    """Raised for malformed presentation text or invalid presentations."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


def inverse_letter(x: Letter) -> Letter:
    return (x[0], -x[1])


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for x in w:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[Letter]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return w[i:j]


def normalize_word(w: Iterable[Letter], mode: str = FREE) -> Word:
    """Freely reduce ``w``; in ``cyclic`` mode also strip cancelling ends."""
    if mode == FREE:
        return free_reduce(w)
    if mode == CYCLIC:
        return cyclic_reduce(w)
    raise ValueError(f"unknown normalization mode {mode!r}")


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:]))


def is_cyclically_reduced(w: Sequence[Letter]) -> bool:
    if not is_reduced(w):
        return False
    return len(w) < 2 or not (w[0][0] == w[-1][0] and w[0][1] == -w[-1][1])


def rotate(w: Sequence[Letter], k: int) -> Word:
    if not w:
        return ()
    k %= len(w)
    return tuple(w[k:]) + tuple(w[:k])


def rotations(w: Sequence[Letter]) -> list[Word]:
    return [rotate(w, k) for k in range(len(w))] if w else [()]


def canonical_cyclic(w: Sequence[Letter]) -> Word:
    """Lexicographically least rotation; a key for cyclic words."""
    if not w:
        return ()
    return min(rotations(w))


def period_decompose(w: Sequence[Letter]) -> tuple[Word, int]:
    """Return ``(period, exponent)`` with ``w == period * exponent`` and the
    exponent as large as possible."""
    w = tuple(w)
    n = len(w)
    if n == 0:
        raise ValueError("period of the empty word is undefined")
    for size in range(1, n + 1):
        if n % size == 0 and w == w[:size] * (n // size):
            return w[:size], n // size
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class AlphabetSplit:
    A: frozenset[int]
    B: frozenset[int]

    def __post_init__(self):
        if self.A & self.B:
            raise ValueError("alphabet split sides must be disjoint")

    def side(self, g: int) -> str:
        if g in self.A:
            return "A"
        if g in self.B:
            return "B"
        raise KeyError(g)


@dataclass(frozen=True)
class Block:
    tag: str
    start: int
    word: Word


@dataclass(frozen=True)
class Alternation:
    blocks: tuple[Block, ...]
    # rotation applied to the input so that blocks[0] starts at index 0
    shift: int
    k: int
    degenerate: bool

    def words(self, tag: str) -> list[Word]:
        return [b.word for b in self.blocks if b.tag == tag]


def alternation_decompose(w: Sequence[Letter], split: AlphabetSplit) -> Alternation:
    """Cut a cyclic word into maximal runs of A-letters and B-letters.

    The word is rotated so the first block is an A-block whenever both sides
    occur.  ``k`` counts A-blocks; ``degenerate`` is set when ``k <= 1`` or the
    word uses only one side.
    """
    w = tuple(w)
    if not w:
        return Alternation((), 0, 0, True)
    tags = [split.side(g) for g, _ in w]
    n = len(w)
    if len(set(tags)) == 1:
        block = Block(tags[0], 0, w)
        k = 1 if tags[0] == "A" else 0
        return Alternation((block,), 0, k, True)
    # first index that starts an A-run cyclically
    shift = next(i for i in range(n) if tags[i] == "A" and tags[i - 1] != "A")
    rw = rotate(w, shift)
    rtags = tags[shift:] + tags[:shift]
    blocks: list[Block] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or rtags[i] != rtags[start]:
            blocks.append(Block(rtags[start], start, rw[start:i]))
            start = i
    k = sum(1 for b in blocks if b.tag == "A")
    return Alternation(tuple(blocks), shift, k, k <= 1)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    periods: tuple[Word, ...] = field(default=())
    exponents: tuple[int, ...] = field(default=())
    normalized: bool = False

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator name")
        for g in self.generators:
            if not _NAME.fullmatch(g):
                raise PresentationError(f"bad generator name {g!r}")
        for r in self.relators:
            if not r:
                raise PresentationError("empty relator")
            if not is_cyclically_reduced(r):
                raise PresentationError("relators must be cyclically reduced")
            if any(not 0 <= x < len(self.generators) for x, _ in r):
                raise PresentationError("relator uses an unknown generator")
        if not self.periods:
            decomposed = [period_decompose(r) for r in self.relators]
            object.__setattr__(self, "periods", tuple(p for p, _ in decomposed))
            object.__setattr__(self, "exponents", tuple(e for _, e in decomposed))

    @classmethod
    def from_words(cls, generators: Sequence[str], relators: Iterable[Sequence[Letter]]) -> "Presentation":
        rels = []
        changed = False
        for r in relators:
            red = cyclic_reduce(r)
            if not red:
                raise PresentationError("empty relator after reduction")
            changed |= red != tuple(r)
            rels.append(red)
        return cls(tuple(generators), tuple(rels), normalized=changed)

    def gen_id(self, name: str) -> int:
        return self.generators.index(name)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Sequence[Letter]) -> str:
        return format_word(w, self.generators)

    def split(self, a_names: Iterable[str]) -> AlphabetSplit:
        A = frozenset(self.gen_id(n) for n in a_names)
        return AlphabetSplit(A, frozenset(range(len(self.generators))) - A)

    def __str__(self) -> str:
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def format_word(w: Sequence[Letter], names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        g, s = w[i]
        power = s * (j - i)
        parts.append(names[g] if power == 1 else f"{names[g]}^{power}")
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------- parsing

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<op>[<>|,()^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PresentationError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str] | None = None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = list(names) if names is not None else None

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PresentationError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def presentation(self) -> tuple[list[str], list[list[Letter]]]:
        self.take("op", "<")
        names: list[str] = []
        if self.peek()[1] != "|":
            while True:
                tok = self.take("name")
                if tok[1] in names:
                    raise PresentationError(f"duplicate generator {tok[1]!r}", tok[2])
                names.append(tok[1])
                if self.peek()[1] != ",":
                    break
                self.take("op", ",")
        self.names = names
        self.take("op", "|")
        relators = []
        if self.peek()[1] != ">":
            while True:
                start = self.peek()[2]
                w = self.word()
                if not w:
                    raise PresentationError("empty relator", start)
                relators.append((w, start))
                if self.peek()[1] != ",":
                    break
                self.take("op", ",")
        self.take("op", ">")
        self.take("end")
        return names, relators

    def word(self) -> list[Letter]:
        out: list[Letter] = []
        while True:
            kind, value, pos = self.peek()
            if kind == "name":
                self.take()
                if value not in self.names:
                    raise PresentationError(f"unknown generator {value!r}", pos)
                unit = [(self.names.index(value), 1)]
            elif value == "(":
                self.take()
                unit = self.word()
                self.take("op", ")")
            else:
                return out
            if self.peek()[1] == "^":
                self.take()
                power = int(self.take("int")[1])
                unit = list(inverse(unit)) * (-power) if power < 0 else unit * power
            out.extend(unit)


def parse_word(text: str, names: Sequence[str]) -> Word:
    p = _Parser(text, names)
    w = p.word()
    p.take("end")
    return tuple(w)


def parse_presentation(text: str) -> Presentation:
    """Parse ``<a, t | t a t^-1 a^-2>``.  Relators are freely and cyclically
    reduced; ``normalized`` reports whether that changed any input relator."""
    names, relators = _Parser(text).presentation()
    rels = []
    changed = False
    for w, pos in relators:
        red = cyclic_reduce(w)
        if not red:
            raise PresentationError("empty relator after reduction", pos)
        changed |= red != tuple(w)
        rels.append(red)
    return Presentation(tuple(names), tuple(rels), normalized=changed)
