"""Words in the generators: grammar, parser, collection, normal form.

Grammar (letters separated by one or more spaces)::

    word   := (letter (" "+ letter)*)?
    letter := gen ("^" int)?
    gen    := "b" | "q" posint
    int    := "-"? digit+
    posint := nonzero-digit digit*

A missing exponent means 1; zero exponents are rejected.  serialize()
emits the canonical shape

    q_1^(a_1+k) ... q_n^(a_n+k)  b^w  q_1^(-k) ... q_n^(-k)

where k is the least nonnegative integer making w = d * (m_1*...*m_n)^k an
integer, and zero-exponent letters are dropped.  The shift k is shared by
all q-generators, which makes the emitted form unique and round-trippable.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexOutOfRange, WordSyntaxError, ZeroExponent
from .group import Group, GroupElement

B_GEN = 0  # generator code for b; q_i uses i >= 1

_LETTER_RE = re.compile(r"(b|q([1-9][0-9]*))(\^(-?[0-9]+))?")


@dataclass(frozen=True)
class Letter:
    gen: int
    exp: int


Word = tuple[Letter, ...]


def parse(group: Group, text: str) -> Word:
    """Tokenize text into letters; no simplification is performed."""
    letters: list[Letter] = []
    for match in re.finditer(r"[^ ]+", text):
        token, pos = match.group(0), match.start()
        m = _LETTER_RE.fullmatch(token)
        if m is None:
            raise WordSyntaxError(f"cannot read letter {token!r}", pos)
        if m.group(2) is None:
            gen = B_GEN
        else:
            gen = int(m.group(2))
            if gen > group.n:
                raise IndexOutOfRange(f"q{gen} exceeds q1..q{group.n}", pos)
        exp = 1 if m.group(4) is None else int(m.group(4))
        if exp == 0:
            raise ZeroExponent(f"letter {token!r} has exponent zero", pos)
        letters.append(Letter(gen, exp))
    return tuple(letters)


def letter_element(group: Group, letter: Letter) -> GroupElement:
    if letter.gen == B_GEN:
        return GroupElement((0,) * group.n, Fraction(letter.exp))
    alpha = tuple(letter.exp if i == letter.gen else 0 for i in range(1, group.n + 1))
    return GroupElement(alpha, Fraction(0))


def evaluate(group: Group, word: Word) -> GroupElement:
    """Collect the word into its (alpha, d) pair: a left-to-right product."""
    acc = group.identity
    for letter in word:
        acc = group.mul(acc, letter_element(group, letter))
    return acc


def normal_form_shift(group: Group, d: Fraction) -> tuple[int, int]:
    """Least k >= 0 with d * (prod of moduli)**k integral, and that integer."""
    if not group.contains_n(d):
        raise ValueError(f"{d} lies outside the group's localization")
    product = 1
    for m in group.moduli:
        product *= m
    k = 0
    scaled = d
    while scaled.denominator != 1:
        scaled *= product
        k += 1
    return k, scaled.numerator


def _fmt(name: str, exp: int) -> str:
    return name if exp == 1 else f"{name}^{exp}"


def serialize(group: Group, element: GroupElement) -> str:
    """Canonical word for an element; parse/evaluate gives the element back."""
    k, w = normal_form_shift(group, element.d)
    parts = []
    for i, a in enumerate(element.alpha, start=1):
        if a + k:
            parts.append(_fmt(f"q{i}", a + k))
    if w:
        parts.append(_fmt("b", w))
    if k:
        parts.extend(_fmt(f"q{i}", -k) for i in range(1, group.n + 1))
    return " ".join(parts)


def word_to_text(word: Word) -> str:
    """Render a word without simplification; inverse of parse."""
    return " ".join(
        _fmt("b" if letter.gen == B_GEN else f"q{letter.gen}", letter.exp)
        for letter in word
    )


def random_word(group: Group, length: int, rng: random.Random) -> Word:
    """Uniform letters: generator over {b, q1..qn}, exponent in +-{1,2,3}."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    letters = []
    for _ in range(length):
        gen = rng.randint(0, group.n)
        exp = rng.choice((-3, -2, -1, 1, 2, 3))
        letters.append(Letter(gen, exp))
    return tuple(letters)
