"""Shared helpers: an independent equality oracle and braid-word strategies.

The oracle is the Artin action of B_n on the free group F_n, which is
faithful.  It shares no code with the Garside kernel, so agreement between
the two is real evidence.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from braidmono.braid import BraidWord


def _reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _substitute(word, i):
    # sigma_i (or its inverse) on F_n: x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i
    k = abs(i)
    if i > 0:
        images = {k: (k, k + 1, -k), k + 1: (k,)}
    else:
        images = {k: (k + 1,), k + 1: (-(k + 1), k, k + 1)}
    out = []
    for x in word:
        img = images.get(abs(x))
        if img is None:
            out.append(x)
        elif x > 0:
            out.extend(img)
        else:
            out.extend(-y for y in reversed(img))
    return _reduce(out)


def artin_action(b: BraidWord) -> tuple:
    imgs = [(j,) for j in range(1, b.strands + 1)]
    for x in b.letters:
        imgs = [_substitute(w, x) for w in imgs]
    return tuple(imgs)


def artin_equal(a: BraidWord, b: BraidWord) -> bool:
    return a.strands == b.strands and artin_action(a) == artin_action(b)


def random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)))


@st.composite
def braid_words(draw, min_strands=2, max_strands=6, max_len=12):
    n = draw(st.integers(min_strands, max_strands))
    gens = st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    letters = draw(st.lists(gens, max_size=max_len))
    return BraidWord(n, tuple(letters))


@pytest.fixture
def rng():
    return random.Random(20261016)


def same_factors(f, g) -> bool:
    """Factorwise braid equality (normal forms), same fiber and length."""
    from braidmono.braid import equals
    return (f.strands == g.strands and len(f) == len(g)
            and all(equals(a.braid, b.braid) for a, b in zip(f, g)))


def fixture(*parts: str):
    from braidmono.data import fixture_text
    from braidmono.notation import parse_factorization
    return parse_factorization(fixture_text(*parts), provenance=parts[-1])
