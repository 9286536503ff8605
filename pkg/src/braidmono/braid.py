"""Exact arithmetic in the braid group B_n.

Words are tuples of signed generator indices: ``+i`` is sigma_i (the
counterclockwise half-twist of punctures i, i+1) and ``-i`` its inverse.
Equality is decided by comparing left-greedy Garside normal forms.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .garside import normal_form as _kernel_normal_form


class StrandMismatch(ValueError):
    """Two braids on different strand counts were combined."""


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}; ``images[k-1]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        img = list(range(1, n + 1))
        img[a - 1], img[b - 1] = b, a
        return cls(tuple(img))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (p * q)(x) = p(q(x))
        if self.size != other.size:
            raise StrandMismatch("permutations of different sizes")
        return Permutation(tuple(self.images[q - 1] for q in other.images))

    def inverse(self) -> "Permutation":
        img = [0] * self.size
        for k, v in enumerate(self.images, start=1):
            img[v - 1] = k
        return Permutation(tuple(img))

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest element."""
        seen: set[int] = set()
        out = []
        for k in range(1, self.size + 1):
            if k in seen or self(k) == k:
                continue
            cyc = [k]
            seen.add(k)
            j = self(k)
            while j != k:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out


@dataclass(frozen=True)
class NormalForm:
    """Delta^delta_power times left-weighted permutation braids.

    Each canonical factor is stored as the tuple of 0-based final positions
    of the strands starting at 0..n-1.
    """

    strands: int
    delta_power: int
    canonical_factors: tuple[tuple[int, ...], ...]

    @property
    def canonical_length(self) -> int:
        return len(self.canonical_factors)

    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.canonical_factors


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise ValueError("strand count must be positive")
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"generator {x} out of range for B_{self.strands}")

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "BraidWord":
        return cls(n, ())

    @classmethod
    def sigma(cls, n: int, i: int, power: int = 1) -> "BraidWord":
        sign = 1 if power > 0 else -1
        return cls(n, (sign * i,) * abs(power))

    # algebra ----------------------------------------------------------
    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return compose(self, other)

    def __pow__(self, k: int) -> "BraidWord":
        return power(self, k)

    def inverse(self) -> "BraidWord":
        return invert(self)

    def __len__(self) -> int:
        return len(self.letters)

    def __repr__(self) -> str:
        return f"BraidWord({self.strands}, {list(self.letters)})"

    def reduced(self) -> "BraidWord":
        return free_reduce(self)

    def to_json(self) -> dict:
        return {"strands": self.strands, "letters": list(self.letters)}

    @classmethod
    def from_json(cls, data: dict) -> "BraidWord":
        return cls(int(data["strands"]), tuple(int(x) for x in data["letters"]))


def _check(a: BraidWord, b: BraidWord) -> None:
    if a.strands != b.strands:
        raise StrandMismatch(f"B_{a.strands} vs B_{b.strands}")


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """The word a followed by b."""
    _check(a, b)
    return BraidWord(a.strands, a.letters + b.letters)


def product(words: Iterable[BraidWord], strands: int | None = None) -> BraidWord:
    letters: list[int] = []
    n = strands
    for w in words:
        if n is None:
            n = w.strands
        elif w.strands != n:
            raise StrandMismatch(f"B_{w.strands} vs B_{n}")
        letters.extend(w.letters)
    if n is None:
        raise ValueError("empty product needs an explicit strand count")
    return BraidWord(n, tuple(letters))


def invert(a: BraidWord) -> BraidWord:
    return BraidWord(a.strands, tuple(-x for x in reversed(a.letters)))


def power(a: BraidWord, k: int) -> BraidWord:
    base = a if k >= 0 else invert(a)
    return BraidWord(a.strands, base.letters * abs(k))


def conjugate(a: BraidWord, h: BraidWord) -> BraidWord:
    """h^-1 a h; both (x)^h and (x)_h resolve to this."""
    _check(a, h)
    return BraidWord(a.strands, invert(h).letters + a.letters + h.letters)


def free_reduce(a: BraidWord) -> BraidWord:
    out: list[int] = []
    for x in a.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return BraidWord(a.strands, tuple(out))


def degree(a: BraidWord) -> int:
    """Exponent sum."""
    return sum(1 if x > 0 else -1 for x in a.letters)


def permutation(a: BraidWord) -> Permutation:
    """Image in S_n under sigma_i -> (i, i+1), composed as functions left to right."""
    # Reading the product s_{i1} s_{i2} ... as a composition of functions,
    # the image of k is found by applying the letters from the right.
    img = list(range(1, a.strands + 1))
    for x in a.letters:
        i = abs(x)
        img[i - 1], img[i] = img[i], img[i - 1]
    return Permutation(tuple(img))


@functools.lru_cache(maxsize=65536)
def _cached_nf(n: int, letters: tuple[int, ...]) -> NormalForm:
    p, factors = _kernel_normal_form(n, letters)
    return NormalForm(n, p, factors)


def normal_form(a: BraidWord) -> NormalForm:
    return _cached_nf(a.strands, a.letters)


def equals(a: BraidWord, b: BraidWord) -> bool:
    _check(a, b)
    if degree(a) != degree(b):
        return False
    return normal_form(a) == normal_form(b)


def is_identity(a: BraidWord) -> bool:
    return degree(a) == 0 and normal_form(a).is_identity()


def commutes(a: BraidWord, b: BraidWord) -> bool:
    return equals(compose(a, b), compose(b, a))


def delta(n: int) -> BraidWord:
    """The Garside half-twist on n strands."""
    letters: list[int] = []
    for k in range(1, n):
        letters.extend(range(k, 0, -1))
    return BraidWord(n, tuple(letters))


def embed(a: BraidWord, n: int, offset: int) -> BraidWord:
    """Shift a braid on a.strands strands to positions offset+1.. of B_n."""
    if offset < 0 or offset + a.strands > n:
        raise ValueError("block does not fit")
    sign = lambda x: 1 if x > 0 else -1  # noqa: E731
    return BraidWord(n, tuple(sign(x) * (abs(x) + offset) for x in a.letters))


def half_twist_block(n: int, a: int, b: int) -> BraidWord:
    """Delta on the consecutive block a..b of B_n."""
    _check_block(n, a, b)
    return embed(delta(b - a + 1), n, a - 1)


def full_twist(n: int, a: int = 1, b: int | None = None) -> BraidWord:
    """Delta^2 on the consecutive block a..b (default: all strands)."""
    b = n if b is None else b
    d = half_twist_block(n, a, b)
    return compose(d, d)


def _check_block(n: int, a: int, b: int) -> None:
    if not (1 <= a <= b <= n):
        raise ValueError(f"block <{a},{b}> is not a nonempty consecutive block of 1..{n}")


def forget_strands(a: BraidWord, keep: Sequence[int]) -> BraidWord:
    """Delete every strand whose starting position is not in keep.

    Strands are tracked through the word; a crossing survives exactly when
    both strands involved are kept, and is renumbered among kept strands.
    """
    keep_set = set(keep)
    if not keep_set:
        raise ValueError("keep set is empty")
    if not keep_set <= set(range(1, a.strands + 1)):
        raise ValueError("keep set outside 1..n")
    at = list(range(1, a.strands + 1))  # at[pos-1] = starting label of strand there
    out: list[int] = []
    for x in a.letters:
        i = abs(x)
        s, t = at[i - 1], at[i]
        if s in keep_set and t in keep_set:
            rank = sum(1 for lab in at[:i] if lab in keep_set)
            out.append(rank if x > 0 else -rank)
        at[i - 1], at[i] = t, s
    return BraidWord(len(keep_set), tuple(out))
