"""Paths and skeletons in the punctured disk, half-twists, and motions.

Punctures sit on the real axis at positions 1..n.  A path or skeleton is
stored as a standard chain through its support (passing *below* every
intermediate puncture) followed by a conjugating braid.  Braids act on the
right: if ``g`` is a motion, the path ``p . g`` has half-twist
``g^-1 H(p) g``.

Routes (``Route``) are the combinatorial input form: a support list, the
side on which each skipped puncture is passed, and optional detours that
wrap the route around a block of punctures before reaching an endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .braid import (
    BraidWord,
    compose,
    conjugate,
    embed,
    free_reduce,
    full_twist,
    half_twist_block,
    invert,
    permutation,
    power,
    product,
)

BELOW = 1
ABOVE = -1


class PathError(ValueError):
    """A route or motion that cannot be realised on the given fiber."""


def chain_braid(n: int, support: Sequence[int], side: Mapping[int, int] | None = None) -> BraidWord:
    """Braid carrying the consecutive block at support[0] onto the chain.

    Support point i starts at position support[0]+i and is moved right, last
    point first, past every skipped puncture to its left.  A skipped puncture
    q is passed below when side[q] is BELOW (the default), above otherwise.
    """
    side = side or {}
    pts = list(support)
    if len(pts) < 1 or any(b <= a for a, b in zip(pts, pts[1:])):
        raise PathError(f"support must be strictly increasing: {pts}")
    if pts[0] < 1 or pts[-1] > n:
        raise PathError(f"support {pts} outside 1..{n}")
    members = set(pts)
    letters: list[int] = []
    s0 = pts[0]
    for i in range(len(pts) - 1, 0, -1):
        skipped = [q for q in range(s0, pts[i]) if q not in members]
        p = s0 + i
        for q in skipped:
            e = side.get(q, BELOW)
            if e not in (BELOW, ABOVE):
                raise PathError(f"bad side {e} for puncture {q}")
            letters.append(p if e == BELOW else -p)
            p += 1
    return BraidWord(n, tuple(letters))


@dataclass(frozen=True)
class DiskPath:
    """A simple path between punctures a < b: standard segment, then conjugator."""

    strands: int
    a: int
    b: int
    conjugator: BraidWord

    def __post_init__(self) -> None:
        if not 1 <= self.a < self.b <= self.strands:
            raise PathError(f"bad endpoints ({self.a}, {self.b}) on {self.strands} punctures")
        if self.conjugator.strands != self.strands:
            raise PathError("conjugator on the wrong strand count")

    @classmethod
    def segment(cls, n: int, a: int, b: int) -> "DiskPath":
        return cls(n, min(a, b), max(a, b), BraidWord.identity(n))

    def placement(self) -> BraidWord:
        """Braid carrying the segment [a, a+1] onto this path."""
        return compose(chain_braid(self.strands, (self.a, self.b)), self.conjugator)

    def moved(self, g: BraidWord) -> "DiskPath":
        return DiskPath(self.strands, self.a, self.b, free_reduce(compose(self.conjugator, g)))

    def to_skeleton(self) -> "Skeleton":
        return Skeleton(self.strands, (self.a, self.b), self.conjugator)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "conjugator": list(self.conjugator.letters)}


@dataclass(frozen=True)
class Skeleton:
    """A chain through ``support`` (below skipped punctures), then conjugator."""

    strands: int
    support: tuple[int, ...]
    conjugator: BraidWord

    def __post_init__(self) -> None:
        if not self.support:
            raise PathError("empty skeleton")
        if not isinstance(self.support, tuple):
            object.__setattr__(self, "support", tuple(self.support))
        chain_braid(self.strands, self.support)  # validates

    @classmethod
    def block(cls, n: int, a: int, b: int) -> "Skeleton":
        return cls(n, tuple(range(a, b + 1)), BraidWord.identity(n))

    def placement(self) -> BraidWord:
        return compose(chain_braid(self.strands, self.support), self.conjugator)

    def moved(self, g: BraidWord) -> "Skeleton":
        return Skeleton(self.strands, self.support, free_reduce(compose(self.conjugator, g)))

    def as_path(self) -> DiskPath:
        if len(self.support) != 2:
            raise PathError("only a two-point skeleton is a path")
        return DiskPath(self.strands, self.support[0], self.support[1], self.conjugator)


def half_twist_of(p: DiskPath) -> BraidWord:
    """H(p): the counterclockwise half-twist exchanging the endpoints along p."""
    return conjugate(BraidWord.sigma(p.strands, p.a), p.placement())


def block_twist(s: Skeleton | DiskPath, eps: int) -> BraidWord:
    """Delta<s>^eps: eps = 1 half-twist, 2 full twist, 4 double full twist."""
    if eps not in (1, 2, 4):
        raise PathError(f"exponent {eps} not in {{1, 2, 4}}")
    if isinstance(s, DiskPath):
        s = s.to_skeleton()
    lo = s.support[0]
    core = power(half_twist_block(s.strands, lo, lo + len(s.support) - 1), eps)
    return conjugate(core, s.placement())


# ---------------------------------------------------------------------------
# routes: the decorated, combinatorial description of a path or skeleton


@dataclass(frozen=True)
class Detour:
    """Wrap the route around the block between an endpoint and ``around``.

    ``around`` beyond the right endpoint wraps the block [b..around] from
    the right; before the left endpoint, [around..a] from the left.
    """

    around: int

    def twist(self, n: int, a: int, b: int, side: int) -> BraidWord:
        if self.around > b:
            lo, hi, right = b, self.around, True
        elif self.around < a:
            lo, hi, right = self.around, a, False
        else:
            raise PathError(f"detour point {self.around} lies inside ({a}, {b})")
        # A below route wrapped from the right, or an above route wrapped from
        # the left, is a positive full twist; the mirror cases are negative.
        sign = 1 if (side == BELOW) == right else -1
        return power(full_twist(n, lo, hi), sign)


@dataclass(frozen=True)
class Route:
    """Support, the side for each skipped puncture, detours, extra conjugator."""

    strands: int
    support: tuple[int, ...]
    side: int = BELOW
    flips: frozenset[int] = frozenset()
    detours: tuple[Detour, ...] = ()
    extra: BraidWord | None = None

    def side_map(self) -> dict[int, int]:
        lo, hi = self.support[0], self.support[-1]
        return {q: (-self.side if q in self.flips else self.side) for q in range(lo + 1, hi)}

    def validate(self) -> None:
        lo, hi = self.support[0], self.support[-1]
        for q in self.flips:
            if not lo < q < hi or q in self.support:
                raise PathError(f"side exception at {q} is not a skipped puncture of {self.support}")


def compile_route(r: Route) -> Skeleton:
    """Skeleton realising the route (a DiskPath via .as_path() for two points)."""
    r.validate()
    n = r.strands
    actual = chain_braid(n, r.support, r.side_map())
    rel = compose(invert(chain_braid(n, r.support)), actual)
    # Outermost detour first: farthest wrap point from the route.
    a, b = r.support[0], r.support[-1]
    ordered = sorted(r.detours, key=lambda d: -max(d.around - b, a - d.around))
    for d in ordered:
        rel = compose(rel, d.twist(n, a, b, r.side))
    if r.extra is not None:
        rel = compose(rel, r.extra)
    return Skeleton(n, r.support, free_reduce(rel))


def compile_path(r: Route) -> DiskPath:
    if len(r.support) != 2:
        raise PathError("a path route needs exactly two endpoints")
    return compile_route(r).as_path()


# ---------------------------------------------------------------------------
# motions


NODE = "node"
TANGENT = "tangent"
BRANCH = "branch"
COMPLEX_PAIR = "complex-pair"


@dataclass(frozen=True)
class Motion:
    """A Lefschetz motion acting on paths by the right action of a braid.

    Node and tangent motions (and the full twist of a complex pair) carry
    their braid.  A branch motion carries the chart used to rename the
    vertical configuration to its left; in chart coordinates it is trivial.
    """

    kind: str
    braid: BraidWord | None = None
    chart: "BranchChart | None" = None
    inverted: bool = False

    def inverse(self) -> "Motion":
        if self.braid is not None:
            return Motion(self.kind, invert(self.braid), self.chart, not self.inverted)
        return Motion(self.kind, None, self.chart, not self.inverted)


def act(m: Motion, p):
    """Apply a motion to a DiskPath, Skeleton, or (for branches) a VRoute / Route."""
    if m.kind == BRANCH:
        if m.chart is None:
            raise PathError("branch motion without a chart")
        if m.inverted:
            if not isinstance(p, Route):
                raise PathError("inverse branch motion acts on chart routes")
            return m.chart.to_vertical(p)
        if not isinstance(p, VRoute):
            raise PathError("branch motion acts on routes in the vertical configuration")
        return m.chart.to_chart(p)
    if m.braid is None:
        raise PathError(f"{m.kind} motion without a braid")
    return p.moved(m.braid)


# ---------------------------------------------------------------------------
# the branch chart


LOWER = "lower"
UPPER = "upper"
GAP = "gap"


@dataclass(frozen=True)
class VRoute:
    """A route in the configuration left of a branch point.

    The conic pair is vertical at real positions (p, p+1).  ``ends`` are the
    two endpoints: either a real position or one of LOWER / UPPER.  A route
    crossing the pair's real part passes between the two points (GAP), and
    ``support`` may list interior real points of a multi-point skeleton.
    """

    ends: tuple[object, ...]


@dataclass(frozen=True)
class BranchChart:
    """Rename the vertical pair configuration into real chart coordinates.

    ``pair`` is the left position p of the pair.  With ``ccw`` the quarter
    rotation takes the lower point to the right (p+1) and the upper point to
    the left (p).  ``first_is_lower`` says which member the vertical-fiber
    name p denotes.
    """

    strands: int
    pair: int
    ccw: bool = True
    first_is_lower: bool = True

    # naming ---------------------------------------------------------
    def member(self, pos: int) -> str:
        if pos == self.pair:
            return LOWER if self.first_is_lower else UPPER
        if pos == self.pair + 1:
            return UPPER if self.first_is_lower else LOWER
        raise PathError(f"position {pos} is not a pair member")

    def _chart_pos(self, member: str) -> int:
        lower_right = self.ccw
        if member == LOWER:
            return self.pair + 1 if lower_right else self.pair
        return self.pair if lower_right else self.pair + 1

    def _gap_sides(self) -> dict[int, int]:
        # Crossing between the vertical points becomes passing the chart pair
        # on opposite sides.
        p = self.pair
        if self.ccw:
            return {p: BELOW, p + 1: ABOVE}
        return {p: ABOVE, p + 1: BELOW}

    def vroute(self, positions: Sequence[int]) -> VRoute:
        """Interpret a position list written in the vertical fiber."""
        ends = []
        for x in positions:
            ends.append(self.member(x) if x in (self.pair, self.pair + 1) else x)
        return VRoute(tuple(ends))

    def toward_upper(self, positions: Sequence[int]) -> tuple[int, ...]:
        """Redirect a path ending at either pair member to the upper member."""
        upper = self.pair if self.member(self.pair) == UPPER else self.pair + 1
        return tuple(sorted(upper if x in (self.pair, self.pair + 1) else x for x in positions))

    # the rewrite table ------------------------------------------------
    def to_chart(self, v: VRoute) -> Route:
        p, n = self.pair, self.strands
        members = [e for e in v.ends if isinstance(e, str)]
        reals = [e for e in v.ends if not isinstance(e, str)]
        if len(members) == 2 and not reals:
            return Route(n, (p, p + 1))
        if len(members) == 1 and len(reals) == 1:
            q = reals[0]
            target = self._chart_pos(members[0])
            other = p + 1 if target == p else p
            if q < p:
                lo, hi, from_left = q, target, True
            elif q > p + 1:
                lo, hi, from_left = target, q, False
            else:
                raise PathError(f"endpoint {q} collides with the pair at ({p}, {p + 1})")
            # A straight segment to the upper (lower) point passes above
            # (below) the real punctures it crosses on the way.
            between = [x for x in range(lo + 1, hi) if x not in (p, p + 1)]
            flips = set(between) if members[0] == UPPER else set()
            if lo < other < hi:
                # A counterclockwise quarter turn brings a route entering from
                # the left to the bottom of the pair, one from the right to the top.
                enters_below = self.ccw == from_left
                if not enters_below:
                    flips.add(other)
            return Route(n, (lo, hi), BELOW, frozenset(flips))
        if not members:
            pts = tuple(sorted(reals))
            if not any(a < p and b > p + 1 for a, b in zip(pts, pts[1:])):
                return Route(n, pts)
            flips = frozenset(q for q, s in self._gap_sides().items() if s == ABOVE)
            return Route(n, pts, BELOW, flips)
        raise PathError(f"route {v.ends} does not match a recognised pattern at the pair ({p}, {p + 1})")

    def to_vertical(self, r: Route) -> VRoute:
        """Inverse rewrite; recognises exactly the images of to_chart."""
        for cand in self._candidates(r):
            if self.to_chart(cand) == r:
                return cand
        raise PathError(f"chart route {r.support} is not in the image of the branch rewrite")

    def _candidates(self, r: Route) -> Iterable[VRoute]:
        p = self.pair
        pts = r.support
        if pts == (p, p + 1):
            yield VRoute((LOWER, UPPER))
            return
        if len(pts) == 2:
            a, b = pts
            for m in (LOWER, UPPER):
                if self._chart_pos(m) == b and a < p:
                    yield VRoute((a, m))
                if self._chart_pos(m) == a and b > p + 1:
                    yield VRoute((m, b))
        yield VRoute(tuple(pts))

    def motion(self) -> Motion:
        return Motion(BRANCH, None, self)


def pair_twist(chart: BranchChart, positions: Sequence[int]) -> BraidWord:
    """Full twist along a vertical-fiber path from a real point to a pair member."""
    r = chart.to_chart(chart.vroute(positions))
    return block_twist(compile_path(r), 2)


def complex_pair_factors(chart: BranchChart, first: Sequence[int], second: Sequence[int],
                         carry: BraidWord) -> tuple[BraidWord, BraidWord]:
    """The two node factors of a conic-line complex pair, in row order.

    ``first`` and ``second`` are the vertical-fiber skeletons of rows j, j';
    ``carry`` is the accumulated motion from the chart back to the base fiber.
    """
    out = []
    for sk in (first, second):
        path = compile_path(chart.to_chart(chart.vroute(sk))).moved(carry)
        out.append(block_twist(path, 2))
    return out[0], out[1]


def identity_motion(n: int) -> Motion:
    return Motion(NODE, BraidWord.identity(n))


def node_motion(n: int, a: int, b: int) -> Motion:
    return Motion(NODE, half_twist_block(n, a, b))


def tangent_motion(n: int, a: int, b: int) -> Motion:
    return Motion(TANGENT, full_twist(n, a, b))


def product_of(words: Iterable[BraidWord], n: int) -> BraidWord:
    return product(words, n)


def twist_power(shape: Skeleton | DiskPath, e: int) -> BraidWord:
    """Delta<shape>^e for any integer e (block_twist without the range check)."""
    if isinstance(shape, DiskPath):
        shape = shape.to_skeleton()
    lo = shape.support[0]
    core = power(half_twist_block(shape.strands, lo, lo + len(shape.support) - 1), e)
    return conjugate(core, shape.placement())


def endpoints(shape: Skeleton | DiskPath) -> tuple[int, ...]:
    """Actual puncture positions the shape joins (the conjugator may move them)."""
    sk = shape.to_skeleton() if isinstance(shape, DiskPath) else shape
    perm = permutation(sk.placement()).inverse()
    lo = sk.support[0]
    return tuple(sorted(perm(lo + i) for i in range(len(sk.support))))


def shifted(shape: Skeleton | DiskPath, n: int, offset: int) -> Skeleton | DiskPath:
    """The same shape on a larger fiber, with every position moved by offset."""
    conj = embed(shape.conjugator, n, offset)
    if isinstance(shape, DiskPath):
        return DiskPath(n, shape.a + offset, shape.b + offset, conj)
    return Skeleton(n, tuple(x + offset for x in shape.support), conj)
