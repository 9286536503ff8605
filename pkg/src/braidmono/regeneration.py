"""Regeneration: doubling fiber points and rewriting the factors that touch them.

A regeneration step doubles some labels of the fiber (x becomes the
adjacent pair x, x').  Every factor is Delta<shape>^e = P^-1 core P with P
the placement of its shape.  The placement is cabled (each doubled strand
becomes two parallel strands) and the core is rewritten by the rule that
matches its exponent: 1 -> branch rule, 2 -> node rule, 4 -> tangency
rule.  Cores touching no doubled point are only cabled.  Block factors on
doubled points must be given an explicit replacement.

The pipelines of this module (the first five-point case and the k-point
chain) are driven by table and text fixtures shipped in ``fixtures/``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import disk
from .data import fixture_text
from .braid import BraidWord, conjugate, embed, invert, permutation
from .engine import parse_table, propagate_table
from .factorization import Factor, Factorization, LabelError, LabelMap
from .notation import parse_factorization


class RegenError(ValueError):
    pass


# ---------------------------------------------------------------------------
# doubling


@dataclass(frozen=True)
class DoublingMap:
    """Doubles the labels in ``doubled``; x' is inserted right after x."""

    source: LabelMap
    doubled: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "doubled", frozenset(self.doubled))
        unknown = self.doubled - set(self.source.names)
        if unknown:
            raise LabelError(f"cannot double unknown labels {sorted(unknown)}")

    @classmethod
    def full(cls, source: LabelMap | int) -> "DoublingMap":
        if isinstance(source, int):
            source = LabelMap.numbered(source)
        return cls(source, frozenset(source.names))

    @property
    def target(self) -> LabelMap:
        out: list[str] = []
        for x in self.source.names:
            out.append(x)
            if x in self.doubled:
                out.append(x + "'")
        return LabelMap(tuple(out))

    def sizes(self) -> list[int]:
        """Cable width of each source position."""
        return [2 if x in self.doubled else 1 for x in self.source.names]

    def image(self, label: str) -> tuple[str, ...]:
        return (label, label + "'") if label in self.doubled else (label,)


def _cable_positive(i: int, a: int, b: int, start: int) -> list[int]:
    # Block of width b at position i+1 crosses the block of width a at i,
    # every crossing positive; the blocks move without turning.
    out: list[int] = []
    for t in range(b):
        out.extend(range(start + a + t - 1, start + t - 1, -1))
    return out


def cable(w: BraidWord, sizes: Sequence[int]) -> tuple[BraidWord, list[int]]:
    """Cable w with the given widths per starting position.

    Returns the cabled word and the widths per position after w.
    """
    if len(sizes) != w.strands:
        raise RegenError("one width per strand is needed")
    sz = list(sizes)
    n = sum(sz)
    letters: list[int] = []
    for x in w.letters:
        i = abs(x)
        start = 1 + sum(sz[: i - 1])
        a, b = sz[i - 1], sz[i]
        if x > 0:
            letters.extend(_cable_positive(i, a, b, start))
        else:
            letters.extend(-y for y in reversed(_cable_positive(i, b, a, start)))
        sz[i - 1], sz[i] = b, a
    return BraidWord(n, tuple(letters)), sz


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class RegenRule:
    """kind 1: branch point, 2: node, 3: tangency.

    ``barred`` selects the parasitic form for a node whose both endpoints
    are doubled: order ab, a'b, ab', a'b', every square routed above.
    """

    kind: int
    barred: bool = False

    def __post_init__(self) -> None:
        if self.kind not in (1, 2, 3):
            raise RegenError(f"no regeneration rule {self.kind}")

    @classmethod
    def for_exponent(cls, e: int, barred: bool = False) -> "RegenRule":
        try:
            return cls({1: 1, 2: 2, 4: 3}[e], barred)
        except KeyError:
            raise RegenError(f"no regeneration rule for a factor of exponent {e}") from None

    @property
    def exponent(self) -> int:
        return {1: 1, 2: 2, 3: 4}[self.kind]

    def core_text(self, wa: int, wb: int) -> str:
        """The replacement on a local fiber: endpoint widths wa, wb."""
        if (wa, wb) == (1, 1):
            return {1: "Z[1,2]", 2: "Z2[1,2]", 3: "Z4[1,2]"}[self.kind]
        table = {
            (1, 2, 2): "Z[1',2] Z[1,2']{over(2)}",
            (2, 2, 1): "Z2p[1,1',2]",
            (2, 1, 2): "Z2p[1,2,2']",
            (2, 2, 2): "Zsqb[1,1',2,2']{above}" if self.barred else "Zsq[1,1',2,2']",
            (3, 1, 2): "Z3p[1,2,2']",
            (3, 2, 1): "Z3p[1,1',2]",
        }
        try:
            return table[(self.kind, wa, wb)]
        except KeyError:
            raise RegenError(f"rule {self.kind} does not apply with endpoint widths {wa}, {wb}") from None


def _local_labels(widths: Sequence[int]) -> LabelMap:
    names: list[str] = []
    for k, w in enumerate(widths, start=1):
        names.append(str(k))
        if w == 2:
            names.append(f"{k}'")
    return LabelMap(tuple(names))


def _placed(local: Factorization, n: int, offset: int, h: BraidWord, label: str) -> list[Factor]:
    """Embed a local factorization at offset and conjugate each factor by h."""
    out = []
    for f in local.factors:
        braid = conjugate(embed(f.braid, n, offset), h)
        shape = None
        if f.shape is not None:
            shape = disk.shifted(f.shape, n, offset).moved(h)
        out.append(Factor(braid, label or f.label, "", shape, f.exponent))
    return out


def _cabled_frame(f: Factor, d: DoublingMap) -> tuple[disk.Skeleton, BraidWord, list[int], int]:
    """Skeleton, cabled undo-placement h, widths at the core, target offset."""
    if f.shape is None:
        raise RegenError(f"factor {f.expr or f.label!r} has no recorded path, so it cannot be regenerated")
    sk = f.shape.to_skeleton() if isinstance(f.shape, disk.DiskPath) else f.shape
    undo, mid = cable(invert(sk.placement()), d.sizes())
    lo = sk.support[0]
    widths = mid[lo - 1: lo - 1 + len(sk.support)]
    offset = sum(mid[: lo - 1])
    return sk, invert(undo), widths, offset


def apply_rule(f: Factor, rule: RegenRule | None, d: DoublingMap) -> list[Factor]:
    """Regenerate one factor; rule None picks the rule from the exponent.

    A factor whose core touches no doubled point is only cabled, whatever
    its exponent or support size.
    """
    sk, h, widths, offset = _cabled_frame(f, d)
    n = d.target.strands
    if all(w == 1 for w in widths):
        block = disk.Skeleton.block(len(widths), 1, len(widths))
        local = Factorization(len(widths), (Factor(disk.twist_power(block, f.exponent), "", "", block, f.exponent),))
        return _placed(local, n, offset, h, f.label)
    if len(sk.support) != 2:
        raise RegenError(f"block factor {f.expr or f.label!r} touches a doubled point; give a replacement")
    if rule is None:
        rule = RegenRule.for_exponent(f.exponent)
    elif rule.exponent != f.exponent:
        raise RegenError(f"rule {rule.kind} expects exponent {rule.exponent}, factor has {f.exponent}")
    local = parse_factorization(rule.core_text(*widths), _local_labels(widths))
    img = permutation(h).inverse()
    if img(offset + 1) > img(offset + widths[0] + 1):
        # The placement turns the core around; the rule tables are written
        # for cores whose left end stays on the left.
        raise RegenError(f"factor {f.expr or f.label!r} lies in a reversed frame")
    return _placed(local, n, offset, h, f.label)


def replace_block(f: Factor, d: DoublingMap, replacement: Factorization) -> list[Factor]:
    """Substitute a local factorization for a block factor, in its cabled frame."""
    sk, h, widths, offset = _cabled_frame(f, d)
    if replacement.strands != sum(widths):
        raise RegenError(
            f"replacement lives on {replacement.strands} points, the cabled block has {sum(widths)}")
    return _placed(replacement, d.target.strands, offset, h, f.label)


def regenerate(f: Factorization, doubled: Iterable[str],
               replacements: Mapping[int, Factorization] | None = None,
               barred: bool = False) -> Factorization:
    """Double the given labels and rewrite every factor in place."""
    if f.labels is None:
        raise RegenError("regeneration needs a labelled fiber")
    d = DoublingMap(f.labels, frozenset(doubled))
    replacements = replacements or {}
    out: list[Factor] = []
    for k, fac in enumerate(f.factors):
        if k in replacements:
            out.extend(replace_block(fac, d, replacements[k]))
        else:
            rule = RegenRule.for_exponent(fac.exponent, barred) if barred and fac.exponent == 2 else None
            out.extend(apply_rule(fac, rule, d))
    return Factorization(d.target.strands, tuple(out), d.target)


# ---------------------------------------------------------------------------
# (k+1)-point chain


def k_point_labels(k: int) -> LabelMap:
    """1..k-1 on the left, then the conic pair k, k'."""
    return LabelMap(tuple(str(i) for i in range(1, k)) + (str(k), f"{k}'"))


def k_point_table_text(k: int) -> str:
    """Singularity table of k lines through a point, line k turned into a
    conic tangent to line k-1 and meeting lines 1..k-2 in complex pairs."""
    if k < 2:
        raise RegenError(f"the k-point chain needs k >= 2, got {k}")
    rows = ["@labels " + " ".join(k_point_labels(k).names),
            f"1 | <{k - 1},{k}> | 4 | full<{k - 1},{k}>",
            f"2 | <{k},{k}'> | 1 | branch<{k - 1}>"]
    for i in range(3, k + 1):
        a = k - i + 1
        rows.append(f"{i},{i}' | <{a},{k}>,<{a},{k}'> | 2 | full<{a},{k}>")
    if k > 2:
        rows.append(f"{k + 1} | <1..{k - 1}> | 2 | -")
    return "\n".join(rows) + "\n"


def k_point_Bk(k: int) -> Factorization:
    return propagate_table(parse_table(k_point_table_text(k)))


def k_point_step(B: Factorization, n: int, k: int) -> Factorization:
    """Stage n-1 -> n: double label k-n; the block on 1..k-n becomes B_{k-n}."""
    if not 1 <= n <= k - 1:
        raise RegenError(f"stage {n} out of range 1..{k - 1}")
    m = k - n
    replacements = {}
    if m >= 2:
        last = len(B) - 1
        f = B[last]
        if f.exponent != 2 or disk.endpoints(f.shape) != tuple(range(1, m + 1)):
            raise RegenError(f"stage {n}: the last factor is not the full twist on 1..{m}")
        replacements[last] = k_point_Bk(m)
    return regenerate(B, [str(m)], replacements)


def k_point_chain(k: int) -> list[Factorization]:
    """[B_k, B_k^(1), ..., B_k^(k-1)]."""
    stages = [k_point_Bk(k)]
    for n in range(1, k):
        stages.append(k_point_step(stages[-1], n, k))
    return stages


def closed_form_text(k: int) -> str:
    """Fully regenerated (k+1)-point neighbourhood as DSL text."""
    if k < 2:
        raise RegenError(f"the k-point chain needs k >= 2, got {k}")
    parts = []
    for j in range(k, 1, -1):
        parts.append(f"T[{j - 1},{j}]")
        parts.extend(f"Zsq[{m},{m}',{j},{j}']" for m in range(j - 2, 0, -1))
    return f"@doubled {k}\n" + " ".join(parts) + "\n"


def closed_form(k: int) -> Factorization:
    return parse_factorization(closed_form_text(k))


# ---------------------------------------------------------------------------
# five lines through a point, first case


@dataclass(frozen=True)
class FivePointStages:
    conic: Factorization       # line 4 regenerated into a conic
    outer: Factorization       # then lines 1 and 5 doubled
    final: Factorization       # then the conics 2 and 3 doubled

    def __iter__(self):
        return iter((self.conic, self.outer, self.final))


def five_point_inner_block() -> Factorization:
    """Local monodromy replacing the full twist on lines 1, 2, 3, 5."""
    return parse_factorization(fixture_text("five_point_inner_block.dsl"))


def five_point_first_case() -> FivePointStages:
    conic = propagate_table(parse_table(fixture_text("five_point_conic.table")))
    last = len(conic) - 1
    if conic[last].exponent != 2 or len(conic[last].shape.support) != 4:
        raise RegenError("the conic stage does not end with the four-line full twist")
    outer = regenerate(conic, ["1", "5"], {last: five_point_inner_block()})
    final = regenerate(outer, ["2", "3"])
    return FivePointStages(conic, outer, final)


# ---------------------------------------------------------------------------
# six lines through a point, one of them a conic (the second kind of 6-point)


def six_point_conic() -> Factorization:
    return propagate_table(parse_table(fixture_text("six_point_conic.table")))


def six_point_regenerated(relabel: Sequence[str] | None = None) -> Factorization:
    """Double lines 1..5 of the conic neighbourhood; the full twist on them
    becomes the fully regenerated five-line neighbourhood.

    ``relabel`` renames the six lines (in order) on the result.
    """
    conic = six_point_conic()
    k = next((i for i, f in enumerate(conic) if f.shape is not None
              and len(getattr(f.shape, "support", ())) == 5), None)
    if k is None:
        raise RegenError("the conic stage has no five-line full twist")
    out = regenerate(conic, [str(i) for i in range(1, 6)], {k: five_point_first_case().final})
    if relabel is None:
        return out
    if len(relabel) != 6:
        raise RegenError("six new line names are needed")
    names = []
    for x in relabel:
        names += [str(x), f"{x}'"]
    return out.with_labels(LabelMap(tuple(names)))
