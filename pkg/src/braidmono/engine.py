"""Braid monodromy from singularity tables, and line-arrangement assembly."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import disk
from .braid import BraidWord, compose, conjugate, embed
from .factorization import Factor, Factorization, LabelError, LabelMap
from .notation import NotationError, parse_ast, parse_factorization

BRANCH_EPS, NODE_EPS, TANGENT_EPS = 1, 2, 4


class TableError(ValueError):
    def __init__(self, message: str, row: str | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row else message)


@dataclass(frozen=True)
class MotionSpec:
    """The motion column of a table row: half / full twist, branch, or none."""

    kind: str  # "half" | "full" | "branch" | "none"
    support: tuple[int, ...] = ()
    pair: int = 0  # for branch rows: the pair sits at positions pair+1, pair+2


@dataclass(frozen=True)
class SingularityRecord:
    """One table row; a complex pair carries two skeletons (rows j and j')."""

    index: str
    skeletons: tuple[tuple[int, ...], ...]
    eps: int
    motion: MotionSpec

    @property
    def is_pair(self) -> bool:
        return len(self.skeletons) == 2

    def __post_init__(self) -> None:
        if self.eps not in (BRANCH_EPS, NODE_EPS, TANGENT_EPS):
            raise TableError(f"exponent {self.eps} not in {{1, 2, 4}}", self.index)
        if self.motion.kind == "branch" and self.eps != BRANCH_EPS:
            raise TableError("only a branch point (exponent 1) has a branch motion", self.index)
        if self.eps == BRANCH_EPS and self.motion.kind not in ("branch", "none"):
            raise TableError("a branch point needs a branch motion", self.index)
        if self.is_pair and self.eps != NODE_EPS:
            raise TableError("a complex pair consists of nodes (exponent 2)", self.index)
        if len(self.skeletons) not in (1, 2):
            raise TableError("a row has one skeleton, or two for a complex pair", self.index)


@dataclass(frozen=True)
class SingularityTable:
    labels: LabelMap
    records: tuple[SingularityRecord, ...]


_ROW = re.compile(r"^\s*([^|]+?)\s*\|\s*(.+?)\s*\|\s*(\d+)\s*\|\s*(.+?)\s*$")
_SKEL = re.compile(r"<([^<>]*)>")


def _positions(body: str, labels: LabelMap, row: str) -> tuple[int, ...]:
    try:
        if ".." in body:
            a, b = (x.strip() for x in body.split(".."))
            lo, hi = labels.pos(a), labels.pos(b)
            if lo >= hi:
                raise TableError(f"empty block <{body}>", row)
            return tuple(range(lo, hi + 1))
        pts = tuple(labels.pos(x.strip()) for x in body.split(","))
    except LabelError as e:
        raise TableError(str(e), row) from None
    if len(pts) < 2 or len(set(pts)) != len(pts):
        raise TableError(f"skeleton <{body}> needs at least two distinct points", row)
    return tuple(sorted(pts))


def parse_table(text: str) -> SingularityTable:
    """Parse a singularity table.

    Each row reads ``j | skeleton[,skeleton] | eps | motion`` where a skeleton
    is ``<a,b>`` (two points), ``<a,b,c,...>`` (a chain) or ``<a..b>`` (a
    consecutive block), and the motion is ``half<...>``, ``full<...>``,
    ``branch<m>`` or ``-``.  Labels are those of the base fiber; rows left of
    a branch point name positions in the vertical configuration.
    """
    labels = None
    rows: list[SingularityRecord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("@"):
            if labels is not None:
                raise TableError(f"line {lineno}: more than one fiber declaration")
            try:
                labels, _ = parse_ast(line)
            except NotationError as e:
                raise TableError(f"line {lineno}: {e}") from None
            continue
        if labels is None:
            raise TableError(f"line {lineno}: rows before the fiber declaration")
        m = _ROW.match(line)
        if not m:
            raise TableError(f"line {lineno}: expected 'j | skeleton | eps | motion'")
        idx, skel, eps, mot = m.groups()
        skels = tuple(_positions(s, labels, idx) for s in _SKEL.findall(skel))
        if not skels:
            raise TableError("no skeleton", idx)
        motion = _motion(mot, labels, idx)
        rows.append(SingularityRecord(idx.replace(" ", ""), skels, int(eps), motion))
    if labels is None:
        raise TableError("no fiber declaration")
    return SingularityTable(labels, tuple(rows))


def _motion(text: str, labels: LabelMap, row: str) -> MotionSpec:
    text = text.strip()
    if text == "-":
        return MotionSpec("none")
    m = re.match(r"^(half|full|branch)\s*<([^<>]*)>$", text)
    if not m:
        raise TableError(f"unrecognised motion {text!r}", row)
    kind, body = m.groups()
    if kind == "branch":
        try:
            return MotionSpec("branch", (), int(body))
        except ValueError:
            raise TableError(f"branch motion needs an integer, got {body!r}", row) from None
    return MotionSpec(kind, _positions(body, labels, row))


def _route(chart: disk.BranchChart | None, pts: Sequence[int], n: int) -> disk.Route:
    if chart is None:
        return disk.Route(n, tuple(pts))
    return chart.to_chart(chart.vroute(pts))


def propagate(records: Sequence[SingularityRecord], labels: LabelMap | int) -> Factorization:
    """Factorization of a table: one factor per row, two for a complex pair.

    The skeleton of row j is carried to the base fiber by the motions of rows
    j-1, ..., 1 (row j-1 acting first).  After a branch row, later rows are
    written in the vertical configuration and renamed through the branch
    chart, in whose coordinates the branch motion itself is trivial.
    """
    if isinstance(labels, int):
        labels = LabelMap.numbered(labels)
    n = labels.strands
    carry = BraidWord.identity(n)
    chart: disk.BranchChart | None = None
    out: list[Factor] = []
    for rec in records:
        try:
            for k, pts in enumerate(rec.skeletons):
                shape = disk.compile_route(_route(chart, pts, n)).moved(carry)
                if len(pts) == 2:
                    shape = shape.as_path()
                name = rec.index.split(",")[k] if rec.is_pair else rec.index
                out.append(Factor(disk.twist_power(shape, rec.eps), f"row {name}", "", shape, rec.eps))
            mot = rec.motion
            if mot.kind == "branch":
                if chart is not None:
                    raise TableError("a second branch point needs nested charts, which are not supported", rec.index)
                chart = disk.BranchChart(n, mot.pair + 1)
            elif mot.kind in ("half", "full"):
                e = 1 if mot.kind == "half" else 2
                support = mot.support
                if chart is not None and rec.is_pair:
                    support = chart.toward_upper(support)
                g = disk.twist_power(disk.compile_route(_route(chart, support, n)), e)
                carry = compose(g, carry)
        except disk.PathError as e:
            raise TableError(str(e), rec.index) from None
    return Factorization(n, tuple(out), labels)


def propagate_table(table: SingularityTable) -> Factorization:
    return propagate(table.records, table.labels)


# ---------------------------------------------------------------------------
# line arrangements


class ArrangementError(ValueError):
    pass


@dataclass(frozen=True)
class Arrangement:
    """Vertices and lines (vertex pairs) of a degenerated branch curve.

    ``lines`` is kept in the standard order: (a1, b1) < (a2, b2) iff
    b1 < b2, or b1 = b2 and a1 < a2.  Line t (1-based) is ``lines[t-1]``.
    ``under`` lists, per line t, the lines whose points a parasitic factor
    ending at t passes below.  ``extra_branch`` maps extra branch vertices
    to the line carrying them; they take no part in the degenerate curve.
    """

    vertices: tuple[int, ...]
    lines: tuple[tuple[int, int], ...]
    under: Mapping[int, tuple[int, ...]]
    extra_branch: Mapping[int, int]

    def __init__(self, vertices: Sequence[int], lines: Sequence[Sequence[int]],
                 under: Mapping[int, Sequence[int]] | None = None,
                 extra_branch: Mapping[int, int] | None = None):
        norm = []
        for ln in lines:
            a, b = (int(x) for x in ln)
            if a == b:
                raise ArrangementError(f"line {ln} joins a vertex to itself")
            norm.append((min(a, b), max(a, b)))
        if len(set(norm)) != len(norm):
            raise ArrangementError("repeated line")
        vs = tuple(sorted(int(v) for v in vertices))
        for a, b in norm:
            if a not in vs or b not in vs:
                raise ArrangementError(f"line ({a}, {b}) uses an unknown vertex")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "lines", tuple(sorted(norm, key=lambda ab: (ab[1], ab[0]))))
        object.__setattr__(self, "under", {int(t): tuple(int(k) for k in ks) for t, ks in (under or {}).items()})
        object.__setattr__(self, "extra_branch", {int(v): int(t) for v, t in (extra_branch or {}).items()})

    @classmethod
    def from_json(cls, data: Mapping) -> "Arrangement":
        return cls(data["vertices"], data["lines"], data.get("under"), data.get("extra_branch"))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "lines": [list(ln) for ln in self.lines],
            "under": {str(t): list(ks) for t, ks in sorted(self.under.items())},
            "extra_branch": {str(v): t for v, t in sorted(self.extra_branch.items())},
        }

    @property
    def size(self) -> int:
        return len(self.lines)

    def line_index(self, a: int, b: int) -> int:
        return self.lines.index((min(a, b), max(a, b))) + 1

    def disjoint(self, p: int, t: int) -> bool:
        return not set(self.lines[p - 1]) & set(self.lines[t - 1])


@dataclass(frozen=True)
class VertexData:
    vertex: int
    lines: tuple[int, ...]

    @property
    def planes(self) -> int:
        """A vertex on one line joins 2 planes, on two lines 3 planes; larger
        vertices are named by their line count."""
        return {1: 2, 2: 3}.get(len(self.lines), len(self.lines))

    @property
    def kind(self) -> str:
        return f"{self.planes}-point"


def arrangement_singularities(a: Arrangement) -> list[VertexData]:
    out = []
    for v in a.vertices:
        if v in a.extra_branch:
            continue
        lines = tuple(t for t, ln in enumerate(a.lines, start=1) if v in ln)
        if not lines:
            raise ArrangementError(f"vertex {v} lies on no line")
        out.append(VertexData(v, lines))
    return out


def _parasitic_text(a: Arrangement, t: int, doubled: bool) -> list[str]:
    out = []
    for p in range(1, t):
        if not a.disjoint(p, t):
            continue
        decos = ["above"] + [
            f"under({k}-{k}')" if doubled else f"under({k})"
            for k in a.under.get(t, ()) if p < k < t]
        deco = "{" + ",".join(decos) + "}"
        out.append(f"Zsqb[{p},{p}',{t},{t}']{deco}" if doubled else f"Z2[{p},{t}]{deco}")
    return out


def parasitic_braids(a: Arrangement, doubled: bool = False) -> dict[int, Factorization]:
    """D_t for every line t: squares above the axis, one per earlier line
    disjoint from t, in increasing order.  ``doubled`` gives the regenerated
    form, where every square becomes the four squares of the doubled pairs."""
    header = f"@doubled {a.size}" if doubled else f"@strands {a.size}"
    return {t: parse_factorization(header + "\n" + " ".join(_parasitic_text(a, t, doubled)),
                                   provenance=f"D{t}")
            for t in range(1, a.size + 1)}


def parasitic_groups(a: Arrangement) -> dict[int, tuple[int, ...]]:
    """For each vertex j, the lines t whose smaller vertex is j (C_j = prod D_t)."""
    return {v: tuple(t for t, (lo, _) in enumerate(a.lines, start=1) if lo == v) for v in a.vertices}


def parasitic_products(a: Arrangement, doubled: bool = False) -> dict[int, Factorization]:
    d = parasitic_braids(a, doubled)
    n = 2 * a.size if doubled else a.size
    labels = LabelMap.doubled(a.size) if doubled else LabelMap.numbered(a.size)
    return {v: Factorization.concat((d[t] for t in ts), n, labels)
            for v, ts in parasitic_groups(a).items()}


def vertex_full_twists(a: Arrangement) -> dict[int, Factorization]:
    """Local monodromy of each vertex before regeneration: the full twist on
    its lines, routed above the lines it skips (nothing for a vertex on a
    single line)."""
    out = {}
    for vd in arrangement_singularities(a):
        text = f"@strands {a.size}\n"
        if len(vd.lines) >= 2:
            text += "D2[" + ",".join(str(t) for t in vd.lines) + "]{above}"
        out[vd.vertex] = parse_factorization(text, provenance=f"v{vd.vertex}")
    return out


def degenerate_bmf(a: Arrangement, local: Mapping[int, Factorization] | None = None) -> Factorization:
    """prod_i C_i * Delta^2_{v_i} over the vertices in order."""
    local = vertex_full_twists(a) if local is None else local
    c = parasitic_products(a)
    missing = [vd.vertex for vd in arrangement_singularities(a)
               if len(vd.lines) >= 2 and vd.vertex not in local]
    if missing:
        raise ArrangementError(f"no local factorization for vertices {missing}")
    parts = []
    for v in a.vertices:
        if v in a.extra_branch:
            continue
        parts.append(c[v])
        if v in local:
            parts.append(local[v])
    return Factorization.concat(parts, a.size, LabelMap.numbered(a.size))


def embed_local(local: Factorization, labels: LabelMap) -> Factorization:
    """Place a factorization on a sub-fiber into the full fiber.

    The local points are gathered along the chain through them, the other
    punctures passing below, and every factor is conjugated back.
    """
    if local.labels is None:
        raise LabelError("a local factorization needs labels")
    support = tuple(labels.pos(x) for x in local.labels.names)
    if list(support) != sorted(support):
        raise LabelError("local labels are not in fiber order")
    n = labels.strands
    gather = disk.Skeleton(n, support, BraidWord.identity(n))
    h = gather.placement()
    offset = support[0] - 1
    out = []
    for f in local.factors:
        braid = conjugate(embed(f.braid, n, offset), h)
        shape = disk.shifted(f.shape, n, offset).moved(h) if f.shape is not None else None
        out.append(Factor(braid, f.label, "", shape, f.exponent))
    return Factorization(n, tuple(out), labels)
