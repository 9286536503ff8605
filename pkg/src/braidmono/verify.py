"""Checks on factorizations: forgetting maps, Hurwitz moves, invariance,
product identities and the degree audit of the sixteen-plane surface."""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .braid import (BraidWord, commutes, conjugate, degree, equals, forget_strands, free_reduce,
                    full_twist, invert, normal_form, permutation, power, product)
from .data import fixture_dir
from .engine import (Arrangement, arrangement_singularities, embed_local, parasitic_products)
from .factorization import Factor, Factorization, LabelError, LabelMap
from .notation import parse_factorization

# ---------------------------------------------------------------------------
# forgetting


def forget(b: BraidWord, keep: Iterable[int]) -> BraidWord:
    """Delete every strand not starting in ``keep`` (positions, 1-based)."""
    return forget_strands(b, tuple(keep))


def pair_positions(f: Factorization, label: str) -> tuple[int, int]:
    labels = f.labels or LabelMap.numbered(f.strands)
    try:
        return labels.pos(label), labels.pos(label + "'")
    except LabelError:
        raise LabelError(f"no doubled pair {label}, {label}' on the fiber {' '.join(labels.names)}") from None


def forget_degree(f: Factorization, label: str | int) -> int:
    """deg f_i of the product: signed crossings between the strands of the pair."""
    pos = pair_positions(f, str(label))
    return degree(forget(f.product(), pos))


# ---------------------------------------------------------------------------
# Hurwitz moves


def _move(ts: tuple[BraidWord, ...], k: int, direction: int) -> tuple[BraidWord, ...]:
    a, b = ts[k - 1], ts[k]
    if direction > 0:
        pair = (free_reduce(conjugate(b, invert(a))), a)
    else:
        pair = (b, free_reduce(conjugate(a, b)))
    return ts[: k - 1] + pair + ts[k + 1:]


def hurwitz_move(f: Factorization, k: int, direction: int = 1) -> Factorization:
    """R_k (direction +1): (t_k, t_k+1) -> (t_k t_k+1 t_k^-1, t_k); -1 undoes it."""
    if not 1 <= k < len(f):
        raise IndexError(f"move index {k} out of range 1..{len(f) - 1}")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    ts = _move(tuple(f.braids()), k, direction)
    facs = list(f.factors)
    for i in (k - 1, k):
        facs[i] = Factor(ts[i], f"R{k}" if direction > 0 else f"R{k}^-1")
    return Factorization(f.strands, tuple(facs), f.labels)


def canonical_key(braids: Sequence[BraidWord]) -> tuple:
    out = []
    for b in braids:
        nf = normal_form(b)
        out.append((nf.delta_power, tuple(tuple(x) for x in nf.canonical_factors)))
    return tuple(out)


@dataclass(frozen=True)
class HurwitzState:
    factors: tuple[BraidWord, ...]

    @property
    def key(self) -> tuple:
        return canonical_key(self.factors)


@dataclass(frozen=True)
class HurwitzResult:
    status: str  # "equivalent" | "not-equivalent" | "not-found"
    depth: int | None
    nodes: int
    moves: tuple[tuple[int, int], ...] = ()
    reason: str = ""

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"

    def to_json(self) -> dict:
        return {"status": self.status, "depth": self.depth, "nodes": self.nodes,
                "moves": [list(m) for m in self.moves], "reason": self.reason}


def _braids(f: Factorization | Sequence[BraidWord]) -> tuple[BraidWord, ...]:
    return tuple(f.braids()) if isinstance(f, Factorization) else tuple(f)


def hurwitz_equiv_bounded(f, g, depth: int = 6, nodes: int = 100_000) -> HurwitzResult:
    """Breadth-first search over Hurwitz moves from f towards g.

    Unequal products or factor counts prove inequivalence; running out of
    depth or nodes only means nothing was found.
    """
    fs, gs = _braids(f), _braids(g)
    if depth < 0 or nodes < 1:
        raise ValueError("budgets must be positive")
    if len(fs) != len(gs):
        return HurwitzResult("not-equivalent", None, 0, reason="different factor counts")
    if fs and not equals(product(fs), product(gs)):
        return HurwitzResult("not-equivalent", None, 0, reason="products differ")
    target = canonical_key(gs)
    start = HurwitzState(fs)
    if start.key == target:
        return HurwitzResult("equivalent", 0, 1)
    seen = {start.key}
    frontier: deque[tuple[HurwitzState, tuple]] = deque([(start, ())])
    explored = 1
    while frontier:
        state, path = frontier.popleft()
        if len(path) >= depth:
            continue
        for k in range(1, len(fs)):
            for d in (1, -1):
                nxt = HurwitzState(_move(state.factors, k, d))
                key = nxt.key
                if key in seen:
                    continue
                seen.add(key)
                explored += 1
                moves = path + ((k, d),)
                if key == target:
                    return HurwitzResult("equivalent", len(moves), explored, moves)
                if explored >= nodes:
                    return HurwitzResult("not-found", None, explored, reason="node budget exhausted")
                frontier.append((nxt, moves))
    return HurwitzResult("not-found", None, explored, reason="depth budget exhausted")


def conjugate_all(f, h: BraidWord) -> tuple[BraidWord, ...]:
    return tuple(conjugate(t, h) for t in _braids(f))


def invariance_check(f, h: BraidWord, depth: int = 4, nodes: int = 100_000) -> HurwitzResult:
    """Is (t_1)_h ... (t_m)_h Hurwitz-equivalent to t_1 ... t_m?"""
    fs = _braids(f)
    if all(commutes(t, h) for t in fs):
        return HurwitzResult("equivalent", 0, 0, reason="h commutes with every factor")
    return hurwitz_equiv_bounded(conjugate_all(fs, h), fs, depth, nodes)


# ---------------------------------------------------------------------------
# product identities


@dataclass(frozen=True)
class ProductCheck:
    equal: bool | None
    degree: int
    expected_degree: int
    permutation_equal: bool
    permutation_mismatch: tuple[int, ...] = ()

    @property
    def degree_delta(self) -> int:
        return self.degree - self.expected_degree

    @property
    def necessary(self) -> bool:
        """Degree and permutation agree (necessary for equality)."""
        return self.degree_delta == 0 and self.permutation_equal

    def to_json(self) -> dict:
        return {"equal": self.equal, "degree": self.degree, "expected_degree": self.expected_degree,
                "degree_delta": self.degree_delta, "permutation_equal": self.permutation_equal,
                "permutation_mismatch": list(self.permutation_mismatch)}


def product_check(f: Factorization | BraidWord, expected: BraidWord, normal_forms: bool = True) -> ProductCheck:
    """Compare a product with an expected braid.

    Degree and permutation image are always reported; the normal-form
    comparison runs only when ``normal_forms`` is set (``equal`` is None
    otherwise).
    """
    p = f.product() if isinstance(f, Factorization) else f
    pa, pb = permutation(p), permutation(expected)
    mismatch = tuple(i for i in range(1, p.strands + 1) if pa(i) != pb(i))
    eq = equals(p, expected) if normal_forms else None
    return ProductCheck(eq, degree(p), degree(expected), not mismatch, mismatch)


def twist_with_pair_powers(labels: LabelMap, powers: Mapping[str, int]) -> BraidWord:
    """prod Z_{i,i'}^{m_i} * Delta^2 on the fiber (the pairs commute)."""
    n = labels.strands
    parts = []
    for lab, m in powers.items():
        i = labels.pos(lab)
        if labels.pos(lab + "'") != i + 1:
            raise LabelError(f"{lab} and {lab}' are not adjacent")
        parts.append(power(BraidWord.sigma(n, i), m))
    parts.append(full_twist(n))
    return product(parts, n)


# ---------------------------------------------------------------------------
# the sixteen-plane surface: fixtures, assembly and audit

SCHEMA = "braidmono.report/1"
F222_DIR = "f222"


class FixtureError(FileNotFoundError):
    def __init__(self, missing: Sequence[str]):
        self.missing = tuple(missing)
        super().__init__("missing fixture components: " + ", ".join(self.missing))


@dataclass
class F222Data:
    arrangement: Arrangement
    local: dict[int, Factorization]
    # optional conjugators h_i applied to the local monodromies, trivial by default
    conjugators: dict[int, BraidWord] = field(default_factory=dict)

    @property
    def labels(self) -> LabelMap:
        return LabelMap.doubled(self.arrangement.size)

    def without(self, *vertices: int) -> "F222Data":
        return F222Data(self.arrangement, {v: f for v, f in self.local.items() if v not in vertices},
                        dict(self.conjugators))


def vertex_file(v: int) -> str:
    return f"vertex_{v:02d}.dsl"


def load_f222(directory: Path | str | None = None, skip: Iterable[int] = ()) -> F222Data:
    root = Path(directory) if directory is not None else fixture_dir() / F222_DIR
    arr_path = root / "arrangement.json"
    if not arr_path.is_file():
        raise FixtureError(["arrangement.json"])
    arrangement = Arrangement.from_json(json.loads(arr_path.read_text()))
    skip = set(skip)
    local: dict[int, Factorization] = {}
    missing = []
    for v in arrangement.vertices:
        if v in skip:
            continue
        p = root / vertex_file(v)
        if not p.is_file():
            missing.append(vertex_file(v))
            continue
        local[v] = parse_factorization(p.read_text(), provenance=f"v{v}")
    if missing:
        raise FixtureError(missing)
    return F222Data(arrangement, local)


def assemble(data: F222Data) -> Factorization:
    """prod_i C'_i phi_i over the vertices, on the doubled fiber."""
    labels = data.labels
    c = parasitic_products(data.arrangement, doubled=True)
    parts = []
    for v in data.arrangement.vertices:
        if v in c:
            parts.append(c[v])
        if v in data.local:
            phi = embed_local(data.local[v], labels)
            h = data.conjugators.get(v)
            if h is not None:
                phi = Factorization(phi.strands, tuple(
                    Factor(conjugate(f.braid, h), f.label, f.expr) for f in phi), labels)
            parts.append(phi)
    return Factorization.concat(parts, labels.strands, labels)


@dataclass
class AuditReport:
    parasitic: int
    three_points: int
    branch: int
    six_points: int
    expected_total: int
    parasitic_squares: int
    six_point_split: dict[int, dict[int, int]]
    vertex_degrees: dict[int, int]
    missing: tuple[int, ...] = ()
    forgetting: dict[str, int] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.parasitic + self.three_points + self.branch + self.six_points

    @property
    def passed(self) -> bool:
        return self.total == self.expected_total and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "audit",
            "subtotals": {"parasitic": self.parasitic, "three_points": self.three_points,
                          "branch": self.branch, "six_points": self.six_points},
            "total": self.total,
            "expected_total": self.expected_total,
            "parasitic_squares": self.parasitic_squares,
            "six_point_split": {str(v): {str(d): c for d, c in sorted(s.items())}
                                for v, s in sorted(self.six_point_split.items())},
            "vertex_degrees": {str(v): d for v, d in sorted(self.vertex_degrees.items())},
            "missing_vertices": list(self.missing),
            "forgetting": self.forgetting,
            "checks": self.checks,
            "passed": self.passed,
        }


def degree_audit(data: F222Data) -> AuditReport:
    """Degree subtotals by vertex type, all read off the fixtures."""
    a = data.arrangement
    kinds = {vd.vertex: vd.planes for vd in arrangement_singularities(a)}
    c = parasitic_products(a, doubled=True)
    parasitic = sum(f.degree for f in c.values())
    squares = sum(len(f) for f in c.values()) // 4
    three = branch = six = 0
    split: dict[int, dict[int, int]] = {}
    degs: dict[int, int] = {}
    for v, f in data.local.items():
        d = f.degree
        degs[v] = d
        if v in a.extra_branch or kinds.get(v) == 2:
            branch += d
        elif kinds.get(v) == 3:
            three += d
        else:
            six += d
            split[v] = dict(Counter(x.degree for x in f))
    n = 2 * a.size
    missing = tuple(v for v in a.vertices if v not in data.local)
    return AuditReport(parasitic, three, branch, six, n * (n - 1), squares, split, degs, missing)


def full_audit(data: F222Data) -> AuditReport:
    """Degree audit, forgetting degrees of the assembled product and of the
    single vertices that locate the extra branch point."""
    report = degree_audit(data)
    p = assemble(data).product()
    labels = data.labels
    for i in range(1, data.arrangement.size + 1):
        keep = (labels.pos(str(i)), labels.pos(f"{i}'"))
        report.forgetting[f"f{i}"] = degree(forget(p, keep))
    local = extra_branch_checks(data)
    report.forgetting.update(local)
    report.checks["total"] = report.total == report.expected_total
    report.checks["forgetting"] = all(report.forgetting[f"f{i}"] == 2
                                      for i in range(1, data.arrangement.size + 1))
    expected_local = {"f7(v3)": 1, "f7(v7)": 0, "f16(v7)": 2}
    if local:
        report.checks["extra_branch"] = all(local.get(k) == v for k, v in expected_local.items())
    return report


def extra_branch_checks(data: F222Data) -> dict[str, int]:
    """Forgetting degrees of single local monodromies used to locate the extra
    branch point: f_7 of the vertices 3 and 7, and f_16 of vertex 7."""
    out = {}
    for v, lab in ((3, "7"), (7, "7"), (7, "16")):
        if v in data.local:
            out[f"f{lab}(v{v})"] = forget_degree(data.local[v], lab)
    return out


def vertex_product_target(data: F222Data, vertex: int, directory: Path | str | None = None) -> BraidWord:
    """Expected product of a local monodromy, read from ``vertex_NN_product.json``."""
    root = Path(directory) if directory is not None else fixture_dir() / F222_DIR
    path = root / f"vertex_{vertex:02d}_product.json"
    if not path.is_file():
        raise FixtureError([path.name])
    target = json.loads(path.read_text())
    return twist_with_pair_powers(data.local[vertex].labels, target["pair_powers"])


def vertex_product_check(data: F222Data, vertex: int = 7, normal_forms: bool = False) -> ProductCheck:
    """Degree and permutation of a local product against its target; the
    normal-form comparison is optional and kept separate from the gate."""
    return product_check(data.local[vertex], vertex_product_target(data, vertex), normal_forms)
