"""A small text language for braid monodromy factorizations.

A document starts with one fiber declaration and then lists factors::

    @labels 1 2 3 4 4' 5
    Z2[3,4] Z4[4',5] Z2[3,4']{over(4),around(5)}
    D2[1,2,3,5]^{Z2[4,5]^-1}

Fiber declarations: ``@strands n`` (labels 1..n), ``@doubled k`` (labels
1 1' .. k k') or ``@labels`` followed by the labels in fiber order.

Atoms (the list is closed):

=================  ======================================================
``Z[a,b]``         half-twist along the path from a to b (``Z2``, ``Z4``:
                   its square and fourth power)
``Z2p[a,b,c]``     node on a doubled line: ``[i,i',j]`` gives
                   Z2[i',j] Z2[i,j]; ``[i,j,j']`` gives Z2[i,j'] Z2[i,j]
``Z3p[a,b,c]``     tangency on a doubled line: three conjugated cubes
``Zsq[a,a',b,b']`` Z2[a',b'] Z2[a,b'] Z2[a',b] Z2[a,b]
``Zsqb[...]``      the same four factors in the order ab, a'b, ab', a'b'
``T[a,b]``         Z3p[a,a',b] Z[b,b']{above,around(a)}
``D1[..]``         block half-twist along the chain through the labels
                   (``D2``, ``D4``: powers 2 and 4)
``FullTwist<a,b>`` full twist on the consecutive block a..b
``( ... )``        a group of factors
=================  ======================================================

Decorations in braces after an atom: ``above`` / ``below`` (default) set
the side of the route; ``over(k)`` / ``under(k)`` (or a range ``k-l``)
pass the listed punctures above / below instead; ``around(k)`` wraps the
route around the block between the nearer endpoint and k, optionally
checked with ``around(k:left)`` or ``around(k:right)``.

``X^n`` raises to a power.  ``X^{h}`` and ``X_{h}`` both conjugate:
h^-1 X h, where h is the product of the factors inside the braces.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import disk
from .braid import BraidWord, conjugate, equals, invert, power, product
from .factorization import Factor, Factorization, LabelError, LabelMap


class NotationError(ValueError):
    """Syntax or elaboration error, with the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<header>@[A-Za-z]+)
  | (?P<label>\d+'*)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<punct>[\[\]{}()<>,^_:\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise NotationError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, i - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tk = m.group()
            out.append(Token(kind if kind != "punct" else tk, tk, line, i - line_start + 1))
        i = m.end()
    out.append(Token("eof", "", line, i - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Decoration:
    kind: str  # above | below | over | under | around
    labels: tuple[str, ...] = ()
    direction: str | None = None


@dataclass(frozen=True)
class Atom:
    name: str
    labels: tuple[str, ...]
    decorations: tuple[Decoration, ...] = ()
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Group:
    items: tuple["Term", ...]


@dataclass(frozen=True)
class Term:
    primary: Atom | Group
    exponent: int = 1
    conjugators: tuple[Group, ...] = ()


_PATH_ATOMS = {"Z": 1, "Z2": 2, "Z4": 4}
_BLOCK_ATOMS = {"D1": 1, "D2": 2, "D4": 4}
_MACROS = {"Z2p": 3, "Z3p": 3, "Zsq": 4, "Zsqb": 4, "T": 2}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # helpers
    def peek(self, k: int = 0) -> Token:
        j = self.i
        seen = 0
        while True:
            t = self.toks[j]
            if t.kind != "nl":
                if seen == k:
                    return t
                seen += 1
            j += 1

    def next(self) -> Token:
        while self.toks[self.i].kind == "nl":
            self.i += 1
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.next()
        if t.kind != kind:
            raise NotationError(f"expected {kind!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    # grammar
    def headers(self) -> tuple[str, list[str], Token] | None:
        while self.toks[self.i].kind == "nl":
            self.i += 1
        t = self.toks[self.i]
        if t.kind != "header":
            return None
        self.i += 1
        args = []
        while self.toks[self.i].kind not in ("nl", "eof"):
            a = self.toks[self.i]
            if a.kind != "label":
                raise NotationError(f"bad fiber declaration argument {a.text!r}", a.line, a.col)
            args.append(a.text)
            self.i += 1
        return t.text, args, t

    def factor_list(self, closers: tuple[str, ...]) -> Group:
        items = []
        while self.peek().kind not in closers:
            items.append(self.term())
        return Group(tuple(items))

    def term(self) -> Term:
        prim = self.primary()
        exponent = 1
        conjs: list[Group] = []
        while self.peek().kind in ("^", "_"):
            op = self.next()
            if self.peek().kind == "{":
                self.next()
                conjs.append(self.factor_list(("}",)))
                self.expect("}")
            elif op.kind == "^":
                exponent *= self.signed_int()
            else:
                raise NotationError("'_' must be followed by '{'", op.line, op.col)
        return Term(prim, exponent, tuple(conjs))

    def signed_int(self) -> int:
        sign = 1
        t = self.next()
        if t.kind == "-":
            sign = -1
            t = self.next()
        if t.kind != "label" or "'" in t.text:
            raise NotationError(f"expected an integer exponent, found {t.text!r}", t.line, t.col)
        return sign * int(t.text)

    def primary(self) -> Atom | Group:
        t = self.next()
        if t.kind == "(":
            g = self.factor_list((")",))
            self.expect(")")
            if not g.items:
                raise NotationError("empty group", t.line, t.col)
            return g
        if t.kind != "ident":
            raise NotationError(f"expected a factor, found {t.text or 'end of input'!r}", t.line, t.col)
        if t.text == "FullTwist":
            self.expect("<")
            a = self.expect("label").text
            self.expect(",")
            b = self.expect("label").text
            self.expect(">")
            return Atom("FullTwist", (a, b), (), t.line, t.col)
        if t.text not in _PATH_ATOMS and t.text not in _BLOCK_ATOMS and t.text not in _MACROS:
            raise NotationError(f"unknown atom {t.text!r}", t.line, t.col)
        self.expect("[")
        labels = [self.expect("label").text]
        while self.peek().kind == ",":
            self.next()
            labels.append(self.expect("label").text)
        self.expect("]")
        decos: list[Decoration] = []
        if self.peek().kind == "{":
            self.next()
            decos.append(self.decoration())
            while self.peek().kind == ",":
                self.next()
                decos.append(self.decoration())
            self.expect("}")
        return Atom(t.text, tuple(labels), tuple(decos), t.line, t.col)

    def decoration(self) -> Decoration:
        t = self.expect("ident")
        if t.text in ("above", "below"):
            return Decoration(t.text)
        if t.text in ("over", "under"):
            self.expect("(")
            a = self.expect("label").text
            labels = (a,)
            if self.peek().kind == "-":
                self.next()
                labels = (a, self.expect("label").text)
            self.expect(")")
            return Decoration(t.text, labels)
        if t.text == "around":
            self.expect("(")
            k = self.expect("label").text
            direction = None
            if self.peek().kind == ":":
                self.next()
                d = self.expect("ident")
                if d.text not in ("left", "right"):
                    raise NotationError(f"detour direction must be left or right, not {d.text!r}", d.line, d.col)
                direction = d.text
            self.expect(")")
            return Decoration("around", (k,), direction)
        raise NotationError(f"unknown decoration {t.text!r}", t.line, t.col)


def parse_ast(text: str) -> tuple[LabelMap | None, Group]:
    p = _Parser(tokenize(text))
    labels = None
    while (h := p.headers()) is not None:
        kind, args, tok = h
        if labels is not None:
            raise NotationError("more than one fiber declaration", tok.line, tok.col)
        try:
            if kind == "@labels":
                labels = LabelMap(tuple(args))
            elif kind == "@strands" and len(args) == 1:
                labels = LabelMap.numbered(int(args[0]))
            elif kind == "@doubled" and len(args) == 1:
                labels = LabelMap.doubled(int(args[0]))
            else:
                raise NotationError(f"bad fiber declaration {kind} {' '.join(args)}", tok.line, tok.col)
        except LabelError as e:
            raise NotationError(str(e), tok.line, tok.col) from None
    body = p.factor_list(("eof",))
    return labels, body


# ---------------------------------------------------------------------------
# elaboration


@dataclass(frozen=True)
class _Piece:
    braid: BraidWord
    expr: str
    shape: object | None = None
    exponent: int = 0


class _Elaborator:
    def __init__(self, labels: LabelMap):
        self.labels = labels
        self.n = labels.strands

    def pos(self, label: str, atom: Atom | None = None) -> int:
        try:
            return self.labels.pos(label)
        except LabelError as e:
            if atom is not None:
                raise NotationError(str(e), atom.line, atom.col) from None
            raise NotationError(str(e)) from None

    def group(self, g: Group) -> list[_Piece]:
        out: list[_Piece] = []
        for t in g.items:
            out.extend(self.term(t))
        return out

    def term(self, t: Term) -> list[_Piece]:
        if isinstance(t.primary, Group):
            pieces = self.group(t.primary)
        else:
            pieces = self.atom(t.primary, t.exponent)
        if isinstance(t.primary, Group) and t.exponent != 1:
            pieces = [self.merged(pieces, t.exponent)]
        for c in t.conjugators:
            hp = self.group(c)
            h = product([p.braid for p in hp], self.n)
            htext = " ".join(p.expr for p in hp)
            pieces = [self.conj_piece(p, h, htext) for p in pieces]
        return pieces

    def merged(self, pieces: list[_Piece], k: int) -> _Piece:
        b = power(product([p.braid for p in pieces], self.n), k)
        inner = " ".join(p.expr for p in pieces)
        if len(pieces) == 1 and pieces[0].shape is not None:
            p = pieces[0]
            return _Piece(b, f"({inner})^{k}", p.shape, p.exponent * k)
        return _Piece(b, f"({inner})^{k}")

    @staticmethod
    def conj_piece(p: _Piece, h: BraidWord, htext: str) -> _Piece:
        shape = p.shape.moved(h) if p.shape is not None else None
        return _Piece(conjugate(p.braid, h), f"{p.expr}^{{{htext}}}", shape, p.exponent)

    # atoms ------------------------------------------------------------
    def atom(self, a: Atom, k: int) -> list[_Piece]:
        if a.name in _PATH_ATOMS:
            if len(a.labels) != 2:
                raise NotationError(f"{a.name} takes two labels", a.line, a.col)
            return [self.path_piece(a, a.labels, _PATH_ATOMS[a.name] * k)]
        if a.name in _BLOCK_ATOMS:
            return [self.block_piece(a, _BLOCK_ATOMS[a.name] * k)]
        if a.name == "FullTwist":
            lo, hi = sorted((self.pos(a.labels[0], a), self.pos(a.labels[1], a)))
            sk = disk.Skeleton.block(self.n, lo, hi)
            text = f"FullTwist<{self.labels.name(lo)},{self.labels.name(hi)}>" + (f"^{k}" if k != 1 else "")
            return [_Piece(disk.twist_power(sk, 2 * k), text, sk, 2 * k)]
        pieces = self.macro(a)
        if k != 1:
            return [self.merged(pieces, k)]
        return pieces

    def route(self, a: Atom, labels: Sequence[str]) -> disk.Route:
        pts = sorted(self.pos(x, a) for x in labels)
        if len(set(pts)) != len(pts):
            raise NotationError("repeated label", a.line, a.col)
        side = disk.BELOW
        flips: dict[int, int] = {}
        detours: list[disk.Detour] = []
        for d in a.decorations:
            if d.kind in ("above", "below"):
                side = disk.ABOVE if d.kind == "above" else disk.BELOW
        lo, hi = pts[0], pts[-1]
        for d in a.decorations:
            if d.kind in ("over", "under"):
                rng = sorted(self.pos(x, a) for x in d.labels)
                for q in range(rng[0], rng[-1] + 1):
                    if not lo < q < hi or q in pts:
                        raise NotationError(
                            f"{d.kind}({'-'.join(d.labels)}) names a puncture that the route does not pass",
                            a.line, a.col)
                    flips[q] = disk.ABOVE if d.kind == "over" else disk.BELOW
            elif d.kind == "around":
                k = self.pos(d.labels[0], a)
                if lo < k < hi or k in pts:
                    raise NotationError(f"detour point {d.labels[0]} is not outside the route", a.line, a.col)
                actual = "left" if k < lo else "right"
                if d.direction is not None and d.direction != actual:
                    raise NotationError(
                        f"detour point {d.labels[0]} lies to the {actual}, not the {d.direction}", a.line, a.col)
                detours.append(disk.Detour(k))
        flipset = frozenset(q for q, s in flips.items() if s != side)
        return disk.Route(self.n, tuple(pts), side, flipset, tuple(detours))

    def route_text(self, r: disk.Route) -> str:
        return render_route(r, self.labels)

    def path_piece(self, a: Atom, labels: Sequence[str], e: int) -> _Piece:
        r = self.route(a, labels)
        if len(r.support) != 2:
            raise NotationError("a path needs two distinct endpoints", a.line, a.col)
        try:
            path = disk.compile_path(r)
        except disk.PathError as err:
            raise NotationError(str(err), a.line, a.col) from None
        return _Piece(disk.twist_power(path, e), path_text(self.route_text(r), e), path, e)

    def block_piece(self, a: Atom, e: int) -> _Piece:
        r = self.route(a, a.labels)
        try:
            sk = disk.compile_route(r)
        except disk.PathError as err:
            raise NotationError(str(err), a.line, a.col) from None
        return _Piece(disk.twist_power(sk, e), block_text(self.route_text(r), e), sk, e)

    def sub(self, a: Atom, name: str, labels: Sequence[str], decos=None) -> Atom:
        return Atom(name, tuple(labels), a.decorations if decos is None else decos, a.line, a.col)

    def macro(self, a: Atom) -> list[_Piece]:
        want = _MACROS[a.name]
        if len(a.labels) != want:
            raise NotationError(f"{a.name} takes {want} labels", a.line, a.col)
        L = a.labels
        if a.name == "Z2p":
            if _is_pair(L[0], L[1]):
                paths = [(L[1], L[2]), (L[0], L[2])]
            elif _is_pair(L[1], L[2]):
                paths = [(L[0], L[2]), (L[0], L[1])]
            else:
                raise NotationError("Z2p needs a doubled pair x,x' among its labels", a.line, a.col)
            return [self.path_piece(a, p, 2) for p in paths]
        if a.name == "Z3p":
            return self.cubes(a, L)
        if a.name in ("Zsq", "Zsqb"):
            if not (_is_pair(L[0], L[1]) and _is_pair(L[2], L[3])):
                raise NotationError(f"{a.name} needs labels a,a',b,b'", a.line, a.col)
            x, xp, y, yp = L
            order = [(xp, yp), (x, yp), (xp, y), (x, y)]
            if a.name == "Zsqb":
                order = [(x, y), (xp, y), (x, yp), (xp, yp)]
            return [self.path_piece(a, p, 2) for p in order]
        if a.name == "T":
            x, y = L
            cubes = self.cubes(a, (x, x + "'", y))
            closing = Atom("Z", (y, y + "'"), (Decoration("above"), Decoration("around", (x,))), a.line, a.col)
            last = self.path_piece(closing, closing.labels, 1)
            return cubes + [last]
        raise NotationError(f"unknown macro {a.name}", a.line, a.col)  # pragma: no cover

    def cubes(self, a: Atom, L: Sequence[str]) -> list[_Piece]:
        if _is_pair(L[0], L[1]):
            base, hinge = (L[1], L[2]), (L[0], L[1])
        elif _is_pair(L[1], L[2]):
            base, hinge = (L[0], L[1]), (L[1], L[2])
        else:
            raise NotationError("Z3p needs a doubled pair x,x' among its labels", a.line, a.col)
        cube = self.path_piece(a, base, 3)
        hp = self.path_piece(Atom("Z", hinge, (), a.line, a.col), hinge, 1)
        h = hp.braid
        return [
            self.conj_piece(cube, h, hp.expr),
            cube,
            self.conj_piece(cube, invert(h), f"{hp.expr}^-1"),
        ]


def _is_pair(x: str, y: str) -> bool:
    return y == x + "'"


def path_text(core: str, e: int) -> str:
    if e in (2, 4):
        return f"Z{e}{core}"
    if e == 1:
        return f"Z{core}"
    return f"Z{core}^{e}"


def block_text(core: str, e: int) -> str:
    if e in (1, 2, 4):
        return f"D{e}{core}"
    return f"D1{core}^{e}"


def render_route(r: disk.Route, labels: LabelMap) -> str:
    names = ",".join(labels.name(p) for p in r.support)
    decos: list[str] = []
    if r.side == disk.ABOVE:
        decos.append("above")
    word = "under" if r.side == disk.ABOVE else "over"
    flips = sorted(r.flips)
    runs: list[list[int]] = []
    for q in flips:
        if runs and runs[-1][-1] == q - 1:
            runs[-1].append(q)
        else:
            runs.append([q])
    for run in runs:
        if len(run) == 1:
            decos.append(f"{word}({labels.name(run[0])})")
        else:
            decos.append(f"{word}({labels.name(run[0])}-{labels.name(run[-1])})")
    for d in r.detours:
        decos.append(f"around({labels.name(d.around)})")
    return f"[{names}]" + ("{" + ",".join(decos) + "}" if decos else "")


# ---------------------------------------------------------------------------
# public API


def elaborate(body: Group, labels: LabelMap, provenance: str = "") -> Factorization:
    el = _Elaborator(labels)
    pieces = el.group(body)
    factors = tuple(Factor(p.braid, provenance, p.expr, p.shape, p.exponent) for p in pieces)
    return Factorization(labels.strands, factors, labels)


def parse_factorization(text: str, labels: LabelMap | None = None, provenance: str = "") -> Factorization:
    """Parse DSL text; ``labels`` is used when the text declares no fiber."""
    declared, body = parse_ast(text)
    if declared is not None and labels is not None and declared != labels:
        raise NotationError("fiber declaration conflicts with the supplied labels")
    fiber = declared or labels
    if fiber is None:
        raise NotationError("no fiber declared (use @strands, @doubled or @labels)")
    return elaborate(body, fiber, provenance)


def render(f: Factorization, per_line: bool = True) -> str:
    labels = f.labels or LabelMap.numbered(f.strands)
    exprs = []
    for fac in f.factors:
        exprs.append(fac.expr or name_braid(fac, labels))
    sep = "\n" if per_line else " "
    return labels.header() + "\n" + sep.join(exprs) + ("\n" if exprs else "")


# ---------------------------------------------------------------------------
# naming computed factors


def _candidate_routes(n: int, ends: tuple[int, ...]) -> Iterator[disk.Route]:
    lo, hi = ends[0], ends[-1]
    skipped = [q for q in range(lo + 1, hi) if q not in ends]
    outside = [k for k in range(1, n + 1) if k < lo or k > hi]
    for ndec in range(0, 4):
        for side in (disk.BELOW, disk.ABOVE):
            for nflip in range(0, ndec + 1):
                ndet = ndec - nflip
                if ndet > 1:
                    continue
                for flips in itertools.combinations(skipped, nflip):
                    dets = [()] if ndet == 0 else [(disk.Detour(k),) for k in outside]
                    for d in dets:
                        yield disk.Route(n, ends, side, frozenset(flips), d)


def name_shape(shape, e: int, labels: LabelMap, target: BraidWord | None = None) -> str:
    """A decorated DSL name for Delta<shape>^e, falling back to a conjugation."""
    n = labels.strands
    target = target if target is not None else disk.twist_power(shape, e)
    ends = disk.endpoints(shape)
    text = path_text if len(ends) == 2 else block_text
    for r in _candidate_routes(n, ends):
        try:
            sk = disk.compile_route(r)
        except disk.PathError:
            continue
        if equals(disk.twist_power(sk, e), target):
            return text(render_route(r, labels), e)
    base = disk.Skeleton(n, tuple(range(shape.support[0] if hasattr(shape, "support") else shape.a,
                                        (shape.support[0] if hasattr(shape, "support") else shape.a)
                                        + len(ends))), BraidWord.identity(n))
    core = "[" + ",".join(labels.name(p) for p in base.support) + "]"
    sk = shape.to_skeleton() if isinstance(shape, disk.DiskPath) else shape
    return f"{text(core, e)}^{{{word_text(sk.placement(), labels)}}}"


def word_text(w: BraidWord, labels: LabelMap) -> str:
    """A braid word as a product of elementary half-twists Z[i,i+1]^(+-k)."""
    if not w.letters:
        return "Z[{0},{1}]^0".format(labels.name(1), labels.name(2)) if labels.strands > 1 else ""
    parts = []
    for letter, grp in itertools.groupby(w.letters):
        k = len(list(grp)) * (1 if letter > 0 else -1)
        i = abs(letter)
        core = f"[{labels.name(i)},{labels.name(i + 1)}]"
        parts.append(f"Z{core}" if k == 1 else f"Z{core}^{k}")
    return " ".join(parts)


def name_braid(f: Factor, labels: LabelMap) -> str:
    if f.shape is not None and f.exponent:
        return name_shape(f.shape, f.exponent, labels, f.braid)
    return f"({word_text(f.braid, labels)})"
