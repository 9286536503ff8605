"""Labelled fibers, factors and factorizations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .braid import BraidWord, degree, permutation, product

_LABEL = re.compile(r"^\d+'*$")


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class LabelMap:
    """Names of the fiber points from left to right (position = index + 1)."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise LabelError(f"duplicate labels in {self.names}")
        for x in self.names:
            if not _LABEL.match(x):
                raise LabelError(f"malformed label {x!r}")

    @classmethod
    def numbered(cls, n: int) -> "LabelMap":
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @classmethod
    def doubled(cls, k: int) -> "LabelMap":
        out: list[str] = []
        for i in range(1, k + 1):
            out += [str(i), f"{i}'"]
        return cls(tuple(out))

    @property
    def strands(self) -> int:
        return len(self.names)

    def pos(self, label: str) -> int:
        try:
            return self.names.index(label) + 1
        except ValueError:
            raise LabelError(f"unknown label {label!r}; fiber is {' '.join(self.names)}") from None

    def name(self, position: int) -> str:
        return self.names[position - 1]

    def header(self) -> str:
        if self == LabelMap.numbered(self.strands):
            return f"@strands {self.strands}"
        if self.strands % 2 == 0 and self == LabelMap.doubled(self.strands // 2):
            return f"@doubled {self.strands // 2}"
        return "@labels " + " ".join(self.names)


@dataclass(frozen=True)
class Factor:
    """One braid of a factorization, with where it came from and its DSL text."""

    braid: BraidWord
    label: str = ""
    expr: str = ""
    # Optional geometry: the braid is Delta<shape>^exponent, the half-twist
    # along a DiskPath or the block half-twist of a Skeleton, raised to a power.
    shape: object | None = None
    exponent: int = 0

    @property
    def degree(self) -> int:
        return degree(self.braid)


@dataclass(frozen=True)
class Factorization:
    strands: int
    factors: tuple[Factor, ...] = ()
    labels: LabelMap | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.factors, tuple):
            object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.braid.strands != self.strands:
                raise ValueError(f"factor {f.expr or f.label} lives on B_{f.braid.strands}, not B_{self.strands}")
        if self.labels is not None and self.labels.strands != self.strands:
            raise ValueError("label map does not match strand count")

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    def braids(self) -> list[BraidWord]:
        return [f.braid for f in self.factors]

    def product(self) -> BraidWord:
        return product(self.braids(), self.strands)

    def permutation(self):
        return permutation(self.product())

    def then(self, other: "Factorization") -> "Factorization":
        if other.strands != self.strands:
            raise ValueError("strand counts differ")
        return Factorization(self.strands, self.factors + other.factors, self.labels or other.labels)

    def replace(self, index: int, new: Sequence[Factor]) -> "Factorization":
        """Positional substitution of one factor by a list of factors."""
        if not 0 <= index < len(self.factors):
            raise IndexError(index)
        fs = self.factors[:index] + tuple(new) + self.factors[index + 1:]
        return Factorization(self.strands, fs, self.labels)

    def with_labels(self, labels: LabelMap) -> "Factorization":
        return Factorization(self.strands, self.factors, labels)

    @classmethod
    def concat(cls, parts: Iterable["Factorization"], strands: int, labels: LabelMap | None = None) -> "Factorization":
        fs: list[Factor] = []
        for p in parts:
            if p.strands != strands:
                raise ValueError("strand counts differ")
            fs.extend(p.factors)
        return cls(strands, tuple(fs), labels)

    def to_json(self) -> dict:
        return {
            "strands": self.strands,
            "labels": list(self.labels.names) if self.labels else None,
            "factors": [
                {"expr": f.expr, "label": f.label, "degree": f.degree, "letters": list(f.braid.letters)}
                for f in self.factors
            ],
        }
