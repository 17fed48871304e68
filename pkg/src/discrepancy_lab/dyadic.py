"""Dyadic intervals, boxes, and signed Haar atoms with exact arithmetic.

This is the symbolic ground layer: everything is an exact dyadic rational
(`fractions.Fraction` with power-of-two denominator), no floats anywhere.
The one nontrivial operation is ``product_reduce``, which rewrites a product
of Haar functions with per-coordinate pairwise distinct levels as a single
signed Haar function on the intersection box.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    EmptyIntersection,
    NotStronglyDistinct,
    OffsetOutOfRange,
)

__all__ = [
    "DyadicInterval",
    "DyadicBox",
    "SignedHaarAtom",
    "make_interval",
    "make_box",
    "haar_atom",
    "haar_eval",
    "product_reduce",
]


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The half-open interval [offset * 2^-level, (offset+1) * 2^-level)."""

    level: int
    offset: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise OffsetOutOfRange(f"level must be >= 0, got {self.level}")
        if not 0 <= self.offset < (1 << self.level):
            raise OffsetOutOfRange(
                f"offset {self.offset} outside [0, 2^{self.level})"
            )

    @property
    def left(self) -> Fraction:
        return Fraction(self.offset, 1 << self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.offset + 1, 1 << self.level)

    @property
    def mid(self) -> Fraction:
        return Fraction(2 * self.offset + 1, 1 << (self.level + 1))

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def halves(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        """Left and right dyadic children."""
        return (
            DyadicInterval(self.level + 1, 2 * self.offset),
            DyadicInterval(self.level + 1, 2 * self.offset + 1),
        )

    def contains_point(self, x) -> bool:
        return self.left <= x < self.right

    def contains(self, other: "DyadicInterval") -> bool:
        """True iff `other` is nested in (or equal to) this interval."""
        if other.level < self.level:
            return False
        return (other.offset >> (other.level - self.level)) == self.offset

    def relation(self, other: "DyadicInterval") -> str:
        """Dyadic dichotomy: exactly one of 'equal', 'nested', 'disjoint'."""
        if self == other:
            return "equal"
        if self.contains(other) or other.contains(self):
            return "nested"
        return "disjoint"

    def haar_value(self, x) -> int:
        """Value of h_J at x: -1 on the left half, +1 on the right, 0 outside."""
        if not self.contains_point(x):
            return 0
        return -1 if x < self.mid else 1

    def half_sign_of(self, finer: "DyadicInterval") -> int:
        """Constant value of h_J on a strictly finer nested interval."""
        if finer.level <= self.level or not self.contains(finer):
            raise EmptyIntersection(f"{finer} not strictly nested in {self}")
        child_bit = (finer.offset >> (finer.level - self.level - 1)) & 1
        return 1 if child_bit else -1

    def __repr__(self) -> str:
        return f"[{self.left}, {self.right})"


@dataclass(frozen=True)
class DyadicBox:
    """A product of dyadic intervals J_1 x ... x J_d, d in {1, 2, 3}."""

    intervals: tuple[DyadicInterval, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.intervals) <= 3:
            raise DimensionMismatch(
                f"dimension must be in {{1,2,3}}, got {len(self.intervals)}"
            )

    @property
    def dimension(self) -> int:
        return len(self.intervals)

    @property
    def shape(self) -> tuple[int, ...]:
        """Per-coordinate levels (k_1, ..., k_d)."""
        return tuple(j.level for j in self.intervals)

    @property
    def volume(self) -> Fraction:
        return Fraction(1, 1 << sum(self.shape))

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(j.offset for j in self.intervals)

    def contains_point(self, x: Sequence) -> bool:
        if len(x) != self.dimension:
            raise DimensionMismatch(f"point has {len(x)} coords, box {self.dimension}")
        return all(j.contains_point(t) for j, t in zip(self.intervals, x))

    def __repr__(self) -> str:
        return " x ".join(repr(j) for j in self.intervals)


@dataclass(frozen=True)
class SignedHaarAtom:
    """sigma * h_R for a dyadic box R and sign sigma in {-1, +1}."""

    box: DyadicBox
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +-1, got {self.sign}")

    @property
    def dimension(self) -> int:
        return self.box.dimension

    def __neg__(self) -> "SignedHaarAtom":
        return SignedHaarAtom(self.box, -self.sign)


def make_interval(k: int, a: int) -> DyadicInterval:
    """The dyadic interval [a 2^-k, (a+1) 2^-k); raises OffsetOutOfRange."""
    return DyadicInterval(k, a)


def make_box(*levels_and_offsets: tuple[int, int]) -> DyadicBox:
    """Build a box from (level, offset) pairs, one per coordinate."""
    return DyadicBox(tuple(DyadicInterval(k, a) for k, a in levels_and_offsets))


def haar_atom(*levels_and_offsets: tuple[int, int], sign: int = 1) -> SignedHaarAtom:
    return SignedHaarAtom(make_box(*levels_and_offsets), sign)


def haar_eval(atom: SignedHaarAtom, x: Sequence) -> int:
    """Evaluate sigma * h_R at a point of [0,1)^d; exact, in {-sigma, 0, +sigma}."""
    if len(x) != atom.dimension:
        raise DimensionMismatch(
            f"point has {len(x)} coords, atom lives in dimension {atom.dimension}"
        )
    value = atom.sign
    for interval, t in zip(atom.box.intervals, x):
        v = interval.haar_value(t)
        if v == 0:
            return 0
        value *= v
    return value


def _reduce_coordinate(intervals: Sequence[DyadicInterval]) -> tuple[DyadicInterval, int]:
    """Intersection interval and the product of coarser-factor values on it.

    Levels must be pairwise distinct; intervals must share a point.
    """
    by_level = sorted(intervals, key=lambda j: j.level)
    for a, b in zip(by_level, by_level[1:]):
        if a.level == b.level:
            raise NotStronglyDistinct(
                f"two factors share level {a.level} in one coordinate"
            )
    finest = by_level[-1]
    sign = 1
    for coarse in by_level[:-1]:
        if not coarse.contains(finest):
            raise EmptyIntersection(f"{coarse} and {finest} are disjoint")
        sign *= coarse.half_sign_of(finest)
    return finest, sign


def product_reduce(atoms: Sequence[SignedHaarAtom]) -> SignedHaarAtom:
    """Rewrite a pointwise product of Haar atoms as one signed Haar atom.

    Requires all atoms to share a dimension, the boxes to intersect, and the
    levels in each coordinate to be pairwise distinct.  The result sigma*h_S
    (S the intersection box) equals the pointwise product everywhere; sigma
    collects the constant values that every coarser one-dimensional factor
    takes on the finest interval of its coordinate.

    Raises NotStronglyDistinct on a repeated level (callers fall back to grid
    materialization) and EmptyIntersection on disjoint boxes.
    """
    atoms = list(atoms)
    if not atoms:
        raise ValueError("product_reduce needs at least one atom")
    d = atoms[0].dimension
    for atom in atoms:
        if atom.dimension != d:
            raise DimensionMismatch("atoms of mixed dimension")
    sign = 1
    for atom in atoms:
        sign *= atom.sign
    out_intervals = []
    for t in range(d):
        finest, s = _reduce_coordinate([a.box.intervals[t] for a in atoms])
        out_intervals.append(finest)
        sign *= s
    return SignedHaarAtom(DyadicBox(tuple(out_intervals)), sign)


def boxes_of_shape(shape: Sequence[int]) -> Iterable[DyadicBox]:
    """All dyadic boxes with the given per-coordinate levels, row-major order."""

    def rec(t: int, acc: list[DyadicInterval]):
        if t == len(shape):
            yield DyadicBox(tuple(acc))
            return
        for a in range(1 << shape[t]):
            acc.append(DyadicInterval(shape[t], a))
            yield from rec(t + 1, acc)
            acc.pop()

    yield from rec(0, [])
