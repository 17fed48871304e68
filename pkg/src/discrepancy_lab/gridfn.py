"""Exact function algebra on dyadic grids.

A :class:`GridFunction` stores one rational value per cell of a
2^{n_1} x ... x 2^{n_d} grid as an integer numpy array `num` over a shared
positive denominator `den`, so sums, products, inner products, and integer-p
norms are exact.  Arrays stay in int64 while provable bounds allow it and
escalate to Python-int object arrays otherwise.  Only p-th roots and
non-integer exponents leave the rational world; those are evaluated in
113-bit mpmath floats (IEEE binary128 mantissa) and rounded once.

A seeded Monte-Carlo estimator covers resolutions beyond the exact cell
budget (2^27 cells by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
import numpy as np

from .dyadic import DyadicBox, SignedHaarAtom
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    ResolutionTooCoarse,
)

__all__ = [
    "GridFunction",
    "NormEstimate",
    "Sum",
    "Product",
    "Scaled",
    "Coordinate",
    "materialize",
    "lp_norm",
    "lp_power_exact",
    "inner_product",
    "square_function",
    "square_function_sq",
    "norm_from_square_grid",
    "mc_lp_norm",
    "lp_ratio_report",
    "DEFAULT_CELL_BUDGET",
]

DEFAULT_CELL_BUDGET = 1 << 27

_INT64_SAFE = (1 << 62) - 1

# root extraction precision: binary128 mantissa
_MP_PREC = 113


def _cells(resolution: Sequence[int]) -> int:
    return 1 << sum(resolution)


def _check_budget(resolution: Sequence[int], budget_cells: int | None) -> None:
    budget = DEFAULT_CELL_BUDGET if budget_cells is None else budget_cells
    if _cells(resolution) > budget:
        raise BudgetExceeded(
            f"grid of {_cells(resolution)} cells exceeds budget {budget}"
        )


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(arr)))


def _as_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    out = arr.astype(object)
    # numpy leaves np.int64 scalars in object arrays; normalize to python int
    return out + 0


def exact_sum(arr: np.ndarray) -> int:
    """Exact sum of an integer array (any width or object), no silent overflow."""
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return int(sum(arr.ravel().tolist()))
    if arr.dtype.itemsize <= 4:
        # int64 accumulator cannot overflow for < 2^30 entries of < 2^32
        return int(np.sum(arr, dtype=np.int64))
    m = _maxabs(arr)
    if m == 0:
        return 0
    flat = arr.ravel()
    chunk = max(1, _INT64_SAFE // (m + 1))
    if flat.size <= chunk:
        return int(np.sum(flat))
    total = 0
    for start in range(0, flat.size, chunk):
        total += int(np.sum(flat[start : start + chunk]))
    return total


def _abs_power_sum(num: np.ndarray, p: int) -> int:
    """Exact sum of |num_c|^p over all cells, via value counting."""
    uniq, counts = np.unique(num, return_counts=True)
    return sum(int(c) * abs(int(u)) ** p for u, c in zip(uniq.tolist(), counts.tolist()))


def _mp_root(x: Fraction, p: int | float):
    with mpmath.workprec(_MP_PREC):
        return mpmath.root(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator), p) \
            if isinstance(p, int) else \
            mpmath.power(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator), 1.0 / p)


@dataclass(frozen=True)
class NormEstimate:
    """An L^p norm value, exact or Monte-Carlo with a 95% CI half-width."""

    value: float
    mode: str  # "exact" | "monte-carlo"
    ci_halfwidth: float = 0.0
    sample_count: int | None = None
    seed: int | None = None
    p: float | None = None


class GridFunction:
    """Piecewise-constant function on a dyadic grid with exact rational cells.

    Cell (i_1, ..., i_d) covers the box prod_t [i_t 2^-n_t, (i_t+1) 2^-n_t)
    and carries the value num[i]/den.
    """

    __slots__ = ("resolution", "num", "den")

    def __init__(self, resolution: Sequence[int], num: np.ndarray, den: int = 1):
        resolution = tuple(int(r) for r in resolution)
        if any(r < 0 for r in resolution):
            raise ValueError("resolution entries must be >= 0")
        if den <= 0:
            raise ValueError("denominator must be positive")
        expected = tuple(1 << r for r in resolution)
        if tuple(num.shape) != expected:
            raise ValueError(f"value array shape {num.shape} != {expected}")
        self.resolution = resolution
        self.num = num
        self.den = int(den)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, value, resolution: Sequence[int]) -> "GridFunction":
        value = Fraction(value)
        shape = tuple(1 << r for r in resolution)
        num = np.full(shape, int(value.numerator), dtype=np.int64) \
            if abs(value.numerator) <= _INT64_SAFE else \
            np.full(shape, value.numerator, dtype=object)
        return cls(resolution, num, value.denominator)

    @classmethod
    def from_fractions(cls, resolution: Sequence[int], cells) -> "GridFunction":
        """Build from an array-like of Fractions/ints (shared denominator inferred)."""
        shape = tuple(1 << r for r in resolution)
        flat = [Fraction(v) for v in np.asarray(cells, dtype=object).ravel().tolist()]
        den = 1
        for v in flat:
            den = den * v.denominator // math.gcd(den, v.denominator)
        nums = [v.numerator * (den // v.denominator) for v in flat]
        if all(abs(n) <= _INT64_SAFE for n in nums):
            num = np.array(nums, dtype=np.int64).reshape(shape)
        else:
            num = np.array(nums, dtype=object).reshape(shape)
        return cls(resolution, num, den)

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self.resolution)

    @property
    def cell_count(self) -> int:
        return _cells(self.resolution)

    @property
    def cell_volume(self) -> Fraction:
        return Fraction(1, 1 << sum(self.resolution))

    def value_at(self, index: Sequence[int]) -> Fraction:
        return Fraction(int(self.num[tuple(index)]), self.den)

    def value_at_point(self, x: Sequence) -> Fraction:
        idx = tuple(
            min((1 << n) - 1, int(Fraction(t) * (1 << n)))
            for n, t in zip(self.resolution, x)
        )
        return self.value_at(idx)

    def to_float(self) -> np.ndarray:
        return self.num.astype(np.float64) / float(self.den)

    def integral(self) -> Fraction:
        return Fraction(exact_sum(self.num), self.den) * self.cell_volume

    def max_abs(self) -> Fraction:
        return Fraction(_maxabs(self.num), self.den)

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    def refine(self, resolution: Sequence[int], budget_cells: int | None = None) -> "GridFunction":
        """Refined copy; integrals and norms are unchanged (same function)."""
        resolution = tuple(int(r) for r in resolution)
        if len(resolution) != self.dimension:
            raise DimensionMismatch("refinement changes dimension")
        if any(m < n for m, n in zip(resolution, self.resolution)):
            raise ResolutionTooCoarse(f"{resolution} coarser than {self.resolution}")
        _check_budget(resolution, budget_cells)
        if resolution == self.resolution:
            return self
        num = np.empty(tuple(1 << m for m in resolution), dtype=self.num.dtype)
        blocks, view = [], []
        for m, n in zip(resolution, self.resolution):
            blocks += [1 << n, 1 << (m - n)]
            view += [1 << n, 1]
        num.reshape(blocks)[...] = self.num.reshape(view)
        return GridFunction(resolution, num, self.den)

    def normalize(self) -> "GridFunction":
        """Reduce num/den by their gcd; drops back to int64 when safe."""
        g = math.gcd(self.den, int(np.gcd.reduce(np.abs(self.num).ravel()))
                     if self.num.dtype != object
                     else math.gcd(*([0] + [abs(int(v)) for v in self.num.ravel().tolist()])))
        if g > 1:
            num = self.num // g if self.num.dtype != object else self.num // g
            return GridFunction(self.resolution, num, self.den // g)
        return self

    def _common(self, other: "GridFunction") -> tuple["GridFunction", "GridFunction"]:
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"dimensions {self.dimension} and {other.dimension} differ"
            )
        res = tuple(max(a, b) for a, b in zip(self.resolution, other.resolution))
        return self.refine(res), other.refine(res)

    # ------------------------------------------------------------------
    # exact arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other) -> "GridFunction":
        if not isinstance(other, GridFunction):
            return self + GridFunction.constant(other, self.resolution)
        a, b = self._common(other)
        den = a.den * b.den // math.gcd(a.den, b.den)
        ma, mb = den // a.den, den // b.den
        bound = _maxabs(a.num) * ma + _maxabs(b.num) * mb
        if bound > _INT64_SAFE or a.num.dtype == object or b.num.dtype == object:
            num = _as_object(a.num) * ma + _as_object(b.num) * mb
        else:
            num = a.num * np.int64(ma) + b.num * np.int64(mb)
        return GridFunction(a.resolution, num, den)

    def __radd__(self, other) -> "GridFunction":
        return self.__add__(other)

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.resolution, -self.num, self.den)

    def __sub__(self, other) -> "GridFunction":
        return self + (-other if isinstance(other, GridFunction)
                       else GridFunction.constant(-Fraction(other), self.resolution))

    def __mul__(self, other) -> "GridFunction":
        if isinstance(other, GridFunction):
            a, b = self._common(other)
            bound = _maxabs(a.num) * _maxabs(b.num)
            if bound > _INT64_SAFE or a.num.dtype == object or b.num.dtype == object:
                num = _as_object(a.num) * _as_object(b.num)
            else:
                num = a.num * b.num
            return GridFunction(a.resolution, num, a.den * b.den)
        c = Fraction(other)
        bound = _maxabs(self.num) * abs(c.numerator)
        if bound > _INT64_SAFE or self.num.dtype == object:
            num = _as_object(self.num) * c.numerator
        else:
            num = self.num * np.int64(c.numerator)
        return GridFunction(self.resolution, num, self.den * c.denominator)

    def __rmul__(self, other) -> "GridFunction":
        return self.__mul__(other)

    def equals(self, other: "GridFunction") -> bool:
        """Exact equality as functions (independent of stored resolution)."""
        a, b = self._common(other)
        if a.den == b.den:
            return bool(np.array_equal(a.num, b.num))
        bound = max(_maxabs(a.num) * b.den, _maxabs(b.num) * a.den)
        if bound > _INT64_SAFE or a.num.dtype == object or b.num.dtype == object:
            return bool(np.array_equal(_as_object(a.num) * b.den,
                                       _as_object(b.num) * a.den))
        return bool(np.array_equal(a.num * np.int64(b.den), b.num * np.int64(a.den)))


# ----------------------------------------------------------------------
# expression trees
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Scaled:
    coefficient: Fraction
    expr: object


@dataclass(frozen=True)
class Coordinate:
    """The coordinate function x -> x_axis, for piecewise-linear inner products."""

    axis: int = 0


def haar_axis_sign_vector(level: int, offset: int, m: int) -> np.ndarray:
    """Values of h_{[offset 2^-level, ...)} on the 2^m cells of one axis (int8).

    Requires m >= level + 1 so the two halves are resolved.
    """
    if m < level + 1:
        raise ResolutionTooCoarse(
            f"axis resolution {m} too coarse for a level-{level} Haar factor"
        )
    idx = np.arange(1 << m)
    anc = idx >> (m - level)
    half = (idx >> (m - level - 1)) & 1
    return np.where(anc == offset, 2 * half - 1, 0).astype(np.int8)


def _atom_grid(atom: SignedHaarAtom, resolution: Sequence[int]) -> np.ndarray:
    vecs = []
    for t, interval in enumerate(atom.box.intervals):
        vecs.append(haar_axis_sign_vector(interval.level, interval.offset, resolution[t]))
    grid = vecs[0]
    for v in vecs[1:]:
        grid = np.multiply.outer(grid, v)
    return (atom.sign * grid).astype(np.int64)


def materialize(expr, resolution: Sequence[int],
                budget_cells: int | None = None) -> GridFunction:
    """Exact cell values of a sum/product tree over Haar atoms and constants.

    Accepted leaves: SignedHaarAtom, numbers (int / Fraction), GridFunction,
    and any object exposing ``to_grid(resolution)``.  Raises
    ResolutionTooCoarse when an atom's halves are not resolved on the grid.
    """
    resolution = tuple(int(r) for r in resolution)
    _check_budget(resolution, budget_cells)

    def rec(e) -> GridFunction:
        if isinstance(e, GridFunction):
            return e.refine(resolution, budget_cells=budget_cells)
        if isinstance(e, SignedHaarAtom):
            if len(resolution) != e.dimension:
                raise DimensionMismatch(
                    f"atom dimension {e.dimension} != grid dimension {len(resolution)}"
                )
            return GridFunction(resolution, _atom_grid(e, resolution), 1)
        if isinstance(e, (int, Fraction)):
            return GridFunction.constant(e, resolution)
        if isinstance(e, Sum):
            acc = rec(e.terms[0])
            for term in e.terms[1:]:
                acc = acc + rec(term)
            return acc
        if isinstance(e, Product):
            acc = rec(e.factors[0])
            for factor in e.factors[1:]:
                acc = acc * rec(factor)
            return acc
        if isinstance(e, Scaled):
            return rec(e.expr) * Fraction(e.coefficient)
        if hasattr(e, "to_grid"):
            return e.to_grid(resolution)
        raise TypeError(f"cannot materialize leaf of type {type(e).__name__}")

    return rec(expr)


# ----------------------------------------------------------------------
# norms and inner products
# ----------------------------------------------------------------------
def lp_power_exact(f: GridFunction, p: int) -> Fraction:
    """Exact integral of |f|^p for integer p >= 1."""
    if not (isinstance(p, int) and p >= 1):
        raise ValueError("lp_power_exact needs integer p >= 1")
    return Fraction(_abs_power_sum(f.num, p), f.den ** p) * f.cell_volume


def lp_norm(f: GridFunction, p) -> NormEstimate:
    """L^p norm of a grid function; exact summation, root in 113-bit floats.

    p may be any real >= 1 or math.inf (exact max of |cells|).
    """
    if p == math.inf:
        return NormEstimate(value=float(f.max_abs()), mode="exact", p=math.inf)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if float(p).is_integer():
        power = lp_power_exact(f, int(p))
        value = float(_mp_root(power, int(p)))
        return NormEstimate(value=value, mode="exact", p=float(p))
    uniq, counts = np.unique(f.num, return_counts=True)
    with mpmath.workprec(_MP_PREC):
        total = mpmath.mpf(0)
        for u, c in zip(uniq.tolist(), counts.tolist()):
            if u:
                total += int(c) * mpmath.power(abs(int(u)), p)
        total *= mpmath.power(f.den, -p)
        total *= mpmath.mpf(f.cell_volume.numerator) / f.cell_volume.denominator
        value = float(mpmath.power(total, 1.0 / p)) if total > 0 else 0.0
    return NormEstimate(value=value, mode="exact", p=float(p))


def inner_product(f, g: GridFunction) -> Fraction:
    """Exact integral of f*g over [0,1)^d.

    `f` is a GridFunction, or a :class:`Coordinate` (piecewise-linear
    overload: integrates x_axis against g in closed form).
    """
    if isinstance(f, Coordinate):
        axis = f.axis
        n = g.resolution[axis]
        # per-cell integral of x over [i 2^-n, (i+1) 2^-n) is (2i+1) 2^{-2n-1}
        weights = np.arange(1 << n, dtype=np.int64) * 2 + 1
        shape = [1] * g.dimension
        shape[axis] = 1 << n
        w = weights.reshape(shape)
        bound = _maxabs(g.num) * int(weights[-1])
        prod = (_as_object(g.num) * w) if bound > _INT64_SAFE or g.num.dtype == object \
            else g.num * w
        other_vol = Fraction(1, 1 << (sum(g.resolution) - n))
        return Fraction(exact_sum(prod), g.den) * other_vol * Fraction(1, 1 << (2 * n + 1))
    if not isinstance(f, GridFunction):
        raise TypeError("inner_product expects GridFunction or Coordinate")
    a, b = f._common(g)
    bound = _maxabs(a.num) * _maxabs(b.num)
    if bound > _INT64_SAFE or a.num.dtype == object or b.num.dtype == object:
        prod = _as_object(a.num) * _as_object(b.num)
    else:
        prod = a.num * b.num
    return Fraction(exact_sum(prod), a.den * b.den) * a.cell_volume


# ----------------------------------------------------------------------
# square function
# ----------------------------------------------------------------------
def _normalize_expansion(expansion) -> list[tuple[Fraction, DyadicBox]]:
    items: list[tuple[Fraction, DyadicBox]] = []
    if isinstance(expansion, Mapping):
        pairs: Iterable = expansion.items()
        for box, coef in pairs:
            items.append((Fraction(coef), box))
        return items
    for coef, obj in expansion:
        box = obj.box if isinstance(obj, SignedHaarAtom) else obj
        sign = obj.sign if isinstance(obj, SignedHaarAtom) else 1
        items.append((Fraction(coef) * sign, box))
    return items


def _expansion_resolution(items: Sequence[tuple[Fraction, DyadicBox]]) -> tuple[int, ...]:
    d = items[0][1].dimension
    res = [0] * d
    for _, box in items:
        for t, k in enumerate(box.shape):
            res[t] = max(res[t], k + 1)
    return tuple(res)


def expansion_grid(expansion, resolution: Sequence[int] | None = None,
                   budget_cells: int | None = None) -> GridFunction:
    """Materialize a Haar expansion sum(coef(R) h_R) exactly."""
    items = _normalize_expansion(expansion)
    if resolution is None:
        resolution = _expansion_resolution(items)
    _check_budget(resolution, budget_cells)
    den = 1
    for coef, _ in items:
        den = den * coef.denominator // math.gcd(den, coef.denominator)
    shape = tuple(1 << r for r in resolution)
    acc = np.zeros(shape, dtype=np.int64)
    bound = 0
    for coef, box in items:
        c = coef.numerator * (den // coef.denominator)
        bound += abs(c)
        grid = _atom_grid(SignedHaarAtom(box, 1), resolution)
        if bound > _INT64_SAFE:
            acc = _as_object(acc)
        acc = acc + grid * c if acc.dtype == object else acc + grid * np.int64(c)
    return GridFunction(resolution, acc, den)


def square_function_sq(expansion, layering: str = "auto",
                       resolution: Sequence[int] | None = None,
                       budget_cells: int | None = None) -> GridFunction:
    """The exact square (Sf)^2 = sum over layers (layer sum)^2 as a grid."""
    items = _normalize_expansion(expansion)
    if resolution is None:
        resolution = _expansion_resolution(items)
    d = items[0][1].dimension
    if layering == "auto":
        layering = "by-level" if d == 1 else "by-shape-vector"
    layers: dict[tuple, list] = {}
    for coef, box in items:
        key = box.shape[0] if layering == "by-level" else box.shape
        layers.setdefault(key, []).append((coef, box))
    acc: GridFunction | None = None
    for key in sorted(layers):
        layer = expansion_grid(layers[key], resolution, budget_cells=budget_cells)
        sq = layer * layer
        acc = sq if acc is None else acc + sq
    assert acc is not None
    return acc


def _fraction_sqrt(x: Fraction) -> Fraction:
    """Exact square root when x is a perfect rational square, else 113-bit rounding."""
    if x < 0:
        raise ValueError("sqrt of negative cell")
    if x == 0:
        return Fraction(0)
    ni, di = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if ni * ni == x.numerator and di * di == x.denominator:
        return Fraction(ni, di)
    # dyadic rounding at 113 fractional-ish bits
    scale = 1 << _MP_PREC
    return Fraction(math.isqrt(x.numerator * x.denominator * scale * scale),
                    x.denominator * scale)


def square_function(expansion, layering: str = "auto",
                    resolution: Sequence[int] | None = None,
                    budget_cells: int | None = None) -> GridFunction:
    """Dyadic square function of a finite Haar expansion.

    1D layers are levels; in higher dimension layers are shape vectors (the
    hyperbolic layering).  Cells whose squared value is a perfect rational
    square come out exact; all others are rounded once at 113-bit precision.
    """
    sq = square_function_sq(expansion, layering, resolution, budget_cells)
    uniq = np.unique(sq.num)
    roots = {int(u): _fraction_sqrt(Fraction(int(u), sq.den)) for u in uniq.tolist()}
    cells = np.empty(sq.num.shape, dtype=object)
    flat_src = sq.num.ravel()
    flat_dst = cells.reshape(-1)
    for u, r in roots.items():
        flat_dst[np.asarray(flat_src == u).nonzero()[0]] = r
    return GridFunction.from_fractions(sq.resolution, cells)


def norm_from_square_grid(sq: GridFunction, p) -> NormEstimate:
    """L^p norm of Sf computed from the exact grid of (Sf)^2.

    Exact for even integer p; 113-bit evaluation otherwise.
    """
    if p == math.inf:
        m = sq.max_abs()
        with mpmath.workprec(_MP_PREC):
            value = float(mpmath.sqrt(mpmath.mpf(m.numerator) / m.denominator))
        return NormEstimate(value=value, mode="exact", p=math.inf)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    half = Fraction(p) / 2
    if half.denominator == 1:
        power = lp_power_exact(sq, int(half))
        return NormEstimate(value=float(_mp_root(power, int(p))), mode="exact", p=float(p))
    uniq, counts = np.unique(sq.num, return_counts=True)
    with mpmath.workprec(_MP_PREC):
        total = mpmath.mpf(0)
        for u, c in zip(uniq.tolist(), counts.tolist()):
            if u:
                total += int(c) * mpmath.power(mpmath.mpf(int(u)) / sq.den, float(half))
        total *= mpmath.mpf(sq.cell_volume.numerator) / sq.cell_volume.denominator
        value = float(mpmath.power(total, 1.0 / float(p))) if total > 0 else 0.0
    return NormEstimate(value=value, mode="exact", p=float(p))


# ----------------------------------------------------------------------
# Monte-Carlo fallback
# ----------------------------------------------------------------------
def mc_lp_norm(f, p, samples: int, seed: int,
               dimension: int | None = None) -> NormEstimate:
    """Seeded Monte-Carlo estimate of the L^p norm with a 95% CI half-width.

    `f` is a GridFunction or a vectorized callable mapping an (m, d) array of
    points to m values.  The mean of |f|^p over uniform samples estimates the
    p-th power; the half-width is the normal-approximation CI on the mean,
    pushed through the p-th root by the delta method.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if isinstance(f, GridFunction):
        d = f.dimension
        grid = f

        def evaluate(x: np.ndarray) -> np.ndarray:
            idx = tuple(
                np.minimum((x[:, t] * (1 << n)).astype(np.int64), (1 << n) - 1)
                for t, n in enumerate(grid.resolution)
            )
            return grid.num[idx].astype(np.float64) / grid.den
    else:
        if dimension is None:
            raise ValueError("dimension required for callable integrands")
        d = dimension
        evaluate = f
    rng = np.random.default_rng(seed)
    x = rng.random((samples, d))
    vals = np.abs(np.asarray(evaluate(x), dtype=np.float64)) ** float(p)
    mean = float(np.mean(vals))
    sd = float(np.std(vals, ddof=1))
    hw_mean = 1.959963984540054 * sd / math.sqrt(samples)
    if mean <= 0:
        return NormEstimate(value=0.0, mode="monte-carlo",
                            ci_halfwidth=hw_mean ** (1.0 / float(p)) if hw_mean else 0.0,
                            sample_count=samples, seed=seed, p=float(p))
    value = mean ** (1.0 / float(p))
    hw = hw_mean * value / (float(p) * mean)
    return NormEstimate(value=value, mode="monte-carlo", ci_halfwidth=hw,
                        sample_count=samples, seed=seed, p=float(p))


def lp_ratio_report(expansion, p) -> dict:
    """Both ||f||_p and ||Sf||_p for a Haar expansion, and their ratio."""
    if p <= 1:
        raise ValueError("Littlewood-Paley monitoring needs p > 1")
    f = expansion_grid(expansion)
    sq = square_function_sq(expansion)
    f_norm = lp_norm(f, p)
    sf_norm = norm_from_square_grid(sq, p)
    ratio = f_norm.value / sf_norm.value if sf_norm.value else math.inf
    return {"f_norm": f_norm.value, "sf_norm": sf_norm.value, "ratio": ratio}
