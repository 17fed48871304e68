"""Hyperbolic vectors, r-functions, Riesz products, and duality certificates.

An r-function is a +-1-coefficient Haar sum over all dyadic boxes of one
shape; products of strongly distinct r-functions reduce symbolically to
r-functions again (per-box product rule), which keeps inner products with
the discrepancy function exact.  The 2D construction multiplies the n+1
volume-2^-n shapes into a Halasz product; the 3D construction groups shapes
into q collections by first coordinate and splits the expansion of
prod(1 + rho~ F_v) into its strongly distinct part and the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dyadic import DyadicBox, DyadicInterval, SignedHaarAtom
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    GammaOutOfRange,
    NotStronglyDistinct,
    ParameterDomain,
    UsageError,
    ZeroTestFunction,
)
from .gridfn import (
    GridFunction,
    NormEstimate,
    exact_sum,
    lp_norm,
    lp_power_exact,
)
from .parallel import tmap
from .pointset import (
    PointSet,
    discrepancy_grid_inner_exact,
    haar_coefficient_linear_part,
    haar_coefficient_point_parts,
)


def _chunks(seq, size: int):
    for i in range(0, len(seq), size):
        yield seq[i : i + size]

__all__ = [
    "HyperbolicVector",
    "RFunction",
    "HalaszProduct",
    "RieszProduct3D",
    "Certificate",
    "hyperbolic_vectors",
    "strongly_distinct",
    "make_r_function",
    "product_of_r_functions",
    "r_function_inner_product",
    "build_halasz",
    "build_psi",
    "certify",
    "sd_inner_product",
    "halasz_level_from_size",
    "collections_by_first_coordinate",
    "first_coordinate_blocks",
]


@dataclass(frozen=True, order=True)
class HyperbolicVector:
    """Nonnegative integer triple (r1, r2, r3) with r1 + r2 + r3 = n."""

    entries: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.entries) != 3 or any(r < 0 for r in self.entries):
            raise UsageError(f"bad hyperbolic vector {self.entries}")

    @property
    def n(self) -> int:
        return sum(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __repr__(self) -> str:
        return f"r{self.entries}"


def hyperbolic_vectors(n: int, allow_zero: bool = True) -> list[HyperbolicVector]:
    """All (r1,r2,r3) summing to n, lexicographic; entries >= 1 if not allow_zero."""
    lo = 0 if allow_zero else 1
    out = []
    for r1 in range(lo, n + 1):
        for r2 in range(lo, n - r1 + 1):
            r3 = n - r1 - r2
            if r3 >= lo:
                out.append(HyperbolicVector((r1, r2, r3)))
    return out


def strongly_distinct(r, s) -> bool:
    """True iff the vectors differ in every coordinate."""
    rt = r.entries if isinstance(r, HyperbolicVector) else tuple(r)
    st = s.entries if isinstance(s, HyperbolicVector) else tuple(s)
    if len(rt) != len(st):
        raise DimensionMismatch("vectors of different length")
    return all(a != b for a, b in zip(rt, st))


# ----------------------------------------------------------------------
# r-functions
# ----------------------------------------------------------------------
def _axis_half_signs(level: int, target: int) -> np.ndarray:
    """Half signs of level-`level` Haar factors along a level-`target` axis.

    Entry i is -1/+1 by which half of its level-`level` ancestor the i-th
    level-`target` interval occupies; exactly the product-rule sigma per
    coordinate.  Requires target > level.
    """
    idx = np.arange(1 << target)
    return (2 * ((idx >> (target - level - 1)) & 1) - 1).astype(np.int8)


def _lift(alpha: np.ndarray, shape: tuple[int, ...],
          target: tuple[int, ...]) -> np.ndarray:
    """alpha replicated to the target shape grid, times per-axis half signs.

    Replication happens in one broadcast assignment (much faster than chained
    np.repeat on inner axes).  Returns a fresh array unless target == shape
    (then alpha itself; callers must not mutate the result).
    """
    shape = tuple(shape)
    target = tuple(target)
    if target == shape:
        return alpha
    out = np.empty(tuple(1 << m for m in target), dtype=alpha.dtype)
    blocks, view = [], []
    for k, m in zip(shape, target):
        blocks += [1 << k, 1 << (m - k)]
        view += [1 << k, 1]
    out.reshape(blocks)[...] = alpha.reshape(view)
    for axis, (k, m) in enumerate(zip(shape, target)):
        if m > k:
            s = _axis_half_signs(k, m)
            shp = [1] * len(target)
            shp[axis] = s.size
            out *= s.reshape(shp)
    return out


def _add_upsampled(acc: np.ndarray, acc_res: tuple[int, ...],
                   arr: np.ndarray, arr_res: tuple[int, ...]) -> None:
    """acc += arr with plain block replication, via a reshaped view of acc."""
    blocks, view = [], []
    for m, k in zip(acc_res, arr_res):
        blocks += [1 << k, 1 << (m - k)]
        view += [1 << k, 1]
    acc.reshape(blocks)[...] += arr.reshape(view)


class RFunction:
    """f = sum over boxes R of one shape of alpha(R) h_R, alpha(R) in {-1,+1}.

    `alpha` is indexed by per-axis box offsets.  Satisfies f^2 == 1 and
    integral 0 on its natural grid.
    """

    __slots__ = ("shape", "alpha", "sign_rule")

    def __init__(self, shape: Sequence[int], alpha: np.ndarray, sign_rule: str = "custom"):
        self.shape = tuple(int(k) for k in shape)
        expected = tuple(1 << k for k in self.shape)
        if tuple(alpha.shape) != expected:
            raise UsageError(f"alpha shape {alpha.shape} != {expected}")
        self.alpha = alpha.astype(np.int8)
        self.sign_rule = sign_rule

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def rvec(self) -> HyperbolicVector:
        if self.dimension != 3:
            raise DimensionMismatch("rvec defined for 3D r-functions")
        return HyperbolicVector(self.shape)

    def boxes(self) -> Iterable[tuple[tuple[int, ...], int]]:
        for offs in np.ndindex(*self.alpha.shape):
            yield offs, int(self.alpha[offs])

    def expansion(self) -> dict[DyadicBox, int]:
        """The coefficient map box -> alpha, for square-function interop."""
        out = {}
        for offs, a in self.boxes():
            box = DyadicBox(tuple(DyadicInterval(k, o) for k, o in zip(self.shape, offs)))
            out[box] = a
        return out

    def box_values(self, target_shape: Sequence[int]) -> np.ndarray:
        """Per-box values used by the product rule on a finer shape grid.

        Entry at a target box S is alpha(ancestor) times the half-signs the
        coarser one-dimensional factors take on S; coordinates already at the
        target level contribute no sign.  May return a shared array; callers
        must not mutate it.
        """
        target_shape = tuple(target_shape)
        if len(target_shape) != self.dimension:
            raise DimensionMismatch("target shape dimension mismatch")
        if any(m < k for m, k in zip(target_shape, self.shape)):
            raise UsageError(f"target {target_shape} coarser than {self.shape}")
        return _lift(self.alpha, self.shape, target_shape)

    def to_grid(self, resolution: Sequence[int],
                budget_cells: int | None = None) -> GridFunction:
        """Exact materialization; needs resolution >= shape + 1 per axis."""
        resolution = tuple(resolution)
        for k, m in zip(self.shape, resolution):
            if m < k + 1:
                raise UsageError(
                    f"resolution {resolution} cannot resolve shape {self.shape}"
                )
        cells = self.box_values(resolution)
        return GridFunction(resolution, cells.astype(np.int64), 1)

    def natural_resolution(self) -> tuple[int, ...]:
        return tuple(k + 1 for k in self.shape)

    def integral_is_zero(self) -> bool:
        # each box contributes alpha * 0; symbolically exact
        return True

    def __repr__(self) -> str:
        return f"RFunction(shape={self.shape}, rule={self.sign_rule})"


def make_r_function(rvec, sign_rule: str = "allPlus",
                    pointset: PointSet | None = None,
                    seed: int | None = None) -> RFunction:
    """Build an r-function for a shape with one of the named sign policies.

    allPlus: every alpha(R) = +1.  signOfHaarCoefficient: alpha(R) = +1 iff
    <D_N, h_R> >= 0 for the supplied point set (ties +1).  seededRandom:
    reproducible +-1 from (seed, shape).
    """
    shape = rvec.entries if isinstance(rvec, HyperbolicVector) else tuple(rvec)
    dims = tuple(1 << k for k in shape)
    if sign_rule == "allPlus":
        alpha = np.ones(dims, dtype=np.int8)
        return RFunction(shape, alpha, "allPlus")
    if sign_rule == "seededRandom":
        if seed is None:
            raise UsageError("seededRandom needs a seed")
        rng = np.random.default_rng([seed, *shape])
        alpha = (2 * rng.integers(0, 2, size=dims) - 1).astype(np.int8)
        return RFunction(shape, alpha, f"seededRandom({seed})")
    if sign_rule == "signOfHaarCoefficient":
        if pointset is None:
            raise UsageError("signOfHaarCoefficient needs a point set")
        if pointset.dimension != len(shape):
            raise DimensionMismatch("point set dimension != shape length")
        linear = haar_coefficient_linear_part(pointset, shape)
        alpha = np.ones(dims, dtype=np.int8)  # linear part alone is positive
        for offs, part in haar_coefficient_point_parts(pointset, shape).items():
            if linear - part < 0:
                alpha[offs] = -1
        return RFunction(shape, alpha, f"signOfHaarCoefficient({pointset.label})")
    raise UsageError(f"unknown sign rule: {sign_rule}")


def product_of_r_functions(factors: Sequence[RFunction]) -> RFunction:
    """Product-rule reduction of pairwise strongly distinct r-functions.

    Per coordinate the factor levels must be pairwise distinct; the result
    lives on the componentwise-max shape and is again an r-function.
    """
    if not factors:
        raise UsageError("need at least one factor")
    if len(factors) == 1:
        return factors[0]
    d = factors[0].dimension
    for t in range(d):
        levels = [f.shape[t] for f in factors]
        if len(set(levels)) != len(levels):
            raise NotStronglyDistinct(
                f"coordinate {t + 1} carries equal levels {levels}"
            )
    target = tuple(max(f.shape[t] for f in factors) for t in range(d))
    beta = factors[0].box_values(target).copy()
    for f in factors[1:]:
        beta *= f.box_values(target)
    rule = "*".join(f.sign_rule for f in factors)
    return RFunction(target, beta, f"product[{rule}]")


def r_function_inner_product(pointset: PointSet, rf: RFunction) -> Fraction:
    """Exact <D_N, f> = L(shape) * sum(alpha) - sum over occupied boxes."""
    if pointset.dimension != rf.dimension:
        raise DimensionMismatch("dimension mismatch")
    linear = haar_coefficient_linear_part(pointset, rf.shape)
    total = linear * exact_sum(rf.alpha)
    for offs, part in haar_coefficient_point_parts(pointset, rf.shape).items():
        total -= int(rf.alpha[offs]) * part
    return total


# ----------------------------------------------------------------------
# 2D Halasz product
# ----------------------------------------------------------------------
def halasz_level_from_size(n_points: int) -> int:
    """The n with 2^{n-2} <= N < 2^{n-1}."""
    return n_points.bit_length() + 1 if (n_points & (n_points - 1)) == 0 \
        else int(math.floor(math.log2(n_points))) + 2


@dataclass
class HalaszProduct:
    """Phi = prod_{k=0}^n (1 + gamma f_k) - 1 over the 2D hyperbolic shapes.

    `terms` maps each nonempty subset of {0..n} to its reduced r-function;
    singletons form the linear part gamma * sum f_k and the rest is the
    high-order tail.
    """

    n: int
    gamma: Fraction
    fks: list[RFunction]
    terms: list[tuple[tuple[int, ...], RFunction]] = field(default_factory=list)
    expanded: bool = False
    label: str = ""

    def linear_inner_product(self, pointset: PointSet) -> Fraction:
        """Exact <D_N, sum_k f_k> (no gamma factor)."""
        return sum((r_function_inner_product(pointset, f) for f in self.fks),
                   Fraction(0))

    def inner_product(self, pointset: PointSet) -> Fraction:
        """Exact <D_N, Phi> summed over all expansion terms."""
        if not self.expanded:
            raise UsageError("Halasz product built without expansion")
        total = Fraction(0)
        for subset, rf in self.terms:
            total += self.gamma ** len(subset) * r_function_inner_product(pointset, rf)
        return total

    def natural_resolution(self) -> tuple[int, int]:
        return (self.n + 1, self.n + 1)

    def to_grid(self, resolution: Sequence[int] | None = None,
                budget_cells: int | None = None) -> GridFunction:
        """Exact cells of Phi (the product minus one), from the expansion."""
        if not self.expanded:
            raise UsageError("Halasz product built without expansion")
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        if any(r < self.n + 1 for r in res):
            raise UsageError(f"resolution {res} cannot resolve level-{self.n} factors")
        den = self.gamma.denominator ** (self.n + 1)
        shape = tuple(1 << r for r in res)
        acc = np.zeros(shape, dtype=np.int64)
        for subset, rf in self.terms:
            c = self.gamma ** len(subset)
            scaled = c.numerator * (den // c.denominator)
            acc += rf.box_values(res).astype(np.int64) * np.int64(scaled)
        return GridFunction(res, acc, den)

    def product_grid(self, resolution: Sequence[int] | None = None) -> GridFunction:
        """Exact cells of 1 + Phi computed the other way, as the factor product."""
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        out = GridFunction.constant(1, res)
        for f in self.fks:
            out = out * (GridFunction.constant(1, res) + self.gamma * f.to_grid(res))
        return out


def build_halasz(pointset: PointSet, gamma,
                 sign_rule: str = "signOfHaarCoefficient",
                 seed: int | None = None,
                 expand: bool = True,
                 budget_cells: int | None = None) -> HalaszProduct:
    """Construct the 2D Riesz product for a point set.

    n is fixed by 2^{n-2} <= N < 2^{n-1}; the default signs maximize the
    linear term (epsilon_R = sign <D_N, h_R>, ties +1).  With expand=True all
    2^{n+1}-1 subset products are reduced via the product rule; the subsets
    of size >= 2 form the high-order part.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise GammaOutOfRange(f"gamma must be in (0,1), got {gamma}")
    if pointset.dimension != 2:
        raise DimensionMismatch("Halasz product needs a 2D point set")
    n = halasz_level_from_size(pointset.size)
    fks = [
        make_r_function((k, n - k), sign_rule, pointset=pointset, seed=seed)
        for k in range(n + 1)
    ]
    product = HalaszProduct(n=n, gamma=gamma, fks=fks, label=pointset.label)
    if expand:
        budget = (1 << 24) if budget_cells is None else budget_cells
        total_boxes = 0
        terms: list[tuple[tuple[int, ...], RFunction]] = []
        for mask in range(1, 1 << (n + 1)):
            subset = tuple(k for k in range(n + 1) if mask >> k & 1)
            rf = product_of_r_functions([fks[k] for k in subset])
            total_boxes += rf.alpha.size
            if total_boxes > budget:
                raise BudgetExceeded(
                    f"Halasz expansion exceeds {budget} total boxes"
                )
            terms.append((subset, rf))
        product.terms = terms
        product.expanded = True
    return product


# ----------------------------------------------------------------------
# 3D Riesz product
# ----------------------------------------------------------------------
def first_coordinate_blocks(n: int, q: int) -> list[range]:
    """Partition of {1..n} into q consecutive blocks I_v (floor boundaries)."""
    return [
        range((v - 1) * n // q + 1, v * n // q + 1)
        for v in range(1, q + 1)
    ]


def collections_by_first_coordinate(n: int, q: int) -> list[list[HyperbolicVector]]:
    """A_v = hyperbolic vectors with first coordinate in I_v (r2, r3 >= 0)."""
    blocks = first_coordinate_blocks(n, q)
    out = []
    for block in blocks:
        vecs = [
            HyperbolicVector((r1, j, n - r1 - j))
            for r1 in block
            for j in range(n - r1 + 1)
        ]
        out.append(vecs)
    return out


@dataclass(frozen=True)
class PsiTerm:
    """One expansion term: a choice of vectors over a subset of collections."""

    subset: tuple[int, ...]          # collection indices, 1-based
    vectors: tuple[HyperbolicVector, ...]
    strongly_distinct: bool


@dataclass
class RieszProduct3D:
    """Psi = prod_{v=1}^q (1 + rho~ F_v) = 1 + Psi_sd + Psi_not.

    rho~ is pinned to the dyadic rational `rho_tilde_exact` so the
    decomposition identity and all inner products are exact; the float
    `rho_tilde` = a q^b / n is kept for reporting.
    """

    n: int
    q: int
    epsilon: float
    a: float
    b: float
    rho: float
    rho_tilde: float
    rho_tilde_exact: Fraction
    collections: list[list[HyperbolicVector]]
    r_functions: dict[tuple[int, int, int], RFunction]
    terms: list[PsiTerm]
    sign_rule: str
    label: str = ""
    equal_blocks: bool = True
    _shape_parts_cache: dict = field(default_factory=dict, repr=False)

    # -- geometry ------------------------------------------------------
    def natural_resolution(self) -> tuple[int, int, int]:
        m1 = max(max(r[0] for r in vecs) for vecs in self.collections)
        m2 = max(max(r[1] for r in vecs) for vecs in self.collections)
        m3 = max(max(r[2] for r in vecs) for vecs in self.collections)
        return (m1 + 1, m2 + 1, m3 + 1)

    def term_r_function(self, term: PsiTerm) -> RFunction:
        """The product-rule reduction of a strongly distinct term."""
        if not term.strongly_distinct:
            raise NotStronglyDistinct("term carries a coincidence")
        return product_of_r_functions(
            [self.r_functions[v.entries] for v in term.vectors]
        )

    def _term_local_grid(self, term: PsiTerm) -> tuple[tuple[int, ...], np.ndarray]:
        """(local resolution, +-1 cells) of prod f over the term's vectors."""
        shapes = [v.entries for v in term.vectors]
        res = tuple(max(s[t] for s in shapes) + 1 for t in range(3))
        cells = self.r_functions[shapes[0]].box_values(res).copy()
        for s in shapes[1:]:
            cells *= self.r_functions[s].box_values(res)
        return res, cells

    # -- grids ----------------------------------------------------------
    def factor_grid(self, v: int, resolution: Sequence[int] | None = None) -> GridFunction:
        """1 + rho~ F_v, exact."""
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        t = self.rho_tilde_exact
        return GridFunction(res, self._factor_num(v, res), t.denominator)

    def _factor_num(self, v: int, res: tuple[int, ...]) -> np.ndarray:
        t = self.rho_tilde_exact
        acc = np.zeros(tuple(1 << r for r in res), dtype=np.int16)
        for vec in self.collections[v - 1]:
            acc += self.r_functions[vec.entries].box_values(res)
        num = acc.astype(np.int64)
        num *= t.numerator
        num += t.denominator
        return num

    def product_grid(self, resolution: Sequence[int] | None = None) -> GridFunction:
        """prod_v (1 + rho~ F_v) as an exact pointwise product of factors.

        The dyadic pin of rho~ guarantees the integer numerators fit int64.
        """
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        num = self._factor_num(1, res)
        for v in range(2, self.q + 1):
            num *= self._factor_num(v, res)
        return GridFunction(res, num, self.rho_tilde_exact.denominator ** self.q)

    @staticmethod
    def _merge_groups(pieces: list[tuple[tuple[int, ...], np.ndarray]],
                      res: tuple[int, ...], den: int) -> GridFunction:
        """Sum int64 cell grids of mixed resolutions into one full grid."""
        total = np.zeros(tuple(1 << r for r in res), dtype=np.int64)
        for local_res, arr in pieces:
            _add_upsampled(total, res, arr, local_res)
        return GridFunction(res, total, den)

    def sd_grid(self, resolution: Sequence[int] | None = None) -> GridFunction:
        """Psi_sd: the sum over strongly distinct expansion terms.

        Every sd term reduces to an r-function, so terms are accumulated as
        Haar coefficient arrays per combined shape and lifted to cells once
        per shape.
        """
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        t = self.rho_tilde_exact
        den = t.denominator ** self.q
        groups: dict[tuple[int, ...], np.ndarray] = {}
        sd_terms = [term for term in self.terms if term.strongly_distinct]
        for chunk in _chunks(sd_terms, 256):
            reduced = tmap(self.term_r_function, chunk)
            for term, rf in zip(chunk, reduced):
                k = len(term.subset)
                coef = t.numerator ** k * t.denominator ** (self.q - k)
                acc = groups.get(rf.shape)
                if acc is None:
                    groups[rf.shape] = rf.alpha.astype(np.int64) * coef
                else:
                    acc += rf.alpha.astype(np.int64) * coef
        pieces = []
        for shape, beta in groups.items():
            lift_res = tuple(min(k + 1, r) for k, r in zip(shape, res))
            pieces.append((lift_res, _lift(beta, shape, lift_res)))
        return self._merge_groups(pieces, res, den)

    def not_grid(self, resolution: Sequence[int] | None = None) -> GridFunction:
        """Psi_not: the sum over terms with at least one coincidence.

        Coincident products are not Haar sums, so they are accumulated as
        +-1 cell grids at each term's own resolution and merged.
        """
        res = tuple(resolution) if resolution is not None else self.natural_resolution()
        t = self.rho_tilde_exact
        den = t.denominator ** self.q
        groups: dict[tuple[tuple[int, ...], int], np.ndarray] = {}
        not_terms = [term for term in self.terms if not term.strongly_distinct]
        for chunk in _chunks(not_terms, 256):
            local = tmap(self._term_local_grid, chunk)
            for term, (local_res, cells) in zip(chunk, local):
                key = (local_res, len(term.subset))
                acc = groups.get(key)
                if acc is None:
                    groups[key] = cells.astype(np.int32)
                else:
                    acc += cells
        pieces = []
        for (local_res, k), arr in groups.items():
            coef = t.numerator ** k * t.denominator ** (self.q - k)
            pieces.append((local_res, arr.astype(np.int64) * coef))
        return self._merge_groups(pieces, res, den)

    # -- exact inner products -------------------------------------------
    def _shape_parts(self, pointset: PointSet, shape: tuple[int, ...]):
        key = (id(pointset), shape)
        if key not in self._shape_parts_cache:
            self._shape_parts_cache[key] = (
                haar_coefficient_linear_part(pointset, shape),
                haar_coefficient_point_parts(pointset, shape),
            )
        return self._shape_parts_cache[key]

    def sd_term_inner(self, pointset: PointSet, term: PsiTerm) -> Fraction:
        """Exact <D_N, prod f> for one strongly distinct term via reduction."""
        rf = self.term_r_function(term)
        linear, parts = self._shape_parts(pointset, rf.shape)
        total = linear * exact_sum(rf.alpha)
        for offs, part in parts.items():
            total -= int(rf.alpha[offs]) * part
        return total

    def sd_inner(self, pointset: PointSet) -> Fraction:
        """Exact <D_N, Psi_sd> via product-rule pairing."""
        total = Fraction(0)
        for term in self.terms:
            if term.strongly_distinct:
                total += (self.rho_tilde_exact ** len(term.subset)
                          * self.sd_term_inner(pointset, term))
        return total

    def linear_inner(self, pointset: PointSet) -> Fraction:
        """Exact rho~ sum_v <D_N, F_v>, the subset-size-one part of Psi_sd."""
        total = Fraction(0)
        for vecs in self.collections:
            for vec in vecs:
                total += r_function_inner_product(
                    pointset, self.r_functions[vec.entries])
        return self.rho_tilde_exact * total

    def describe(self) -> dict:
        sd = sum(1 for t in self.terms if t.strongly_distinct)
        return {
            "n": self.n, "q": self.q, "epsilon": self.epsilon,
            "a": self.a, "b": self.b, "rho": self.rho,
            "rho_tilde": self.rho_tilde,
            "rho_tilde_pinned": float(self.rho_tilde_exact),
            "collection_sizes": [len(c) for c in self.collections],
            "terms": len(self.terms), "sd_terms": sd,
            "not_terms": len(self.terms) - sd,
            "equal_blocks": self.equal_blocks,
            "sign_rule": self.sign_rule,
        }


def _pin_rho_tilde(rho_tilde: float, collections, q: int) -> Fraction:
    """Dyadic pin of rho~ whose q-fold factor product provably fits int64."""
    for shift in range(30, 7, -1):
        num = max(1, round(rho_tilde * (1 << shift)))
        bound = 1
        for vecs in collections:
            bound *= (1 << shift) + num * len(vecs)
        if bound < (1 << 62):
            return Fraction(num, 1 << shift)
    raise BudgetExceeded("cannot pin rho~ within the exact integer budget")


def build_psi(pointset: PointSet, n: int,
              epsilon: float | None = None,
              a: float = 1.0, b: float = 0.24,
              q: int | None = None,
              sign_rule: str = "signOfHaarCoefficient",
              seed: int | None = None,
              max_n: int = 9, max_q: int = 4) -> RieszProduct3D:
    """Construct the 3D Riesz product Psi for a point set.

    Either epsilon (then q = round(n^epsilon), requiring q | n and
    epsilon in (0, 1/3)) or an explicit desk-scale q may be given; with an
    explicit q the implied epsilon = log q / log n is recorded and unequal
    first-coordinate blocks are allowed when q does not divide n.  b < 1/4
    always.  Every expansion term is classified strongly-distinct or not by
    pairwise comparison of its vectors.
    """
    if pointset.dimension != 3:
        raise DimensionMismatch("Psi needs a 3D point set")
    if b >= 0.25:
        raise ParameterDomain(f"b must satisfy b < 1/4, got {b}")
    if q is None:
        if epsilon is None:
            raise UsageError("give either epsilon or q")
        if not 0 < epsilon < 1 / 3:
            raise ParameterDomain(f"epsilon must lie in (0, 1/3), got {epsilon}")
        q = max(1, round(n ** epsilon))
        if n % q:
            raise ParameterDomain(f"rounded q = {q} does not divide n = {n}")
    else:
        epsilon = math.log(q) / math.log(n) if n > 1 else 0.0
    if n > max_n or q > max_q:
        raise BudgetExceeded(f"(n={n}, q={q}) beyond exact budget (n<={max_n}, q<={max_q})")
    if q > n:
        raise ParameterDomain(f"q = {q} exceeds n = {n}")

    rho = math.sqrt(q) / n
    rho_tilde = a * q ** b / n
    collections = collections_by_first_coordinate(n, q)
    rho_exact = _pin_rho_tilde(rho_tilde, collections, q)

    r_functions: dict[tuple[int, int, int], RFunction] = {}
    for vecs in collections:
        for vec in vecs:
            r_functions[vec.entries] = make_r_function(
                vec, sign_rule, pointset=pointset, seed=seed)

    terms: list[PsiTerm] = []
    def expand(v: int, chosen: list[tuple[int, HyperbolicVector]]):
        if v > q:
            if chosen:
                vecs = tuple(c[1] for c in chosen)
                sd = all(
                    strongly_distinct(vecs[i], vecs[j])
                    for i in range(len(vecs)) for j in range(i + 1, len(vecs))
                )
                terms.append(PsiTerm(tuple(c[0] for c in chosen), vecs, sd))
            return
        expand(v + 1, chosen)
        for vec in collections[v - 1]:
            chosen.append((v, vec))
            expand(v + 1, chosen)
            chosen.pop()

    expand(1, [])
    terms.sort(key=lambda t: (len(t.subset), t.subset, t.vectors))
    return RieszProduct3D(
        n=n, q=q, epsilon=float(epsilon), a=a, b=b,
        rho=rho, rho_tilde=rho_tilde, rho_tilde_exact=rho_exact,
        collections=collections, r_functions=r_functions,
        terms=terms, sign_rule=sign_rule, label=pointset.label,
        equal_blocks=(n % q == 0),
    )


def sd_inner_product(pointset: PointSet, psi: RieszProduct3D) -> Fraction:
    """Exact <D_N, Psi_sd> by product-rule reduction of every sd term."""
    return psi.sd_inner(pointset)


# ----------------------------------------------------------------------
# duality certificates
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Certificate:
    """A proven lower bound D*_N >= <D_N, Phi> / ||Phi||_1."""

    lower_bound: float
    inner_product: float
    l1_norm: NormEstimate
    test_function: str
    point_set_label: str
    lower_bound_exact: Fraction | None = None
    inner_product_exact: Fraction | None = None


def _exact_l1(grid: GridFunction) -> tuple[NormEstimate, Fraction]:
    power = lp_power_exact(grid, 1)
    return NormEstimate(value=float(power), mode="exact", p=1.0), power


def certify(pointset: PointSet, test_function,
            resolution: Sequence[int] | None = None) -> Certificate:
    """Duality certificate for D*_N from a test function.

    Accepts a SignedHaarAtom (exact closed-form pairing), a HalaszProduct or
    RieszProduct3D (exact pairing through the product rule; the 3D product
    contributes its strongly distinct part), or a GridFunction (exact grid
    integration).  Raises ZeroTestFunction when ||Phi||_1 = 0.
    """
    from .pointset import haar_coefficient  # local import avoids cycle at load

    if isinstance(test_function, SignedHaarAtom):
        inner = test_function.sign * haar_coefficient(pointset, test_function.box)
        l1_exact = test_function.box.volume
        descriptor = f"atom[{test_function.box}]"
        l1 = NormEstimate(value=float(l1_exact), mode="exact", p=1.0)
    elif isinstance(test_function, HalaszProduct):
        inner = test_function.inner_product(pointset)
        grid = test_function.to_grid(resolution)
        l1, l1_exact = _exact_l1(grid)
        descriptor = f"halasz2d[n={test_function.n},gamma={test_function.gamma}]"
    elif isinstance(test_function, RieszProduct3D):
        inner = test_function.sd_inner(pointset)
        grid = test_function.sd_grid(resolution)
        l1, l1_exact = _exact_l1(grid)
        descriptor = f"riesz3d-sd[n={test_function.n},q={test_function.q}]"
    elif isinstance(test_function, GridFunction):
        inner = discrepancy_grid_inner_exact(pointset, test_function)
        l1, l1_exact = _exact_l1(test_function)
        descriptor = f"grid{test_function.resolution}"
    else:
        raise UsageError(f"cannot certify with {type(test_function).__name__}")
    if l1_exact == 0:
        raise ZeroTestFunction("test function has zero L1 norm")
    bound = inner / l1_exact
    return Certificate(
        lower_bound=float(bound),
        inner_product=float(inner),
        l1_norm=l1,
        test_function=descriptor,
        point_set_label=pointset.label,
        lower_bound_exact=bound,
        inner_product_exact=inner,
    )
