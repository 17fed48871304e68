from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discrepancy_lab.dyadic import (
    DyadicInterval,
    SignedHaarAtom,
    boxes_of_shape,
    haar_atom,
    haar_eval,
    make_box,
    make_interval,
    product_reduce,
)
from discrepancy_lab.errors import (
    DimensionMismatch,
    EmptyIntersection,
    NotStronglyDistinct,
    OffsetOutOfRange,
)
from discrepancy_lab.gridfn import inner_product, materialize


def grid(atom, res):
    return materialize(atom, res)


class TestMakeInterval:
    def test_whole_interval(self):
        j = make_interval(0, 0)
        assert (j.left, j.right) == (0, 1)

    def test_three_quarters(self):
        j = make_interval(2, 3)
        assert (j.left, j.right) == (Fraction(3, 4), 1)
        assert j.length == Fraction(1, 4)

    def test_offset_out_of_range(self):
        with pytest.raises(OffsetOutOfRange):
            make_interval(1, 2)
        with pytest.raises(OffsetOutOfRange):
            make_interval(2, -1)


class TestHaarEval:
    def test_unit_interval_halves(self):
        a = haar_atom((0, 0))
        assert haar_eval(a, [Fraction(1, 4)]) == -1
        assert haar_eval(a, [Fraction(3, 4)]) == 1

    def test_outside_support(self):
        a = haar_atom((1, 0))
        assert haar_eval(a, [Fraction(3, 4)]) == 0

    def test_tensor_product(self):
        a = haar_atom((1, 0), (1, 1))
        # x in left half of J1 (-1), y in left half of J2 (-1) -> +1
        assert haar_eval(a, [Fraction(1, 8), Fraction(5, 8)]) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            haar_eval(haar_atom((0, 0)), [Fraction(1, 4), Fraction(1, 4)])


class TestProductReduce:
    def test_nested_1d(self):
        # h_[0,1) * h_[0,1/2) = -h_[0,1/2): the coarser factor is -1 there
        out = product_reduce([haar_atom((0, 0)), haar_atom((1, 0))])
        assert out.box == make_box((1, 0))
        assert out.sign == -1
        lhs = grid(haar_atom((0, 0)), (2,)) * grid(haar_atom((1, 0)), (2,))
        assert lhs.equals(grid(out, (2,)))

    def test_equal_levels_rejected(self):
        a = haar_atom((1, 0))
        with pytest.raises(NotStronglyDistinct):
            product_reduce([a, a])

    def test_disjoint_rejected(self):
        with pytest.raises(EmptyIntersection):
            product_reduce([haar_atom((1, 0)), haar_atom((2, 3))])

    def test_3d_example(self):
        a = haar_atom((1, 0), (2, 0), (0, 0))
        b = haar_atom((2, 0), (0, 0), (1, 0))
        out = product_reduce([a, b])
        res = (3, 3, 3)
        assert (grid(a, res) * grid(b, res)).equals(grid(out, res))

    def test_single_atom_passthrough(self):
        a = haar_atom((2, 1), sign=-1)
        assert product_reduce([a]) == a


def test_haar_integral_zero_exact():
    for k, off in [(0, 0), (1, 1), (3, 5)]:
        g = grid(haar_atom((k, off)), (k + 1,))
        assert g.integral() == 0


def test_orthogonality_exact():
    res = (3,)
    j1 = haar_atom((2, 1))
    j2 = haar_atom((2, 2))
    assert inner_product(grid(j1, res), grid(j2, res)) == 0
    assert inner_product(grid(j1, res), grid(j1, res)) == Fraction(1, 4)
    # nested intervals are orthogonal too (the finer one has mean zero on
    # each half of the coarser)
    j3 = haar_atom((1, 0))
    assert inner_product(grid(j1, res), grid(j3, res)) == 0


@given(st.integers(0, 5), st.integers(0, 5), st.data())
@settings(max_examples=60, deadline=None)
def test_dyadic_dichotomy(k1, k2, data):
    a1 = data.draw(st.integers(0, 2 ** k1 - 1))
    a2 = data.draw(st.integers(0, 2 ** k2 - 1))
    p = DyadicInterval(k1, a1)
    q = DyadicInterval(k2, a2)
    rel = p.relation(q)
    overlap = max(p.left, q.left) < min(p.right, q.right)
    if rel == "disjoint":
        assert not overlap
    elif rel == "equal":
        assert p == q
    else:
        assert (p.contains(q) or q.contains(p)) and p != q and overlap


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_product_reduce_matches_pointwise(data):
    d = data.draw(st.integers(1, 3))
    n_atoms = data.draw(st.integers(2, 3))
    # pairwise distinct levels per coordinate, from a small level pool
    level_sets = [
        data.draw(st.lists(st.integers(0, 4), min_size=n_atoms, max_size=n_atoms,
                           unique=True))
        for _ in range(d)
    ]
    res = tuple(max(ls) + 1 for ls in level_sets)
    atoms = []
    for i in range(n_atoms):
        coords = []
        for t in range(d):
            k = level_sets[t][i]
            coords.append((k, data.draw(st.integers(0, 2 ** k - 1))))
        atoms.append(haar_atom(*coords, sign=data.draw(st.sampled_from([-1, 1]))))
    pointwise = grid(atoms[0], res)
    for a in atoms[1:]:
        pointwise = pointwise * grid(a, res)
    try:
        reduced = product_reduce(atoms)
    except EmptyIntersection:
        assert np.all(pointwise.num == 0)
        return
    assert pointwise.equals(grid(reduced, res))


def test_boxes_of_shape_count():
    assert sum(1 for _ in boxes_of_shape((2, 1))) == 8


def test_atom_sign_validation():
    with pytest.raises(ValueError):
        SignedHaarAtom(make_box((0, 0)), 2)
