import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from discrepancy_lab.dyadic import boxes_of_shape, make_box
from discrepancy_lab.errors import BudgetExceeded, UnsupportedDimension, UsageError
from discrepancy_lab.pointset import (
    PointSet,
    discrepancy_value,
    empty_box_count,
    generate,
    haar_coefficient,
    l2_discrepancy_exact,
    l2_discrepancy_sq_exact,
    load_points,
    save_points,
    star_discrepancy_exact,
    star_discrepancy_grid_scan,
)


def F(*args):
    return Fraction(*args)


def single(x):
    return PointSet(1, ((F(x),),))


class TestGenerate:
    def test_van_der_corput_4(self):
        ps = generate("vanDerCorput", 4, 1)
        assert [p[0] for p in ps.points] == [0, F(1, 2), F(1, 4), F(3, 4)]

    def test_hammersley_2(self):
        ps = generate("hammersley", 2, 2)
        assert ps.points == ((F(0), F(0)), (F(1, 2), F(1, 2)))

    def test_grid_1d(self):
        ps = generate("grid", 4, 1)
        assert [p[0] for p in ps.points] == [0, F(1, 4), F(1, 2), F(3, 4)]

    def test_grid_requires_power(self):
        with pytest.raises(UsageError):
            generate("grid", 5, 2)

    def test_random_seeded(self):
        a = generate("random", 8, 3, seed=1)
        b = generate("random", 8, 3, seed=1)
        assert a.points == b.points
        with pytest.raises(UsageError):
            generate("random", 8, 3)

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedDimension):
            generate("vanDerCorput", 4, 3)
        with pytest.raises(UnsupportedDimension):
            generate("random", 4, 4, seed=0)


def test_point_file_roundtrip(tmp_path):
    ps = generate("random", 6, 2, seed=9)
    path = tmp_path / "pts.txt"
    save_points(ps, str(path))
    back = load_points(str(path))
    assert back.dimension == 2 and back.size == 6
    # the file format is decimal, so equality holds at float precision
    assert all(
        float(a) == float(b)
        for p, q in zip(ps.points, back.points) for a, b in zip(p, q)
    )


def test_point_file_comments(tmp_path):
    path = tmp_path / "pts.txt"
    path.write_text("# header\n0.25 0.5  # trailing\n\n0.75 0.125\n")
    ps = load_points(str(path))
    assert ps.size == 2 and ps.dimension == 2


class TestDiscrepancyValue:
    def test_basic(self):
        assert discrepancy_value(single("0.5"), [F(3, 4)]) == F(-1, 4)

    def test_boundary_point_not_counted(self):
        assert discrepancy_value(single("0.5"), [F(1, 2)]) == F(1, 2)

    def test_2d(self):
        ps = PointSet(2, ((F(1, 2), F(1, 2)),))
        assert discrepancy_value(ps, [F(3, 4), F(3, 4)]) == F(9, 16) - 1


class TestStarDiscrepancy:
    def test_midpoint(self):
        rep = star_discrepancy_exact(single("0.5"))
        assert rep.value_exact == F(1, 2)

    def test_origin_point(self):
        rep = star_discrepancy_exact(single(0))
        assert rep.value_exact == 1
        assert rep.semantics == "closed"

    def test_two_points(self):
        ps = PointSet(1, ((F(1, 4),), (F(3, 4),)))
        assert star_discrepancy_exact(ps).value_exact == F(1, 2)

    def test_witness_reproduces_value(self):
        ps = generate("random", 12, 2, seed=4)
        rep = star_discrepancy_exact(ps)
        d_open = ps.size * math.prod(rep.witness_exact) - sum(
            1 for p in ps.points
            if all(c < w for c, w in zip(p, rep.witness_exact)))
        d_closed = sum(
            1 for p in ps.points
            if all(c <= w for c, w in zip(p, rep.witness_exact))
        ) - ps.size * math.prod(rep.witness_exact)
        assert rep.value_exact == (d_open if rep.semantics == "open" else d_closed)

    def test_budget(self):
        ps = generate("random", 32, 2, seed=0)
        with pytest.raises(BudgetExceeded):
            star_discrepancy_exact(ps, budget_corners=10)

    def test_matches_grid_scan(self):
        for seed in range(5):
            ps = generate("random", 10, 2, seed=seed)
            rep = star_discrepancy_exact(ps)
            grid_max, modulus = star_discrepancy_grid_scan(ps, bits=10)
            assert grid_max <= rep.value + 1e-12
            assert rep.value <= grid_max + modulus


class TestL2Discrepancy:
    def test_single_midpoint(self):
        # quadrature oracle: integral of (x - 1{x>1/2})^2 = 1/12
        assert l2_discrepancy_sq_exact(single("0.5")) == F(1, 12)

    def test_l2_below_star(self):
        for seed in range(6):
            ps = generate("random", 8, 2, seed=seed)
            star = star_discrepancy_exact(ps).value_exact
            assert l2_discrepancy_sq_exact(ps) <= star * star

    def test_matches_monte_carlo(self):
        ps = generate("random", 8, 2, seed=13)
        exact = float(l2_discrepancy_sq_exact(ps))
        rng = np.random.default_rng(99)
        x = rng.random((200_000, 2))
        coords = ps.coords_float()
        counts = np.sum(
            np.all(coords[None, :, :] < x[:, None, :], axis=2), axis=1)
        vals = (ps.size * x.prod(axis=1) - counts) ** 2
        mean = vals.mean()
        hw = 1.96 * vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(mean - exact) <= hw


class TestHaarCoefficient:
    def test_single_point_1d(self):
        assert haar_coefficient(single("0.5"), make_box((0, 0))) == F(-1, 4)

    def test_single_point_2d(self):
        ps = PointSet(2, ((F(1, 2), F(1, 2)),))
        assert haar_coefficient(ps, make_box((1, 0), (1, 0))) == F(1, 256)

    def test_point_below_box(self):
        # point entirely below the box in one coordinate: counting term zero
        ps = PointSet(1, ((F(1, 16),),))
        assert haar_coefficient(ps, make_box((1, 1))) == \
            haar_coefficient(PointSet(1, ((F(1, 32),),)), make_box((1, 1)))

    def _quad_oracle(self, ps, box):
        total = float(ps.size)
        for j in box.intervals:
            lo, hi, mid = float(j.left), float(j.right), float(j.mid)
            val, _ = integrate.quad(
                lambda x: x * (0 if x < lo or x >= hi else (-1 if x < mid else 1)),
                0, 1, points=[lo, mid, hi], limit=200)
            total *= val
        for p in ps.points:
            prod = 1.0
            for c, j in zip(p, box.intervals):
                lo, hi, mid = float(j.left), float(j.right), float(j.mid)
                val, _ = integrate.quad(
                    lambda x, c=float(c): (x > c) * (
                        0 if x < lo or x >= hi else (-1 if x < mid else 1)),
                    0, 1, points=[lo, mid, hi, float(c)], limit=200)
                prod *= val
            total -= prod
        return total

    def test_quadrature_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            d = int(rng.integers(1, 4))
            ps = generate("random", 5, d, seed=int(rng.integers(10 ** 6)))
            shape = tuple(int(rng.integers(0, 3)) for _ in range(d))
            offsets = tuple(int(rng.integers(0, 1 << k)) for k in shape)
            box = make_box(*zip(shape, offsets))
            exact = float(haar_coefficient(ps, box))
            assert abs(exact - self._quad_oracle(ps, box)) < 1e-10


def test_bessel_monotone_and_bounded():
    ps = generate("random", 6, 2, seed=21)
    l2sq = l2_discrepancy_sq_exact(ps)
    prev = Fraction(0)
    for max_level in range(4):
        total = Fraction(0)
        for k1 in range(max_level + 1):
            for k2 in range(max_level + 1):
                for box in boxes_of_shape((k1, k2)):
                    c = haar_coefficient(ps, box)
                    total += c * c / box.volume
        assert total >= prev
        assert total <= l2sq
        prev = total


def test_empty_box_count_net_property():
    # 2D van der Corput with N = 2^m is a digital net: every shape of
    # volume 2^-m has all boxes occupied
    m = 4
    ps = generate("vanDerCorput", 2 ** m, 2)
    for k in range(m + 1):
        assert empty_box_count(ps, (k, m - k)) == 0
    # at volume 2^-(m+2), exactly 3/4 of the boxes are empty
    for k in range(m + 3):
        assert empty_box_count(ps, (k, m + 2 - k)) == 3 * 2 ** m
