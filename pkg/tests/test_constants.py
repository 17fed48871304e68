import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import lambertw as scipy_lambertw

from discrepancy_lab.constants import (
    ALPHA_OPT,
    EPSILON_MAX,
    ETA_MAX,
    binomial_shift_check,
    compositions,
    epsilon_tau,
    eta_bound,
    geometric_tail_check,
    lambert_gain_report,
    lambert_w0,
    lemma5_verify,
    optimize_alpha,
    stirling2,
    stirling2_bound_ratio,
    sum_chain_report,
    validate_parameters,
)
from discrepancy_lab.errors import BudgetExceeded, DomainError, ParameterDomain


class TestLambertW:
    def test_fixed_points(self):
        assert lambert_w0(0.0) == 0.0
        assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-14)

    def test_roundtrip_z5(self):
        w = lambert_w0(5.0)
        assert abs(w * math.exp(w) - 5.0) <= 1e-13 * 5.0

    def test_domain(self):
        with pytest.raises(DomainError):
            lambert_w0(-1.0)

    def test_roundtrip_sweep(self):
        # 10^4 log-spaced points across the domain
        zs = np.concatenate([
            np.array([-math.exp(-1) + 1e-6, -0.25, -0.1, -1e-8]),
            np.geomspace(1e-8, 1e6, 10_000),
        ])
        for z in zs:
            w = lambert_w0(float(z))
            assert abs(w * math.exp(w) - z) <= 1e-13 * max(1.0, abs(z))

    def test_against_scipy(self):
        for z in [-0.3, -0.05, 0.1, 1.0, 7.5, 123.0, 1e5]:
            assert lambert_w0(z) == pytest.approx(
                float(scipy_lambertw(z).real), rel=1e-12)


class TestLemma5:
    def test_tight_case(self):
        rec = lemma5_verify(4, 2, 1)
        assert rec["max_ratio"] == 1
        assert rec["argmax"] == (2, 2)

    def test_k0_case(self):
        rec = lemma5_verify(4, 2, 0)
        # LHS = 2^4 * 2^4 = 256 equals the (v/l)^{2v} bound
        assert rec["bound"] == 256
        assert rec["max_ratio"] == 1

    def test_composition_enumeration(self):
        assert sorted(compositions(8, 3, 2)) == sorted(
            set(itertools.permutations((2, 2, 4))) | {(2, 3, 3), (3, 2, 3), (3, 3, 2)})

    def test_max_ratio_bounded_by_golden(self, golden):
        cap = Fraction(golden["lemma5"]["max_ratio"])
        worst = Fraction(0)
        for v in range(4, 17):
            for l in range(1, v // 2 + 1):
                for k in range(l + 1):
                    worst = max(worst, lemma5_verify(v, l, k)["max_ratio"])
        assert worst == cap  # the sweep is deterministic; the cap is its max

    def test_stationary_point_satisfies_equations(self):
        rec = lemma5_verify(10, 3, 2)
        st = rec["stationary"]
        lam = st["lambda"]
        w = lambert_w0(2.0 * math.exp(1.0 - lam))
        for x in st["parts_tree"]:
            assert x == pytest.approx(2.0 / w, rel=1e-9)
        for x in st["parts_rest"]:
            assert x == pytest.approx(math.exp(lam / 2.0 - 1.0), rel=1e-9)
        assert sum(st["parts_tree"]) + sum(st["parts_rest"]) == pytest.approx(10, rel=1e-9)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            lemma5_verify(24, 2, 1)

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            lemma5_verify(8, 5, 1)  # l > v/2


class TestEpsilonTau:
    def test_small_alpha_small_value(self):
        assert epsilon_tau(1e-9) < 1e-9

    def test_optimum_closed_form(self):
        assert epsilon_tau(ALPHA_OPT) == pytest.approx(EPSILON_MAX, abs=1e-15)
        assert EPSILON_MAX == pytest.approx(0.0694293809811805, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            epsilon_tau(0.0)
        with pytest.raises(DomainError):
            epsilon_tau(0.5)

    def test_grid_search_locates_optimum(self):
        opt = optimize_alpha(1e-5)
        assert abs(opt.alpha_opt - ALPHA_OPT) < 1e-4
        assert opt.epsilon_max <= EPSILON_MAX + 1e-15
        assert opt.active_terms == (1, 3)

    def test_continuity_sample(self):
        alphas = np.linspace(1e-6, 0.5 - 1e-6, 2000)
        vals = [epsilon_tau(float(a)) for a in alphas]
        diffs = np.abs(np.diff(vals))
        assert diffs.max() < 1e-2  # no jumps at the sampling scale


class TestEta:
    def test_identity(self):
        rec = eta_bound()
        assert rec["equal"]
        assert abs(rec["eta_closed"] - rec["eta_from_eps"]) <= 1e-15 * rec["eta_closed"]

    def test_value(self):
        assert ETA_MAX == pytest.approx(0.017357, abs=5e-7)

    def test_quarter_relation(self):
        assert eta_bound()["eta_from_eps"] == pytest.approx(
            epsilon_tau(ALPHA_OPT) / 4.0, rel=1e-14)


class TestStirling:
    def brute_force(self, v, l):
        count = 0
        for labels in itertools.product(range(l), repeat=v):
            if len(set(labels)) == l:
                count += 1
        return count // math.factorial(l)

    def test_s42(self):
        assert stirling2(4, 2) == 7 == self.brute_force(4, 2)

    def test_edges(self):
        for v in range(1, 10):
            assert stirling2(v, 1) == 1
            assert stirling2(v, v) == 1

    def test_recurrence(self):
        for v in range(2, 26):
            for l in range(1, v + 1):
                assert stirling2(v, l) == l * stirling2(v - 1, l) + stirling2(v - 1, l - 1)

    def test_bound(self, golden):
        c = golden["stirling_bound_c"]
        assert stirling2_bound_ratio(25) <= c


class TestSumChain:
    def test_single_summand_formula(self):
        # v=4, alpha small enough that only l=1 contributes to sum1
        rec = sum_chain_report([4], 64, 0.26, 2)[0]
        v, n = 4, 64
        expected = math.comb(v, 1) * 1 ** (v / 2 + 1) * v ** (v - 2) * n ** (-v / 2 + 1)
        assert rec["sum1"] == pytest.approx(expected, rel=1e-12)

    def test_ratios_below_golden(self, golden):
        recs = sum_chain_report(list(range(4, 21)), 64, ALPHA_OPT, 2)
        cap1 = golden["sumchain"]["max_ratio1"]
        cap2 = golden["sumchain"]["max_ratio2"]
        assert max(r["ratio1"] for r in recs) <= cap1 * (1 + 1e-12)
        assert max(r["ratio2"] for r in recs) <= cap2 * (1 + 1e-12)

    def test_geometric_tail(self):
        for v in (4, 8, 12):
            rec = geometric_tail_check(v, 64, ALPHA_OPT)
            assert rec["premise"] and rec["holds"]

    def test_binomial_shift_exact(self):
        # integer shifts only; the clean identity always holds and the
        # Stirling-corrected bound is exact
        for v in range(4, 21):
            for m in range(1, v // 2):
                rec = binomial_shift_check(v, m)
                assert rec["identity_holds"]
                assert rec["corrected_holds"]
                assert rec["raw_max_ratio"] <= rec["stirling_factor"]


class TestValidateParameters:
    def test_b_quarter_rejected(self):
        with pytest.raises(ParameterDomain):
            validate_parameters(256, 0.05, 1.0, 0.25)

    def test_q_before_rounding(self):
        ps = validate_parameters(256, 0.05, 1.0, 0.2)
        assert ps.q_real == pytest.approx(1.3195, abs=1e-4)
        assert ps.q == 1

    def test_regime_flags(self):
        ps = validate_parameters(256, 0.069, 1.0, 0.2)
        assert ps.regime_tail_l1
        ps2 = validate_parameters(256, 0.0695, 1.0, 0.2)
        assert not ps2.regime_tail_l1

    def test_rho_relations(self):
        ps = validate_parameters(64, 0.2, 1.5, 0.24)
        assert ps.rho == pytest.approx(math.sqrt(ps.q) / ps.n, rel=1e-15)
        assert ps.rho_tilde == pytest.approx(
            ps.a * ps.q ** (ps.b - 0.5) * ps.rho, rel=1e-15)


def test_lambert_gain_report_smoke():
    rows = lambert_gain_report([1, 2], [4, 8, 16])
    assert all(row["w"] > 0 for row in rows)
    # W(z0) > 79/20 holds on this grid for v >= 8 but is reported, not forced
    assert any(row["w_exceeds_79_20"] for row in rows)
