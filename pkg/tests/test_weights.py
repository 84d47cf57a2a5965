import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardycert import weights as W
from hardycert.errors import DivergenceError, DomainError, OutOfRangeError

PDR = W.PowerDiffRemainder


class TestLambdaAt:
    def test_log_convention_at_zero(self):
        assert W.lambda_at(PDR(0), 1) == pytest.approx(math.log(2), rel=1e-15)

    def test_unit_weights(self):
        assert W.lambda_at(PDR(1), 7) == pytest.approx(1.0, rel=1e-15)

    def test_head_power_diff(self):
        assert W.lambda_at(W.HeadPowerDiff(2), 3) == pytest.approx(5.0, rel=1e-15)
        assert W.lambda_at(W.HeadPowerDiff(0.5), 1) == 1.0

    @pytest.mark.parametrize("r", [-3, -1, -0.5, 0, 0.5, 1, 2, 3])
    def test_positive(self, r):
        lam = W.lambdas(PDR(r), np.arange(1, 1001))
        assert np.all(lam > 0)

    def test_tabulated_out_of_range(self):
        fam = W.Tabulated((1.0, 2.0))
        assert W.lambda_at(fam, 2) == 2.0
        with pytest.raises(OutOfRangeError):
            W.lambda_at(fam, 3)

    def test_tabulated_tail_rule(self):
        fam = W.Tabulated((1.0, 2.0), PDR(-1))
        assert W.lambda_at(fam, 3) == pytest.approx(1 / 12)

    def test_index_starts_at_one(self):
        with pytest.raises(DomainError):
            W.lambda_at(PDR(1), 0)

    def test_continuity_at_zero(self):
        k = np.arange(1, 1001)
        gap = np.abs(W.lambdas(PDR(1e-8), k) - np.log((k + 1) / k))
        assert gap.max() <= 1e-7


class TestSums:
    def test_telescoping_tail(self):
        assert W.tail_sum(PDR(-1), 4) == pytest.approx(0.25, rel=1e-15)

    def test_basel_tail(self):
        est = W.tail_estimate(W.PurePower(-2), 1)
        assert abs(est.value - math.pi**2 / 6) <= max(est.width, 1e-13)
        assert est.width > 0

    @pytest.mark.parametrize("fam", [PDR(1), PDR(0), W.HeadPowerDiff(1), W.PurePower(-1)])
    def test_divergent(self, fam):
        assert not W.is_tail_summable(fam)
        with pytest.raises(DivergenceError):
            W.tail_sum(fam, 1)

    def test_head_sums(self):
        assert W.head_sum(W.HeadPowerDiff(2), 5) == 25
        assert W.head_sum(W.PurePower(1), 4) == 10
        assert W.head_sum(W.PurePower(2), 2) == 5

    @pytest.mark.parametrize("r", [-3, -2, -1, -0.5, -1e-3, 0, 0.5, 1, 2, 3])
    def test_telescoping_partial_sums(self, r):
        lam = W.lambdas(PDR(r), np.arange(1, 10**4 + 1), W.LD)
        for n, M in [(1, 10), (3, 500), (100, 10**4)]:
            s = float(np.sum(lam[n - 1:M]))
            exact = math.log((M + 1) / n) if r == 0 else ((M + 1) ** r - n**r) / r
            assert s == pytest.approx(exact, rel=1e-12)

    def test_tail_sums_vector_matches_scalar(self):
        fam = W.PurePower(-1.5)
        vec = W.tail_sums(fam, 50)
        for n in (1, 10, 50):
            assert float(vec[n - 1]) == pytest.approx(W.tail_sum(fam, n), rel=1e-12)

    def test_tabulated_finite_support(self):
        fam = W.Tabulated((1.0, 2.0, 3.0))
        assert W.tail_sum(fam, 2) == 5.0


class TestRatio:
    def test_zero_index(self):
        for fam in (PDR(-1), W.PurePower(-3), W.Tabulated((1.0,))):
            assert W.lambda_ratio(fam, 0) == 1

    def test_pdr_ratio(self):
        assert W.lambda_ratio(PDR(-1), 3) == pytest.approx(4.0, rel=1e-14)

    def test_basel_ratio(self):
        assert W.lambda_ratio(W.PurePower(-2), 1) == pytest.approx(math.pi**2 / 6, rel=1e-9)


class TestConditions:
    def test_eq66_exact_family(self):
        rep = W.check_l_condition(PDR(-1), "EQ66", -1, n_max=100)
        assert rep.verdict == "HOLDS_UP_TO_N_MAX"
        assert np.max(np.abs(rep.slack)) < 1e-12

    def test_eq66_half(self):
        rep = W.check_l_condition(PDR(-0.5), "EQ66", -2, n_max=10**4)
        assert rep.holds

    def test_eq66_reversed_pure_power(self):
        rep = W.check_l_condition(W.PurePower(-2), "EQ66_REVERSED", -1, n_max=10**4)
        assert rep.holds

    def test_violation_reported(self):
        rep = W.check_l_condition(PDR(-1), "EQ66", -1.5, n_max=10)
        assert rep.verdict == "VIOLATED_AT(1)"

    def test_eq66_prime(self):
        rep = W.check_l_condition(PDR(-1), "EQ66_PRIME", -1, p=2, n_max=100)
        n = np.arange(1, 101)
        assert np.allclose(rep.slack, 1 / (4 * n + 6), rtol=1e-9)

    def test_eq66_prime_domain(self):
        with pytest.raises(DomainError):
            W.check_l_condition(PDR(-1), "EQ66_PRIME", 5, p=1, n_max=10)

    def test_m_diff(self):
        rep = W.carleman_m(PDR(-1), "M_DIFF", n_max=10**4)
        assert rep.parameter == pytest.approx(-1, abs=1e-12)
        assert rep.e_value == pytest.approx(math.exp(-1), rel=1e-12)

    def test_m_log_below_m_diff(self):
        for fam in (PDR(-1), PDR(-0.5), W.PurePower(-2), W.PurePower(-3)):
            log_m = W.carleman_m(fam, "M_LOG", n_max=2000).parameter
            diff_m = W.carleman_m(fam, "M_DIFF", n_max=2000).parameter
            assert log_m <= diff_m + 1e-12

    def test_m_avg(self):
        rep = W.carleman_m(PDR(-1), "M_AVG", n_max=10**3, inner_cutoff=10**5)
        assert rep.parameter == pytest.approx(-1, abs=1e-9)
        assert "cut at" in rep.tail_note

    @pytest.mark.parametrize("fam", [PDR(-1), PDR(-0.5), W.PurePower(-2)])
    def test_m_avg_below_m_diff(self, fam):
        # both suprema over the same range of differences
        avg = W.carleman_m(fam, "M_AVG", n_max=500, inner_cutoff=5000).parameter
        diff = W.carleman_m(fam, "M_DIFF", n_max=5000).parameter
        assert avg <= diff + 1e-9 * (1 + abs(diff))


class TestLoad:
    def test_roundtrip(self, tmp_path):
        f = tmp_path / "w.txt"
        f.write_text("# index value\n1 0.5\n2 0.25\n3 0.125\n")
        fam = W.load_tabulated(f)
        assert fam.values == (0.5, 0.25, 0.125)

    def test_gap_rejected(self, tmp_path):
        f = tmp_path / "w.txt"
        f.write_text("1 0.5\n3 0.25\n")
        with pytest.raises(ValueError):
            W.load_tabulated(f)


@settings(max_examples=40, deadline=None)
@given(r=st.floats(-3, 3, allow_nan=False), k=st.integers(1, 10**6))
def test_pdr_lambda_matches_definition(r, k):
    lam = W.lambda_at(PDR(r), k)
    if abs(r) > 1e-3:
        direct = ((k + 1) ** r - k**r) / r
        assert lam == pytest.approx(direct, rel=1e-6)
    assert lam > 0
