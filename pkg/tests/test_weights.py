import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from weightlab import (
    WeightEvaluator,
    ZeroSequence,
    ExplicitFamily,
    big_N,
    distribution_n,
    modulus_bound_check,
    parse_sequence_spec,
    scaling_inequality_check,
    strong_nqa_tail_check,
)

NEG_INF = float("-inf")


def single_zero(t1=1.0):
    return ZeroSequence(family=ExplicitFamily([t1]), j_cut=10)


class TestRealEvaluation:
    def test_zero_argument(self):
        w = WeightEvaluator(single_zero())
        assert w.eval_log_abs_omega(0.0) == (0.0, 0.0)

    def test_single_zero_closed_form(self):
        w = WeightEvaluator(single_zero())
        v, err = w.eval_log_abs_omega(1.0)
        assert v == pytest.approx(0.5 * math.log(2.0), abs=1e-15)
        assert err == 0.0

    def test_geometric_against_high_precision_oracle(self):
        # direct summation oracle at 60-digit precision, zeros 2^j, j <= 40
        seq = parse_sequence_spec("geometric:r=2")
        w = WeightEvaluator(seq, tol=1e-15)
        v, err = w.eval_log_abs_omega(4.0)
        with mp.workprec(200):
            oracle = sum(mp.log(1 + mpf(16) / mpf(4) ** j) for j in range(1, 41)) / 2
        assert v <= float(oracle) + 1e-13
        assert float(oracle) <= v + err + 1e-13
        assert v == pytest.approx(float(oracle), abs=1e-10)

    def test_truncation_is_one_sided(self):
        seq = parse_sequence_spec("powlog:a=1,b=2")
        w_loose = WeightEvaluator(ZeroSequence(seq.family, j_cut=2000), tol=1e-12)
        w_tight = WeightEvaluator(ZeroSequence(seq.family, j_cut=200_000), tol=1e-12)
        for t in (7.0, 123.0, 4096.0):
            v_lo, err_lo = w_loose.eval_log_abs_omega(t)
            v_hi, _ = w_tight.eval_log_abs_omega(t)
            assert v_lo <= v_hi <= v_lo + err_lo

    def test_domain_errors(self):
        w = WeightEvaluator(single_zero())
        with pytest.raises(ValueError):
            w.eval_log_abs_omega(math.nan)
        with pytest.raises(ValueError):
            w.eval_log_abs_omega(-1.0)

    @given(st.floats(min_value=0.01, max_value=1e5), st.floats(min_value=1.01, max_value=3.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_t(self, t, factor):
        w = WeightEvaluator(parse_sequence_spec("geometric:r=2"))
        v1, _ = w.eval_log_abs_omega(t)
        v2, _ = w.eval_log_abs_omega(t * factor)
        assert v2 >= v1 - 1e-12


class TestComplexEvaluation:
    def test_zero_argument(self):
        w = WeightEvaluator(single_zero())
        assert w.eval_log_abs_omega_complex(0j) == (0.0, 0.0)

    def test_exact_zero_gives_sentinel(self):
        w = WeightEvaluator(single_zero())
        v, _ = w.eval_log_abs_omega_complex(1j)
        assert v == NEG_INF

    def test_closed_form_one_plus_i(self):
        # |1 + i(1+i)| = |i| = 1, so the log vanishes
        w = WeightEvaluator(single_zero())
        v, err = w.eval_log_abs_omega_complex(1 + 1j)
        assert v == pytest.approx(0.0, abs=1e-15)

    def test_neg_imag_is_linear_product(self):
        w = WeightEvaluator(single_zero())
        v, _ = w.eval_log_omega_neg_imag(3.0)
        assert v == pytest.approx(math.log(4.0), abs=1e-14)

    def test_domain_error(self):
        w = WeightEvaluator(single_zero())
        with pytest.raises(ValueError):
            w.eval_log_abs_omega_complex(complex(math.inf, 0))


class TestDistribution:
    def test_geometric_counts(self):
        seq = parse_sequence_spec("geometric:r=2")
        assert distribution_n(seq, 5.0) == 2
        assert distribution_n(seq, 1.0) == 0

    def test_powlog_enumeration_oracle(self):
        seq = parse_sequence_spec("powlog:a=1,b=2")
        count = sum(1 for j in range(1, 10_000) if seq.term(j) <= 100.0)
        assert distribution_n(seq, 100.0) == count

    def test_domain(self):
        seq = parse_sequence_spec("geometric:r=2")
        with pytest.raises(ValueError):
            distribution_n(seq, 0.0)


class TestBigN:
    def test_below_first_zero(self):
        seq = parse_sequence_spec("geometric:r=2")
        assert big_N(seq, 1.5) == (0.0, 0)

    def test_geometric_at_four(self):
        # max_k 4^k / 2^(k(k+1)/2) = 2, at k = 1 or 2
        seq = parse_sequence_spec("geometric:r=2")
        val, k = big_N(seq, 4.0)
        assert val == pytest.approx(math.log(2.0), abs=1e-14)
        assert k in (1, 2)

    def test_at_first_zero(self):
        seq = parse_sequence_spec("power:a=2")
        val, _ = big_N(seq, seq.term(1))
        assert val == pytest.approx(0.0, abs=1e-14)

    def test_never_exceeds_log_weight(self):
        for spec in ("geometric:r=2", "powlog:a=1,b=2", "power:a=2"):
            seq = parse_sequence_spec(spec)
            w = WeightEvaluator(seq, tol=1e-9)
            for t in (2.0, 17.0, 513.0, 1e5):
                v, err = w.eval_log_abs_omega(t)
                assert big_N(seq, t)[0] <= v + err + 1e-9


class TestScaling:
    def test_equality_at_unit_scale(self):
        w = WeightEvaluator(parse_sequence_spec("geometric:r=2"))
        rep = scaling_inequality_check(w, 1.0, samples=20)
        assert rep.passed
        assert rep.worst_margin == pytest.approx(0.0, abs=1e-12)

    def test_single_zero_closed_form_margin(self):
        # t=1, L=3: ln 10 <= 9 ln 2 with margin 9 ln2 - ln10
        w = WeightEvaluator(single_zero())
        rep = scaling_inequality_check(w, 3.0, samples=3, t_lo=1.0, t_hi=1.0 + 1e-9)
        assert rep.passed
        expected = 9.0 * 0.5 * math.log(2.0) - 0.5 * math.log(10.0)
        assert rep.worst_margin == pytest.approx(expected, rel=1e-6)

    def test_geometric_grid(self):
        w = WeightEvaluator(parse_sequence_spec("geometric:r=2"))
        rep = scaling_inequality_check(w, 2.0, samples=50, t_lo=1.0, t_hi=1e4)
        assert rep.passed

    def test_rejects_small_L(self):
        w = WeightEvaluator(single_zero())
        with pytest.raises(ValueError):
            scaling_inequality_check(w, 0.5)


class TestModulusBound:
    @pytest.mark.parametrize("spec", ["geometric:r=2", "power:a=2", "powlog:a=1,b=2"])
    def test_no_violations(self, spec):
        seq = parse_sequence_spec(spec)
        w = WeightEvaluator(ZeroSequence(seq.family, j_cut=60_000), tol=1e-6)
        rep = modulus_bound_check(w, samples=300, rng_seed=5, radius=1e3)
        assert rep.passed, rep.details


class TestStrongNqaTail:
    def test_geometric_constant_two(self):
        seq = parse_sequence_spec("geometric:r=2")
        c_min, rep = strong_nqa_tail_check(seq, K=64)
        # (t_k/k) sum_{j>=k} 2^-j = 2/k, maximal at k=1
        assert c_min == pytest.approx(2.0, rel=1e-12)
        assert rep.details["certified"]

    def test_powlog_not_certified(self):
        seq = parse_sequence_spec("powlog:a=1,b=2")
        c1, rep1 = strong_nqa_tail_check(seq, K=200)
        c2, rep2 = strong_nqa_tail_check(seq, K=2000)
        assert c2 > c1  # keeps growing
        assert not rep2.details["certified"]

    def test_explicit_three_zeros(self):
        seq = ZeroSequence(family=ExplicitFamily([1.0, 2.0, 4.0]), j_cut=10)
        c_min, rep = strong_nqa_tail_check(seq, K=3)
        brute = max(
            (1.0 / 1) * (1 + 0.5 + 0.25),
            (2.0 / 2) * (0.5 + 0.25),
            (4.0 / 3) * 0.25,
        )
        assert c_min == pytest.approx(brute, rel=1e-12)

    def test_ratio_probe_growth_for_failing_family(self):
        seq = parse_sequence_spec("powlog:a=1,b=2")
        grid = np.array([10.0, 100.0, 1000.0, 10_000.0])
        seq_fast = ZeroSequence(seq.family, j_cut=60_000)
        _, rep = strong_nqa_tail_check(seq_fast, K=100, probe_grid=grid)
        probe = rep.details["ratio_probe"]
        assert probe[-1] > probe[0]  # monotone growth reported, not asserted as limit
