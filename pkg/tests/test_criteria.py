import math

import numpy as np
import pytest

from weightlab import (
    DyadicProfile,
    SampledFunction,
    ThresholdPolicy,
    ZeroSequence,
    criteria2_report,
    integral_cross_check,
    log_grid,
    loglog_series,
    msnq_omega_conditions,
    msnq_series,
    nqa_series,
    parse_sequence_spec,
    permanence_checks,
    positive_part_diff,
    profile_log_omega,
    profile_n,
    WeightEvaluator,
)
from weightlab.criteria import VERDICT_CONV, VERDICT_DIV, VERDICT_INC, profile_from_callable


def plain_profile(values, j_min=1, increasing=True):
    return DyadicProfile(
        j_min=j_min, values=np.array(values, float), from_increasing=increasing
    )


class TestNqaSeries:
    def test_linear_profile_sums_to_two(self):
        # a_j = j: sum j/2^j = 2; family tail certifies
        geo = parse_sequence_spec("geometric:r=2")
        p = profile_n(geo, 40)
        d = nqa_series(p)
        assert d.verdict == VERDICT_CONV
        assert d.partial_sums[-1] <= 2.0 <= d.total_upper
        assert d.partial_sums[-1] == pytest.approx(2.0, abs=1e-9)

    def test_constant_terms_divergent_trend(self):
        # a_j = 2^j gives terms identically 1
        p = profile_from_callable(lambda t: t, 1, 40, from_increasing=True)
        d = nqa_series(p)
        assert d.verdict == VERDICT_DIV
        assert d.partial_sums[-1] > d.threshold_used > 0

    def test_zero_profile_certified_with_tail(self):
        p = plain_profile([0.0] * 10)
        d = nqa_series(p, tail=0.0)
        assert d.verdict == VERDICT_CONV
        assert np.all(d.partial_sums == 0.0)

    def test_partial_sums_nondecreasing(self):
        p = profile_n(parse_sequence_spec("powlog:a=1,b=2"), 30)
        for series in (nqa_series(p), msnq_series(p), loglog_series(p)):
            assert np.all(np.diff(series.partial_sums) >= -1e-15)


class TestMsnqSeries:
    def test_powlog_failing_family(self):
        p = profile_n(parse_sequence_spec("powlog:a=1,b=2"), 60)
        d = msnq_series(p)
        assert d.verdict == VERDICT_DIV
        assert d.certificate is not None

    def test_powlog_a3_certified(self):
        p = profile_n(parse_sequence_spec("powlog:a=3,b=0"), 40)
        d = msnq_series(p)
        assert d.verdict == VERDICT_CONV
        assert d.tail_bound is not None and math.isfinite(d.tail_bound)

    def test_zero_profile(self):
        p = plain_profile([0.0] * 8)
        d = msnq_series(p, tail=0.0)
        assert d.verdict == VERDICT_CONV
        assert np.all(d.partial_sums == 0.0)

    def test_onset_skips_oversized_values(self):
        # a_j = 2^(j+2) exceeds 2^j everywhere: no onset, inconclusive
        p = profile_from_callable(lambda t: 4.0 * t, 1, 12, from_increasing=True)
        d = msnq_series(p)
        assert d.verdict == VERDICT_INC
        assert d.skipped_terms > 0

    def test_needs_increasing_flag(self):
        p = DyadicProfile(j_min=1, values=np.array([1.0, 2.0]), from_increasing=False)
        with pytest.raises(ValueError):
            msnq_series(p)


class TestLogLogSeries:
    def test_linear_profile_certified(self):
        geo = parse_sequence_spec("geometric:r=2")
        d = loglog_series(profile_n(geo, 40))
        assert d.verdict == VERDICT_CONV
        oracle = sum(j * math.log(j) / 2.0**j for j in range(2, 41))
        assert d.partial_sums[-1] == pytest.approx(oracle, rel=1e-12)

    def test_constant_terms_divergent(self):
        # a_j = 2^j/ln j: terms (1/ln j) ln j = 1
        p = profile_from_callable(
            lambda t: t / math.log(math.log2(t) + 1e-9) if t >= 4 else 0.0,
            2, 44, from_increasing=True,
        )
        d = loglog_series(p)
        assert d.verdict == VERDICT_DIV

    def test_empty_profile_inconclusive(self):
        d = loglog_series(DyadicProfile(j_min=1, values=np.array([])))
        assert d.verdict == VERDICT_INC


class TestPositivePartDiff:
    def test_increasing(self):
        p = plain_profile([1, 2, 3, 4])
        b = positive_part_diff(p)
        assert list(b.values) == [1.0, 1.0, 1.0]

    def test_decreasing_input(self):
        p = plain_profile([5, 1, 1], increasing=False)
        assert list(positive_part_diff(p).values) == [0.0, 0.0]

    def test_sum_comparison_bound(self):
        # sum (a_{j+1}-a_j)^+/2^j <= 2 sum a_j/2^j
        rng = np.random.default_rng(3)
        vals = np.cumsum(rng.uniform(0, 5, size=30))
        p = plain_profile(vals)
        b = positive_part_diff(p)
        lhs = sum(v / 2.0**j for j, v in zip(b.index_range(), b.values))
        rhs = sum(v / 2.0**j for j, v in zip(p.index_range(), p.values))
        assert lhs <= 2.0 * rhs + 1e-12

    def test_short_profile_errors(self):
        with pytest.raises(ValueError):
            positive_part_diff(plain_profile([1.0]))

    def test_matches_dyadic_multiplicities(self):
        from weightlab import dyadic_multiplicities

        seq = parse_sequence_spec("powlog:a=1,b=2")
        p = profile_n(seq, 30)
        b = positive_part_diff(p)
        mult = dyadic_multiplicities(seq, 30)
        # b_j = n(2^{j+1}) - n(2^j) = multiplicity at level j+1
        assert list(b.values) == [float(v) for v in mult.n[1:30]]


class TestOmegaSix:
    def test_geometric_all_certified_and_equivalent(self):
        rep = msnq_omega_conditions(parse_sequence_spec("geometric:r=2"), 30)
        verdicts = {k: d.verdict for k, d in rep["diagnostics"].items()}
        assert set(verdicts.values()) == {VERDICT_CONV}
        assert rep["verdicts_agree_all_six"]

    def test_powlog_failing_family_agrees(self):
        rep = msnq_omega_conditions(parse_sequence_spec("powlog:a=1,b=2"), 20)
        assert rep["diagnostics"]["i"].verdict == VERDICT_DIV
        assert rep["verdicts_agree_i_to_iv"]

    def test_powlog_a3_msnq_certified(self):
        rep = msnq_omega_conditions(parse_sequence_spec("powlog:a=3,b=0"), 20)
        assert rep["diagnostics"]["i"].verdict == VERDICT_CONV
        assert rep["verdicts_agree_i_to_iv"]


class TestCriteria2:
    def test_geometric_all_certified(self):
        rep = criteria2_report(parse_sequence_spec("geometric:r=2"), 2000)
        assert all(d.verdict == VERDICT_CONV for d in rep["diagnostics"].values())
        assert rep["verdicts_agree"]

    def test_powlog_loglog_divergent(self):
        rep = criteria2_report(parse_sequence_spec("powlog:a=1,b=2"), 20_000)
        assert rep["diagnostics"]["loglog_j"].verdict == VERDICT_DIV

    def test_explicit_three_zeros_finite(self):
        rep = criteria2_report(parse_sequence_spec("explicit:[0.9,2,4]"), 10)
        assert all(d.verdict == VERDICT_CONV for d in rep["diagnostics"].values())


class TestIntegralCrossCheck:
    def test_constant_closed_form(self):
        grid = np.linspace(1.0, 100.0, 4000)
        f = SampledFunction(grid, np.full_like(grid, 3.0))
        rep = integral_cross_check(f, "nqa")
        # trapezoid slightly overestimates the convex integrand
        assert rep["integral"] == pytest.approx(3.0 * (1 - 1 / 100.0), rel=1e-3)

    def test_log_weight_within_factor_four(self):
        seq = parse_sequence_spec("geometric:r=2")
        w = WeightEvaluator(seq)
        grid = log_grid(1.0, 2.0**20, 3000)
        vals = np.array([w.eval_log_abs_omega(float(t))[0] for t in grid])
        f = SampledFunction(grid, np.maximum(vals, 1e-12))
        for kind in ("nqa", "msnq", "loglog"):
            rep = integral_cross_check(f, kind)
            assert rep["grid_ok"], (kind, rep)

    def test_beta_trace_certified(self):
        # beta(t) = t/(ln t)^2 on [e^2, T]: admissible; tail supplied
        grid = log_grid(math.e**2, 2.0**24, 2000)
        f = SampledFunction(grid, grid / np.log(grid) ** 2)
        rep = integral_cross_check(f, "nqa", tail=1.0 / (math.log(2.0) ** 2 * 24))
        assert rep["verdict"] == VERDICT_CONV
        assert rep["grid_ok"]

    def test_rejects_nonpositive(self):
        grid = np.linspace(1.0, 10.0, 50)
        with pytest.raises(ValueError):
            integral_cross_check(SampledFunction(grid, np.zeros_like(grid)), "nqa")

    def test_verdict_matches_dyadic_series(self):
        # with the family tail supplied, the quadrature verdict agrees with
        # the dyadic diagnostic on the same profile
        seq = parse_sequence_spec("geometric:r=2")
        p = profile_log_omega(seq, 20)
        dyadic = nqa_series(p)
        w = WeightEvaluator(seq)
        grid = log_grid(1.0, 2.0**20, 2000)
        vals = np.array([w.eval_log_abs_omega(float(t))[0] for t in grid])
        f = SampledFunction(grid, np.maximum(vals, 1e-12))
        rep = integral_cross_check(f, "nqa", tail=p.certs.nqa_tail(20))
        assert rep["verdict"] == dyadic.verdict == VERDICT_CONV
        assert rep["grid_ok"]


class TestPermanence:
    def test_certified_family_stability(self):
        seq = parse_sequence_spec("geometric:r=2")
        p = profile_n(seq, 40)
        q = profile_n(seq, 40).scaled(0.5)
        rep = permanence_checks(p, c=2.0, L=2.0, q=q)
        assert rep["passed"], rep["checks"]
        assert rep["base"].verdict == VERDICT_CONV
        assert rep["scaled"].verdict == VERDICT_CONV
        assert rep["summed"].verdict == VERDICT_CONV
        assert rep["dominated"].verdict == VERDICT_CONV

    def test_divergent_preserved_under_halving(self):
        seq = parse_sequence_spec("powlog:a=1,b=2")
        p = profile_n(seq, 50)
        rep = permanence_checks(p, c=0.5, L=2.0, q=p.scaled(0.25))
        assert rep["base"].verdict == VERDICT_DIV
        assert rep["scaled"].verdict == VERDICT_DIV

    def test_verdict_monotone_in_length(self):
        # enlarging J never downgrades convergent-certified
        seq = parse_sequence_spec("geometric:r=2")
        for J in (10, 20, 40):
            assert msnq_series(profile_n(seq, J)).verdict == VERDICT_CONV
