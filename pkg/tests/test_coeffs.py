import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weightlab import (
    ExplicitFamily,
    IdentityInapplicableError,
    WeightEvaluator,
    ZeroSequence,
    coeff_table,
    coeff_table_log,
    inf_sup_identity,
    log_convexity_check,
    parse_sequence_spec,
    sandwich_check,
    sup_poly,
)
from weightlab.sampling import log_grid


def exact_squared_coeffs(zeros, n, K):
    """Fraction oracle: u^k coefficients of prod (1 + u/t^2)^n."""
    poly = [Fraction(1)]
    for t in zeros:
        c = Fraction(1) / (Fraction(t) ** 2)
        for _ in range(n):
            new = poly + [Fraction(0)]
            for p in range(len(poly), 0, -1):
                if p <= K:
                    new[p] += poly[p - 1] * c
            poly = new[: K + 1]
    poly += [Fraction(0)] * (K + 1 - len(poly))
    return poly


class TestCoeffTable:
    def test_single_zero(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 1, 3)
        assert [float(a) for a in tab.exact_a] == [1.0, 1.0, 0.0, 0.0]
        assert tab.trunc_error_rel == 0.0

    def test_two_zeros_closed_form(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0, 2.0]), j_cut=5), 1, 2)
        vals = [float(a) for a in tab.exact_a]
        assert vals[0] == 1.0
        assert vals[1] == pytest.approx(math.sqrt(1.25), abs=1e-15)
        assert vals[2] == pytest.approx(0.5, abs=1e-15)
        # log-convexity at k=1: a_1^2 = 1.25 >= a_0 a_2 = 0.5
        assert vals[1] ** 2 >= vals[0] * vals[2]

    def test_multiplicity_power_identity(self):
        ta = coeff_table(ZeroSequence(ExplicitFamily([1.0, 1.0]), j_cut=5), 1, 2)
        tb = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 2, 2)
        assert [float(x) for x in ta.exact_a] == [float(x) for x in tb.exact_a]

    @given(
        st.lists(
            st.integers(min_value=1, max_value=6), min_size=1, max_size=5
        ).map(sorted),
        st.integers(min_value=1, max_value=3),
    )
    @settings(max_examples=30, deadline=None)
    def test_against_fraction_oracle(self, zeros, n):
        K = 6
        seq = ZeroSequence(ExplicitFamily([float(z) for z in zeros]), j_cut=10)
        tab = coeff_table(seq, n, K)
        oracle = exact_squared_coeffs(zeros, n, K)
        for k in range(K + 1):
            # compare squared mpf values against the exact rational
            got = (tab.exact_a[k] ** 2 - Fraction(oracle[k])) if oracle[k] else tab.exact_a[k]
            want = float(oracle[k])
            assert float(tab.exact_a[k]) ** 2 == pytest.approx(want, rel=1e-13, abs=1e-300)

    @pytest.mark.parametrize("spec", ["geometric:r=2", "power:a=2", "powlog:a=1,b=2"])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_log_convexity_families(self, spec, n):
        tab = coeff_table(parse_sequence_spec(spec), n, 40)
        assert log_convexity_check(tab).passed

    def test_log_table_matches_exact(self):
        seq = parse_sequence_spec("geometric:r=2")
        exact = coeff_table(seq, 2, 30)
        logtab = coeff_table_log(seq, 2, 30)
        np.testing.assert_allclose(exact.log_a, logtab.log_a, rtol=0, atol=1e-9)


class TestSupPoly:
    def test_simple_table(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 1, 3)
        r = sup_poly(tab, 2.0)
        assert r.value == pytest.approx(2.0) and r.argmax == 1

    def test_small_t_keeps_constant_term(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 1, 3)
        r = sup_poly(tab, 1e-300)
        assert r.value == pytest.approx(1.0) and r.argmax == 0

    def test_three_term(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0, 2.0]), j_cut=5), 1, 2)
        r = sup_poly(tab, 1.0)
        assert r.value == pytest.approx(math.sqrt(1.25)) and r.argmax == 1

    def test_domain(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 1, 3)
        with pytest.raises(ValueError):
            sup_poly(tab, 0.0)


class TestInfSup:
    def test_degenerate_table_errors(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0]), j_cut=5), 1, 3)
        with pytest.raises(IdentityInapplicableError):
            inf_sup_identity(tab, 2)  # a_2 = 0
        with pytest.raises(IdentityInapplicableError):
            inf_sup_identity(tab, 5)  # outside [1, K-1]

    def test_two_zero_table(self):
        tab = coeff_table(ZeroSequence(ExplicitFamily([1.0, 2.0]), j_cut=5), 1, 2)
        r = inf_sup_identity(tab, 1)
        assert r.rel_error < 1e-10

    def test_geometric_high_resolution(self):
        tab = coeff_table(parse_sequence_spec("geometric:r=2"), 1, 8)
        for k in range(1, 7):
            r = inf_sup_identity(tab, k)
            assert r.rel_error < 1e-4, (k, r.rel_error)


class TestSandwich:
    @pytest.mark.parametrize("spec", ["geometric:r=2", "power:a=2"])
    def test_sandwich_holds(self, spec):
        seq = parse_sequence_spec(spec)
        w = WeightEvaluator(seq)
        tab = coeff_table(seq, 1, 40)
        cache = {}
        for t in log_grid(0.1, 1e4, 12):
            rep = sandwich_check(seq, 1, float(t), w, tab, big_table_cache=cache)
            assert rep.passed, (spec, t, rep.details)
