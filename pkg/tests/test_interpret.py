import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logrescale import (NATURAL, DomainError, LogBase, Method, base_quality_scan, crossover,
                        error_curve, exact_percent_change, default_error_curves,
                        generic_base_error, rescaled_error, traditional_error)
from logrescale.interpret import ErrorCurve, Interpretation, golden_section_max


def brute_crossover(p_b, step=1e-7):
    """First sign change of |traditional| - |rescaled| on a dense grid."""
    p = np.arange(step, p_b + step, step)
    gap = np.abs(1 + p - np.exp(p)) - np.abs(1 + p - (1 + p_b) ** (p / p_b))
    i = np.nonzero(np.diff(np.sign(gap)))[0][0]
    return p[i]


class TestExactPercentChange:
    def test_one_unit_base_1_1(self, b11):
        assert exact_percent_change(b11, 1) == pytest.approx(0.10, abs=1e-12)

    def test_two_units_base_1_1(self, b11):
        assert exact_percent_change(b11, 2) == pytest.approx(0.21, abs=1e-12)

    def test_one_unit_natural(self):
        assert exact_percent_change(NATURAL, 1) == pytest.approx(math.e - 1, rel=1e-14)

    @given(st.floats(min_value=-50, max_value=50), st.floats(min_value=-0.9, max_value=5).filter(bool))
    def test_always_above_minus_one(self, units, p):
        assert exact_percent_change(LogBase(p), units) >= -1


class TestTraditionalError:
    @pytest.mark.parametrize("p, expected", [
        (0.1, -0.005170918075647624),
        (0.2, -0.0214027581601699),
        (0.3, -0.04985880757600314),
    ])
    def test_values(self, p, expected):
        assert traditional_error(p) == pytest.approx(expected, rel=1e-12)

    def test_zero(self):
        assert traditional_error(0.0) == 0.0

    @given(st.floats(min_value=-5, max_value=5).filter(lambda p: abs(p) > 1e-6))
    def test_always_negative(self, p):
        assert traditional_error(p) < 0

    def test_magnitude_grows(self):
        ps = np.linspace(0.001, 2, 2000)
        mags = [abs(traditional_error(p)) for p in ps]
        assert all(b > a for a, b in zip(mags, mags[1:]))


class TestRescaledError:
    def test_two_units(self, b11):
        assert rescaled_error(b11, 0.2) == pytest.approx(-0.01, abs=1e-12)

    def test_exact_at_one_unit(self, b11, b14):
        assert rescaled_error(b11, 0.1) == 0.0
        assert rescaled_error(b14, 0.4) == 0.0

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    @pytest.mark.parametrize("p_b", [0.05, 0.1, 0.4])
    def test_integer_multiples(self, k, p_b):
        b = LogBase(p_b)
        assert rescaled_error(b, p_b * k) == pytest.approx((1 + p_b * k) - (1 + p_b) ** k, abs=1e-12)

    def test_dominates_traditional_above_crossover(self, b11):
        for p in np.arange(0.051, 0.5005, 0.001):
            assert abs(rescaled_error(b11, p)) < abs(traditional_error(p))


class TestGenericBaseError:
    def test_e_matches_traditional_exactly(self):
        for p in np.linspace(-1, 1, 101):
            assert generic_base_error(math.e, p) == traditional_error(p)

    def test_values(self):
        assert generic_base_error(math.e, 0.3) == pytest.approx(-0.04986, abs=1e-5)
        v = generic_base_error(2.35, 0.2)
        assert v == pytest.approx(1.2 - 2.35 ** 0.2, rel=1e-15)
        assert v == pytest.approx(0.0136, abs=1e-4)
        assert abs(v) <= 0.014

    def test_zero(self):
        for base in (0.5, 2.35, 10):
            assert generic_base_error(base, 0) == 0.0

    @pytest.mark.parametrize("base", [1.0, 0.0, -2.0, math.inf])
    def test_invalid(self, base):
        with pytest.raises(DomainError):
            generic_base_error(base, 0.1)


class TestErrorCurve:
    def test_traditional_grid(self):
        c = error_curve(Method.traditional(), 0, 0.5, 0.01)
        assert len(c.grid) == 51
        errs = c.errors
        assert all(e <= 0 for e in errs)
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_rescaled_crosses_zero_at_base(self, b11):
        c = error_curve(Method.rescaled(b11), 0, 0.5, 0.005)
        d = dict(c.grid)
        assert d[0.1] == 0.0
        assert d[0.05] > 0 and d[0.15] < 0

    def test_base_1_4_near_0_4(self, b14):
        c14 = dict(error_curve(Method.rescaled(b14), 0, 0.5, 0.005).grid)
        ct = dict(error_curve(Method.traditional(), 0, 0.5, 0.005).grid)
        assert c14[0.4] == 0.0
        for p in (0.35, 0.4, 0.45, 0.5):
            assert abs(c14[p]) < abs(ct[p])
        assert max(abs(v) for v in c14.values()) < 0.03

    def test_default_curves(self):
        curves = default_error_curves()
        assert [c.method_label for c in curves] == ["error_traditional", "error_base_1_1", "error_base_1_4"]
        assert all(len(c.grid) == 101 for c in curves)

    @pytest.mark.parametrize("args", [(0.5, 0.5, 0.01), (0, 0.5, 0), (0, 0.5, -1), (0.5, 0, 0.1)])
    def test_degenerate(self, args):
        with pytest.raises(ValueError):
            error_curve(Method.traditional(), *args)

    def test_curve_invariants(self):
        with pytest.raises(ValueError):
            ErrorCurve("x", ((0.1, 0.0), (0.1, 0.0)))
        with pytest.raises(ValueError):
            ErrorCurve("x", ((0.1, math.nan),))


class TestCrossover:
    def test_base_1_1(self, b11):
        c = crossover(b11)
        assert c == pytest.approx(0.048, abs=0.002)
        assert c == pytest.approx(brute_crossover(0.1), abs=2e-7)

    def test_base_1_4(self, b14):
        c = crossover(b14)
        assert 0 < c < 0.4
        assert c == pytest.approx(brute_crossover(0.4), abs=2e-7)

    @pytest.mark.parametrize("p_b", [0.1, 0.25, 0.4])
    def test_root_and_sign_flip(self, p_b):
        b = LogBase(p_b)
        c = crossover(b)

        def gap(p):
            return abs(traditional_error(p)) - abs(rescaled_error(b, p))

        assert abs(gap(c)) < 1e-9
        assert gap(c - 1e-6) < 0 < gap(c + 1e-6)

    def test_rejects_shrinking_base(self):
        with pytest.raises(DomainError):
            crossover(LogBase(-0.1))


class TestBaseQualityScan:
    def test_base_2_35(self):
        (r,) = base_quality_scan([2.35], 0.43)
        assert r.max_abs_error <= 0.014
        assert r.argmax_p == pytest.approx(0.43)

    def test_natural_max_at_endpoint(self):
        (r,) = base_quality_scan([math.e], 0.3)
        assert r.max_abs_error == pytest.approx(0.0499, abs=1e-4)
        assert r.argmax_p == pytest.approx(0.3)
        assert r.ratio_to_e == pytest.approx(1.0)

    def test_2_6_dominates_e(self):
        for p in np.arange(0.2, 0.5005, 0.001):
            assert abs(generic_base_error(2.6, p)) <= abs(generic_base_error(math.e, p))

    def test_interior_maximum_refined(self):
        # base 2.35 on [0, 0.3]: interior bump of 1+p-2.35^p
        (r,) = base_quality_scan([2.35], 0.3)
        grid = np.linspace(0, 0.3, 300001)
        brute = np.abs(1 + grid - 2.35 ** grid)
        assert r.argmax_p == pytest.approx(grid[brute.argmax()], abs=1e-5)
        assert r.max_abs_error == pytest.approx(brute.max(), abs=1e-10)

    def test_ratio_reported(self):
        (r,) = base_quality_scan([2.35], 0.43)
        assert r.ratio_to_e == pytest.approx(abs(1.1 - 2.35 ** 0.1) / abs(traditional_error(0.1)))

    def test_invalid(self):
        with pytest.raises(DomainError):
            base_quality_scan([1.0], 0.4)
        with pytest.raises(ValueError):
            base_quality_scan([2.0], 0.0)


def test_golden_section():
    assert golden_section_max(lambda x: -(x - 0.3) ** 2, 0, 1) == pytest.approx(0.3, abs=1e-6)


def test_interpretation_error_field(b11):
    r = Interpretation.build(2.0, b11, 0.21, 0.2)
    assert r.error == 0.2 - 0.21
