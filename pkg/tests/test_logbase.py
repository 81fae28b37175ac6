import math
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logrescale import (NATURAL, DomainError, LogBase, TransformSpec, inverse_transform,
                        make_base, transform, transform_asinh, transform_log1p)

valid_p = st.floats(min_value=-0.99, max_value=20).filter(lambda p: abs(p) > 1e-3)
positive_x = st.floats(min_value=1e-6, max_value=1e6)


class TestMakeBase:
    def test_ten_percent(self):
        b = make_base(0.1)
        assert b.p == 0.1
        assert b.base == 1.1

    @pytest.mark.parametrize("p, bound", [(0.0, "base 1"), (-1.0, "> -1"), (-2.5, "> -1")])
    def test_rejections_name_the_bound(self, p, bound):
        with pytest.raises(DomainError, match=re.escape(bound)):
            make_base(p)

    @pytest.mark.parametrize("p", [math.nan, math.inf, -math.inf])
    def test_non_finite(self, p):
        with pytest.raises(DomainError):
            make_base(p)

    def test_natural_base(self):
        b = make_base(math.e - 1)
        assert b.base == pytest.approx(math.e, rel=1e-15)
        assert b.is_natural
        for x in (0.5, 2.0, 1234.5):
            assert transform(x, b) == pytest.approx(math.log(x), rel=1e-12)

    def test_token(self):
        assert LogBase(0.1).token == "1.1"
        assert LogBase(1.0).token == "2"
        assert NATURAL.token == "e"


class TestTransform:
    def test_base_maps_to_one(self, b11):
        assert transform(1.1, b11) == 1.0

    def test_one_maps_to_zero(self):
        for p in (0.1, 0.4, -0.5, 3.0):
            assert transform(1.0, LogBase(p)) == 0.0

    def test_two_in_base_1_1(self, b11):
        u = transform(2.0, b11)
        # oracle: exponentiate back
        assert 1.1 ** u == pytest.approx(2.0, rel=1e-14)
        # 40-digit reference ln(2)/ln(1.1)
        assert u == pytest.approx(7.272540897341719, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -1e-300])
    def test_rejects_nonpositive(self, b11, x):
        with pytest.raises(DomainError, match="log1p"):
            transform(x, b11)


class TestInverse:
    def test_values(self, b11):
        assert inverse_transform(1, b11) == pytest.approx(1.1, rel=1e-15)
        assert inverse_transform(0, b11) == 1.0
        assert inverse_transform(2, b11) == pytest.approx(1.21, rel=1e-14)

    def test_overflow(self, b11):
        with pytest.raises(DomainError, match="range"):
            inverse_transform(1e6, b11)


class TestLog1p:
    def test_values(self, b11):
        assert transform_log1p(0.0, b11) == 0.0
        assert transform_log1p(0.1, b11) == pytest.approx(1.0, abs=1e-15)
        u = transform_log1p(9.0, b11)
        assert 1.1 ** u == pytest.approx(10.0, rel=1e-14)
        assert u == pytest.approx(24.158857928096806, rel=1e-14)

    def test_rejects_negative(self, b11):
        with pytest.raises(DomainError):
            transform_log1p(-1e-12, b11)


class TestAsinh:
    def test_zero(self):
        assert transform_asinh(0.0) == 0.0

    def test_one(self):
        assert transform_asinh(1.0) == pytest.approx(math.log(1 + math.sqrt(2)), rel=1e-15)
        assert transform_asinh(1.0) == pytest.approx(0.881373587019543, rel=1e-14)

    @given(st.floats(min_value=-1e300, max_value=1e300))
    def test_odd_and_matches_stdlib(self, x):
        assert transform_asinh(-x) == -transform_asinh(x)
        assert transform_asinh(x) == pytest.approx(math.asinh(x), rel=1e-14, abs=1e-300)

    def test_large_negative_is_finite(self):
        # the naive ln(x + sqrt(x^2+1)) collapses to ln(0) here
        assert transform_asinh(-1e10) == pytest.approx(-math.asinh(1e10), rel=1e-14)


class TestIdentities:
    @given(positive_x, valid_p)
    def test_change_of_base(self, x, p):
        b = LogBase(p)
        assert transform(x, b) == pytest.approx(math.log(x) / math.log(1 + p), rel=1e-12, abs=1e-300)

    @given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0.01, max_value=2.0))
    def test_unit_step(self, logx, p):
        b = LogBase(p)
        x = 10.0 ** logx
        assert transform(x * (1 + p), b) - transform(x, b) == pytest.approx(1.0, abs=1e-10)

    @given(positive_x, valid_p)
    def test_round_trip(self, x, p):
        b = LogBase(p)
        assert inverse_transform(transform(x, b), b) == pytest.approx(x, rel=1e-10)

    @given(st.floats(min_value=0, max_value=1e6), st.floats(min_value=0, max_value=1e6),
           st.floats(min_value=0.01, max_value=5))
    def test_monotone(self, a, c, p):
        lo, hi = sorted((a, c))
        b = LogBase(p)
        assert transform_log1p(lo, b) <= transform_log1p(hi, b)
        assert transform_asinh(lo) <= transform_asinh(hi)
        if lo > 0:
            assert transform(lo, b) <= transform(hi, b)


class TestTransformSpec:
    def test_rescaled_needs_base(self):
        with pytest.raises(ValueError):
            TransformSpec("rescaled_log")

    def test_plain_kinds_reject_base(self, b11):
        for kind in ("natural_log", "asinh", "identity"):
            with pytest.raises(ValueError):
                TransformSpec(kind, b11)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            TransformSpec("sqrt")

    def test_call(self, b11):
        assert TransformSpec("rescaled_log", b11)(1.21) == pytest.approx(2.0)
        assert TransformSpec("identity")(3) == 3.0
