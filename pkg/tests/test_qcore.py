"""Tests for the scalar q-product kernels."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from qbeta.qcore import (
    ConvergenceError,
    DomainError,
    aw_constant,
    check_base,
    h_product,
    h_product_multi,
    qpoch,
    qpoch_multi,
)

INF = math.inf


def brute_qpoch(a, q, terms=200):
    """Independent long-product oracle."""
    p = 1.0 + 0.0j
    qk = 1.0
    for _ in range(terms):
        p *= 1.0 - a * qk
        qk *= q
    return p


def brute_h(x, a, q, terms=200):
    p = 1.0 + 0.0j
    qk = 1.0
    for _ in range(terms):
        p *= 1.0 - 2.0 * qk * a * x + qk * qk * a * a
        qk *= q
    return p


class TestBase:
    @pytest.mark.parametrize("q", [0.0, 1.0, -0.5, 1.7])
    def test_rejects_bad_base(self, q):
        with pytest.raises(DomainError):
            check_base(q)

    def test_accepts_open_interval(self):
        assert check_base(0.5) == 0.5


class TestQPoch:
    def test_empty_product(self):
        assert qpoch(0.77, 0.5, 0).value == 1.0

    def test_two_factor_product(self):
        # (1 - 0.5)(1 - 0.25) = 0.375
        assert qpoch(0.5, 0.5, 2).value == pytest.approx(0.375, rel=1e-15)

    def test_infinite_product_against_long_oracle(self):
        # frozen from the 200-term brute-force product
        res = qpoch(0.3, 0.4, INF)
        assert abs(res.value - 0.56783718684558049) < 1e-12
        assert res.err_estimate < 1e-12

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            qpoch(0.5, 0.5, -1)

    def test_overflow_is_an_error(self):
        with pytest.raises(OverflowError):
            qpoch(1e200, 0.9, 40)

    @given(a=st.floats(-0.9, 0.9), q=st.floats(0.05, 0.9),
           m=st.integers(0, 12), n=st.integers(0, 12))
    @settings(max_examples=60, deadline=None)
    def test_shift_split(self, a, q, m, n):
        # (a; q)_{m+n} = (a; q)_m (a q^m; q)_n
        whole = qpoch(a, q, m + n).value
        split = qpoch(a, q, m).value * qpoch(a * q ** m, q, n).value
        assert whole == pytest.approx(split, rel=1e-12, abs=1e-14)

    @given(a=st.floats(-0.9, 0.9), q=st.floats(0.05, 0.85),
           n=st.integers(0, 20))
    @settings(max_examples=60, deadline=None)
    def test_telescoping_with_infinite_tail(self, a, q, n):
        # (a; q)_n (a q^n; q)_inf = (a; q)_inf
        lhs = qpoch(a, q, n).value * qpoch(a * q ** n, q, INF).value
        rhs = qpoch(a, q, INF).value
        assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-13)


class TestQPochMulti:
    def test_singleton_reduces(self):
        assert qpoch_multi([0.3], 0.5, 4).value == qpoch(0.3, 0.5, 4).value

    def test_definition(self):
        lhs = qpoch_multi([0.2, 0.3], 0.5, 3).value
        rhs = qpoch(0.2, 0.5, 3).value * qpoch(0.3, 0.5, 3).value
        assert lhs == pytest.approx(rhs, rel=1e-14)

    def test_infinite_against_oracle(self):
        res = qpoch_multi([0.1, 0.2, 0.3], 0.6, INF)
        assert abs(res.value - 0.19626704437020491) < 1e-12

    def test_empty_list_rejected(self):
        with pytest.raises(DomainError):
            qpoch_multi([], 0.5, 3)


class TestHProduct:
    def test_theta_zero_degeneracy(self):
        # x = 1: both exponential factors collapse, h = (a; q)_inf^2
        res = h_product(1.0, 0.5, 0.5)
        assert res.value.real == pytest.approx(0.083398563863748522, rel=1e-12)

    def test_right_angle_oracle(self):
        res = h_product(0.0, 0.4, 0.3)
        assert res.value.real == pytest.approx(1.1783800304565177, rel=1e-12)

    def test_zero_parameter(self):
        assert h_product(0.3, 0.0, 0.5).value == 1.0

    def test_x_out_of_range(self):
        with pytest.raises(DomainError):
            h_product(1.5, 0.3, 0.5)

    @given(x=st.floats(-1.0, 1.0), a=st.floats(-0.95, 0.95),
           q=st.floats(0.05, 0.9))
    @settings(max_examples=80, deadline=None)
    def test_quadratic_form_equals_conjugate_pair(self, x, a, q):
        # h(x; a|q) = (a e^{it}; q)_inf (a e^{-it}; q)_inf, x = cos t
        import cmath
        theta = math.acos(x)
        e = cmath.exp(1j * theta)
        pair = qpoch(a * e, q, INF).value * qpoch(a / e, q, INF).value
        hv = h_product(x, a, q).value
        assert hv == pytest.approx(pair, rel=1e-11, abs=1e-13)

    @given(theta=st.floats(0.0, math.pi), a=st.floats(-0.9, 0.9))
    @settings(max_examples=40, deadline=None)
    def test_even_in_theta(self, theta, a):
        q = 0.5
        assert h_product(math.cos(theta), a, q).value == \
            h_product(math.cos(-theta), a, q).value


class TestHProductMulti:
    def test_singleton(self):
        assert h_product_multi(0.3, [0.4], 0.5).value == \
            h_product(0.3, 0.4, 0.5).value

    def test_empty_product(self):
        assert h_product_multi(0.3, [], 0.5).value == 1.0

    def test_four_entries_compositional(self):
        x = math.cos(1.0)
        joint = h_product_multi(x, [0.3, 0.2, 0.1, 0.4], 0.5).value
        sep = 1.0
        for a in (0.3, 0.2, 0.1, 0.4):
            sep *= h_product(x, a, 0.5).value
        assert joint == pytest.approx(sep, rel=1e-13)


class TestAWConstant:
    def test_all_zero_parameters(self):
        # K(0,0,0,0|q) = 2 pi / (q; q)_inf
        res = aw_constant(0, 0, 0, 0, 0.5)
        want = 2.0 * math.pi / qpoch(0.5, 0.5, INF).value
        assert res.value.real == pytest.approx(want.real, rel=1e-13)

    def test_frozen_value(self):
        res = aw_constant(0.3, 0.2, 0.1, 0.4, 0.5)
        assert res.value.real == pytest.approx(44.450930097427611, rel=1e-12)

    @given(perm=st.permutations([0.3, 0.2, 0.1, 0.4]))
    @settings(max_examples=24, deadline=None)
    def test_parameter_symmetry(self, perm):
        base = aw_constant(0.3, 0.2, 0.1, 0.4, 0.5).value
        assert aw_constant(*perm, 0.5).value == pytest.approx(base, rel=1e-13)

    def test_domain_violation(self):
        with pytest.raises(DomainError):
            aw_constant(1.1, 0.2, 0.1, 0.4, 0.5)

    def test_quadrature_oracle(self):
        # independent check: integrate the weight numerically
        from qbeta.quadrature import integrate, aw_weight_grid
        res = integrate(lambda th: aw_weight_grid(th, 0.3, 0.2, 0.1, 0.4, 0.5),
                        1e-11)
        assert abs(res.value - aw_constant(0.3, 0.2, 0.1, 0.4, 0.5).value) \
            <= 1e-9 * abs(res.value)
