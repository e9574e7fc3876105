"""Quadrature rules: tabulated forms, exactness sweeps, positivity."""

import math

import numpy as np
import pytest

from lcfpost.quadrature import (MAX_INTERVAL_POINTS, TRIANGLE_ORDERS,
                                gauss_interval, tensor_square, triangle_rule)


def interval_monomial(k, a, b):
    return (b ** (k + 1) - a ** (k + 1)) / (k + 1)


def simplex_monomial(i, j):
    # integral of x^i y^j over the unit triangle
    return math.factorial(i) * math.factorial(j) / math.factorial(i + j + 2)


class TestInterval:
    def test_tabulated_one_point(self):
        a, b = 0.3, 1.7
        rule = gauss_interval(1, a, b)
        mid, length = 0.5 * (a + b), b - a
        assert rule.points[0, 0] == pytest.approx(mid, abs=1e-14)
        assert rule.weights[0] == pytest.approx(length, abs=1e-14)

    def test_tabulated_two_point(self):
        a, b = 0.3, 1.7
        rule = gauss_interval(2, a, b)
        mid, length = 0.5 * (a + b), b - a
        d = length / (2.0 * math.sqrt(3.0))
        assert rule.points[:, 0] == pytest.approx([mid - d, mid + d], abs=1e-14)
        assert rule.weights == pytest.approx([length / 2] * 2, abs=1e-14)

    def test_two_point_unit_interval(self):
        rule = gauss_interval(2, 0.0, 1.0)
        d = 1.0 / (2.0 * math.sqrt(3.0))
        assert rule.points[:, 0] == pytest.approx([0.5 - d, 0.5 + d], abs=1e-14)
        assert rule.weights == pytest.approx([0.5, 0.5], abs=1e-14)

    def test_tabulated_three_point(self):
        a, b = 0.3, 1.7
        rule = gauss_interval(3, a, b)
        mid, length = 0.5 * (a + b), b - a
        d = (length / 2.0) * math.sqrt(3.0 / 5.0)
        assert rule.points[:, 0] == pytest.approx([mid - d, mid, mid + d],
                                                  abs=1e-14)
        assert rule.weights == pytest.approx(
            [5 * length / 18, 8 * length / 18, 5 * length / 18], abs=1e-14)

    def test_tabulated_four_point(self):
        a, b = 0.3, 1.7
        rule = gauss_interval(4, a, b)
        mid, length = 0.5 * (a + b), b - a
        r30 = math.sqrt(30.0)
        d_out = (length / 2.0) * math.sqrt((15.0 + 2.0 * r30) / 35.0)
        d_in = (length / 2.0) * math.sqrt((15.0 - 2.0 * r30) / 35.0)
        w_out = (0.25 - math.sqrt(5.0 / 6.0) / 12.0) * length
        w_in = (0.25 + math.sqrt(5.0 / 6.0) / 12.0) * length
        assert rule.points[:, 0] == pytest.approx(
            [mid - d_out, mid - d_in, mid + d_in, mid + d_out], abs=1e-14)
        assert rule.weights == pytest.approx([w_out, w_in, w_in, w_out],
                                             abs=1e-14)

    @pytest.mark.parametrize("lq", [5, 6])
    def test_high_orders_match_reference_nodes(self, lq):
        # independent oracle: numpy's Gauss-Legendre, mapped to [0, 1]
        x_ref, w_ref = np.polyval([0.5, 0.5], np.polynomial.legendre.leggauss(lq)[0]), \
            np.polynomial.legendre.leggauss(lq)[1] / 2.0
        rule = gauss_interval(lq, 0.0, 1.0)
        assert rule.points[:, 0] == pytest.approx(np.sort(x_ref), abs=1e-13)
        assert rule.weights == pytest.approx(
            w_ref[np.argsort(np.polynomial.legendre.leggauss(lq)[0])], abs=1e-13)

    @pytest.mark.parametrize("lq", range(1, MAX_INTERVAL_POINTS + 1))
    def test_exactness_and_failure(self, lq):
        rule = gauss_interval(lq, 0.0, 1.0)
        assert rule.order == 2 * lq - 1
        for k in range(rule.order + 1):
            exact = interval_monomial(k, 0.0, 1.0)
            got = rule.integrate(rule.points[:, 0] ** k)
            assert abs(got - exact) <= 1e-13 * abs(exact)
        k = rule.order + 1
        exact = interval_monomial(k, 0.0, 1.0)
        err = abs(rule.integrate(rule.points[:, 0] ** k) - exact)
        if lq <= 5:
            assert err > 1e-6
        else:
            # the degree-12 defect of the 6-point rule is real but small
            assert err > 1e-8 * exact

    def test_order3_x5_and_order6_x11(self):
        assert gauss_interval(3).integrate(
            gauss_interval(3).points[:, 0] ** 5) == pytest.approx(1 / 6, abs=1e-14)
        assert gauss_interval(6).integrate(
            gauss_interval(6).points[:, 0] ** 11) == pytest.approx(1 / 12, abs=1e-14)

    def test_general_interval_scaling(self):
        rule = gauss_interval(4, -2.0, 5.0)
        for k in range(8):
            exact = interval_monomial(k, -2.0, 5.0)
            assert rule.integrate(rule.points[:, 0] ** k) == pytest.approx(
                exact, rel=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gauss_interval(0)
        with pytest.raises(ValueError):
            gauss_interval(7)
        with pytest.raises(ValueError):
            gauss_interval(2, 1.0, 1.0)


class TestSquare:
    @pytest.mark.parametrize("lq", range(1, MAX_INTERVAL_POINTS + 1))
    def test_weight_sum_and_count(self, lq):
        rule = tensor_square(lq)
        assert rule.points.shape == (lq * lq, 2)
        assert math.fsum(rule.weights) == pytest.approx(1.0, abs=1e-14)

    def test_two_point_layout(self):
        rule = tensor_square(2)
        d = 1.0 / (2.0 * math.sqrt(3.0))
        lo, hi = 0.5 - d, 0.5 + d
        expected = {(lo, lo), (lo, hi), (hi, lo), (hi, hi)}
        got = {(round(p[0], 12), round(p[1], 12)) for p in rule.points}
        assert got == {(round(a, 12), round(b, 12)) for a, b in expected}

    def test_x3y5_at_lq3(self):
        rule = tensor_square(3)
        got = rule.integrate(rule.points[:, 0] ** 3 * rule.points[:, 1] ** 5)
        assert got == pytest.approx((1 / 4) * (1 / 6), abs=1e-14)

    @pytest.mark.parametrize("lq", [1, 2, 3, 4])
    def test_per_axis_exactness_and_failure(self, lq):
        rule = tensor_square(lq)
        top = 2 * lq - 1
        for i in range(top + 1):
            for j in range(top + 1):
                exact = 1.0 / ((i + 1) * (j + 1))
                got = rule.integrate(rule.points[:, 0] ** i * rule.points[:, 1] ** j)
                assert abs(got - exact) <= 1e-13 * exact
        exact = 1.0 / (2 * lq + 1)
        got = rule.integrate(rule.points[:, 0] ** (2 * lq))
        assert abs(got - exact) > 1e-6


class TestTriangle:
    def test_order_one_is_centroid(self):
        rule = triangle_rule(1)
        assert rule.points[0] == pytest.approx([1 / 3, 1 / 3], abs=1e-15)
        assert rule.weights == pytest.approx([0.5], abs=1e-15)

    @pytest.mark.parametrize("order", TRIANGLE_ORDERS)
    def test_weight_sum(self, order):
        rule = triangle_rule(order)
        assert math.fsum(rule.weights) == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("order", [o for o in TRIANGLE_ORDERS if o >= 3])
    def test_x2y(self, order):
        rule = triangle_rule(order)
        got = rule.integrate(rule.points[:, 0] ** 2 * rule.points[:, 1])
        assert got == pytest.approx(1 / 60, abs=1e-13)

    @pytest.mark.parametrize("order", TRIANGLE_ORDERS)
    def test_exactness_and_failure(self, order):
        rule = triangle_rule(order)
        for total in range(order + 1):
            for i in range(total + 1):
                j = total - i
                exact = simplex_monomial(i, j)
                got = rule.integrate(
                    rule.points[:, 0] ** i * rule.points[:, 1] ** j)
                assert abs(got - exact) <= 1e-13 * exact, (order, i, j)
        worst = 0.0
        for i in range(order + 2):
            j = order + 1 - i
            exact = simplex_monomial(i, j)
            got = rule.integrate(rule.points[:, 0] ** i * rule.points[:, 1] ** j)
            worst = max(worst, abs(got - exact) / exact)
        # high-order defects are tiny in absolute terms; compare relatively
        assert worst > (1e-6 if order <= 7 else 1e-7)

    def test_unsupported_order_message(self):
        with pytest.raises(ValueError, match="supported"):
            triangle_rule(4)
        with pytest.raises(ValueError):
            triangle_rule(0)


class TestRuleObjects:
    @pytest.mark.parametrize("make", [
        lambda: gauss_interval(4),
        lambda: tensor_square(3),
        lambda: triangle_rule(7),
    ])
    def test_positive_weights_points_inside(self, make):
        rule = make()
        assert np.all(rule.weights > 0)
        assert np.all(rule.points >= -1e-15)
        if rule.domain == "triangle":
            assert np.all(rule.points.sum(axis=1) <= 1.0 + 1e-15)
        else:
            assert np.all(rule.points <= 1.0 + 1e-15)

    def test_rules_are_shared_and_frozen(self):
        a = tensor_square(4)
        b = tensor_square(4)
        assert a is b
        assert not a.points.flags.writeable
        with pytest.raises((AttributeError, TypeError)):
            a.order = 3

    def test_integrate_helper(self):
        rule = gauss_interval(2)
        assert rule.integrate(np.ones(2)) == pytest.approx(1.0, abs=1e-15)
