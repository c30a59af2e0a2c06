import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqlab._rootfind import argmin_convex, increasing_root
from lqlab.errors import NumericalError


def quadratic(c):
    return lambda x: ((x - c) ** 2, 2 * (x - c))


def pole(upper):
    """Convex, increasing towards a pole at ``upper``; infinite beyond."""
    return lambda x: None if x >= upper else (1 / (upper - x), 1 / (upper - x) ** 2)


class TestArgminConvex:
    def test_interior(self):
        assert argmin_convex(quadratic(3.7), 0.0) == pytest.approx(3.7, abs=1e-12)

    def test_left_end(self):
        assert argmin_convex(quadratic(-1.0), 0.0) == 0.0

    def test_finite_upper(self):
        # x^2 - 4 x + 1/(1-x) has its minimiser inside (0, 1)
        def fun(x):
            if x >= 1.0:
                return None
            return x * x - 4 * x + 1 / (1 - x), 2 * x - 4 + 1 / (1 - x) ** 2
        m = argmin_convex(fun, 0.0, 1.0)
        assert 0.0 < m < 1.0
        assert fun(m)[1] == pytest.approx(0.0, abs=1e-8)


class TestIncreasingRoot:
    @given(c=st.floats(-5, 5), target=st.floats(0, 1e4))
    @settings(max_examples=100, deadline=None)
    def test_quadratic_branch(self, c, target):
        x, residual, _ = increasing_root(quadratic(c), c, target)
        assert x == pytest.approx(c + math.sqrt(target), rel=1e-12, abs=1e-12)
        assert abs(residual) <= 1e-12 * max(1.0, target)

    def test_exact_probe_returns_immediately(self):
        x, residual, iterations = increasing_root(quadratic(0.0), 0.0, 1.0)
        assert (x, residual, iterations) == (1.0, 0.0, 0)

    def test_target_at_left_end(self):
        assert increasing_root(quadratic(0.0), 0.0, 0.0)[0] == 0.0

    @pytest.mark.parametrize("target", [1.5, 10.0, 1e6])
    def test_respects_finite_upper(self, target):
        x, _, _ = increasing_root(pole(1.0), 0.0, target, upper=1.0)
        assert x == pytest.approx(1 - 1 / target, rel=1e-12)

    def test_newton_converges_quickly(self):
        _, _, iterations = increasing_root(quadratic(1.0), 1.0, 7.3)
        assert iterations < 15

    def test_target_below_minimum(self):
        with pytest.raises(NumericalError):
            increasing_root(quadratic(0.0), 0.0, -1.0)

    def test_infinite_left_end(self):
        with pytest.raises(NumericalError):
            increasing_root(pole(0.0), 0.5, 1.0)
