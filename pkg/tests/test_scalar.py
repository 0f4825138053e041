import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxwalls.scalar import QuadScalar, cos_pi_over, field, sqrt, to_scalar

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
conductors = st.sampled_from([5, 7, 8, 12, 14, 9])


def element(n, coeffs):
    F = field(n)
    x = F.zero()
    for k, c in enumerate(coeffs):
        x = x + F.two_cos(k + 1) * c
    return x


def approx(n, coeffs):
    return sum(float(c) * 2 * math.cos(2 * math.pi * (k + 1) / n) for k, c in enumerate(coeffs))


@given(conductors, st.lists(fracs, min_size=1, max_size=3), st.lists(fracs, min_size=1, max_size=3))
def test_ring_operations_match_floats(n, c1, c2):
    x, y = element(n, c1), element(n, c2)
    fx, fy = approx(n, c1), approx(n, c2)
    assert float(x + y) == pytest.approx(fx + fy, abs=1e-9)
    assert float(x * y) == pytest.approx(fx * fy, abs=1e-8)
    assert float(x - y) == pytest.approx(fx - fy, abs=1e-9)


@given(conductors, st.lists(fracs, min_size=1, max_size=3))
def test_sign_agrees_with_high_precision(n, c):
    x = element(n, c)
    with mpmath.workdps(60):
        v = sum(mpmath.mpf(cc.numerator) / cc.denominator * 2 * mpmath.cos(2 * mpmath.pi * (k + 1) / n)
                for k, cc in enumerate(c))
    if abs(v) < mpmath.mpf(10) ** -40:
        assert x.sign() == 0
    else:
        assert x.sign() == (1 if v > 0 else -1)


@given(conductors, st.lists(fracs, min_size=1, max_size=3))
def test_inverse(n, c):
    x = element(n, c)
    if x.is_zero():
        return
    assert x * x.inverse() == 1


def test_cos_pi_over_known_values():
    assert cos_pi_over(3) == Fraction(1, 2)
    assert cos_pi_over(2) == 0
    assert cos_pi_over(4) * cos_pi_over(4) == Fraction(1, 2)
    assert float(cos_pi_over(7)) == pytest.approx(math.cos(math.pi / 7), abs=1e-15)


def test_sqrt_rational_square_collapses():
    assert sqrt(to_scalar(Fraction(9, 4))) == Fraction(3, 2)
    r = sqrt(to_scalar(2))
    assert isinstance(r, QuadScalar)
    assert float(r) == pytest.approx(math.sqrt(2))


def test_quad_comparisons():
    s5 = sqrt(to_scalar(5))
    assert s5 > 2 and s5 < Fraction(9, 4)
    assert (s5 - 1) / 4 < 1


def test_scalar_compares_with_quadratic_extension():
    from coxwalls.chains import r_sequence

    q = r_sequence(167, Fraction(1, 100), Fraction(1, 100))
    lo = to_scalar(Fraction(27, 25))
    assert (lo >= q) == (27 / 25 >= float(q))
    assert (lo < q) == (27 / 25 < float(q))
