import math
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pisot_ifs.balls import CertifiedComplex, CertifiedReal, working_precision

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_exact_value_has_zero_radius():
    x = CertifiedReal.from_value(0.5)
    assert x.rad == 0 and x.contains(Fraction(1, 2))


def test_rational_input_is_enclosed():
    x = CertifiedReal.from_value(Fraction(1, 3))
    assert x.contains(Fraction(1, 3))
    assert x.rad > 0


def test_pi_encloses_mpmath_reference():
    mpmath.mp.prec = 400
    with working_precision(200):
        p = CertifiedReal.pi()
    assert p.contains(gmpy2.mpq(int(mpmath.pi * 2**300), 2**300)) or abs(p.mid - gmpy2.const_pi()) <= p.rad
    assert p.rad < 2.0**-190


def test_sign_undecided_for_ball_around_zero():
    assert CertifiedReal(gmpy2.mpfr(0), 1e-3).sign() is None
    assert CertifiedReal(gmpy2.mpfr(1), 1e-3).sign() == 1


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite)
def test_arithmetic_encloses_exact_result(a, b, c):
    A, B, C = (CertifiedReal.from_value(v) for v in (a, b, c))
    exact = Fraction(a) * Fraction(b) + Fraction(c)
    with working_precision(60):
        r = A * B + C
    assert r.contains(exact)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3))
def test_division_and_inverse(a):
    A = CertifiedReal.from_value(a)
    with working_precision(64):
        r = CertifiedReal.from_value(1) / A
    assert r.contains(1 / Fraction(a))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-50, max_value=50))
def test_expi2pi_on_unit_circle(x):
    with working_precision(128):
        z = CertifiedComplex.expi2pi(CertifiedReal.from_value(x))
    ref = complex(math.cos(2 * math.pi * x), math.sin(2 * math.pi * x))
    assert abs(complex(z) - ref) <= z.rad + 1e-12
    assert z.abs_lower() <= 1 <= z.abs_upper()


def test_complex_multiplication_encloses():
    a = CertifiedComplex.from_value(complex(0.5, -0.25))
    b = CertifiedComplex.from_value(complex(3, 2))
    assert (a * b).contains(complex(0.5, -0.25) * complex(3, 2))


def test_to_json_has_radius():
    z = CertifiedComplex.from_value(complex(1, 2))
    j = z.to_json()
    assert set(j) == {"re", "im", "radius"}
    assert j["radius"] >= 0


def test_log_exp_sqrt():
    with working_precision(128):
        two = CertifiedReal.from_value(2)
        assert two.log().exp().contains(2)
        s = two.sqrt()
        assert (s * s).contains(2)


def test_log_of_nonpositive_rejected():
    with pytest.raises(Exception):
        CertifiedReal(gmpy2.mpfr(0), 0.5).log()
