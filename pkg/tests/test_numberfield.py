from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pisot_ifs.errors import NotInDualLattice, NotPisot, PisotIFSError, ReducibleDetected
from pisot_ifs.fixtures import GOLDEN, GOLDEN_SQUARED, PLASTIC, SUPERGOLDEN
from pisot_ifs.numberfield import (
    companion_matrix,
    power_minimal_polynomial,
    power_sums,
    verify_pisot,
)

PISOT = [PLASTIC, SUPERGOLDEN, GOLDEN, GOLDEN_SQUARED]


@pytest.fixture(scope="module")
def plastic():
    return verify_pisot(PLASTIC)


def test_power_sums_plastic_frozen():
    # Perrin sequence: 3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17
    assert power_sums(PLASTIC, 11) == [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17]


def test_power_sums_golden_are_lucas():
    assert power_sums(GOLDEN, 8) == [2, 1, 3, 4, 7, 11, 18, 29]


@pytest.mark.parametrize("coeffs", PISOT + [(-1, 0, 0, -1), (2, -4)])
def test_accepts_pisot(coeffs):
    # plus X^4 - X^3 - 1 and the non-unit X^2 - 4X + 2
    F = verify_pisot(coeffs)
    assert F.theta.sign() == 1
    assert float(F.theta) > 1
    assert all(z.abs_upper() < 1 for z in F.conjugates)


@pytest.mark.parametrize("coeffs, exc", [
    ((-2, 0), NotPisot),             # X^2 - 2, conjugate -sqrt 2
    ((1, 0, 0, 0), NotPisot),        # X^4 + 1
    ((1, -1, -1, -1), NotPisot),     # Salem: X^4 - X^3 - X^2 - X + 1
    ((1, -3, 1), ReducibleDetected),  # (X - 1)(X^2 + 2X - 1)
])
def test_rejects(coeffs, exc):
    with pytest.raises(exc):
        verify_pisot(coeffs)


def test_rejects_reducible():
    # (X - 2)(X^2 + 1/2 ...) style: X^3 - 2X^2 + X - 2 = (X - 2)(X^2 + 1)
    with pytest.raises((ReducibleDetected, NotPisot)):
        verify_pisot((-2, 1, -2))


def test_plastic_root_against_mpmath(plastic):
    mpmath.mp.dps = 60
    ref = mpmath.findroot(lambda x: x**3 - x - 1, 1.3)
    assert abs(float(plastic.theta) - float(ref)) < 1e-15
    assert plastic.theta.rad < 1e-40


def test_conjugate_pair_ordering(plastic):
    a, b = plastic.conjugates
    assert float(a.imag) > 0 > float(b.imag)


@pytest.mark.parametrize("coeffs", PISOT)
def test_traces_match_conjugate_sums(coeffs):
    F = verify_pisot(coeffs)
    ps = power_sums(coeffs, 51)
    for n in range(51):
        tot = F.root(0) ** n
        for z in F.conjugates:
            tot = tot + z ** n
        assert tot.contains(ps[n]), n


def test_field_arithmetic(plastic):
    F = plastic
    t = F.theta_power(1)
    assert t * t * t == t + F.one()
    assert t.inverse() * t == F.one()
    assert F.theta_power(-1) == t * t - F.one()
    assert F.lam() == F.theta_power(-1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
       st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_field_ring_laws(a, b):
    F = verify_pisot(PLASTIC)
    x, y = F.from_coords(a), F.from_coords(b)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    if not y.is_zero():
        assert (x / y) * y == x


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3), st.integers(-6, 6))
def test_embedding_is_homomorphism(a, n):
    F = verify_pisot(PLASTIC)
    x = F.from_coords(a)
    lhs = F.embed(x * F.theta_power(n), 0)
    rhs = F.embed(x, 0) * F.embed(F.theta_power(n), 0)
    assert lhs.overlaps(rhs)


def test_in_T_examples(plastic):
    F = plastic
    assert F.in_T(F.one()).member
    assert F.in_T(F.one()).threshold == 0
    assert not F.in_T(F.rational(Fraction(1, 2))).member
    # golden is a unit field, so T = D and 1/sqrt5 = (2 theta - 1)/5 has threshold 0
    G = verify_pisot(GOLDEN)
    assert G.in_T((2 * G.theta_power(1) - 1) / 5) == type(G.in_T(G.one()))(True, 0)
    # theta = 3: 1/9 needs two multiplications by theta before traces are integral
    T = verify_pisot((-3,))
    assert T.in_T(T.rational(Fraction(1, 9))).threshold == 2
    assert not T.in_T(T.rational(Fraction(1, 2))).member


def test_threshold_raises_off_T(plastic):
    with pytest.raises(NotInDualLattice.__mro__[1]):
        plastic.threshold(plastic.rational(Fraction(1, 3)))


def test_power_mod_one_is_small_for_large_n(plastic):
    z = plastic.power_mod_one(plastic.one(), 60)
    assert z.abs_upper() < 1e-3
    # theta^n = Tr(theta^n) - sum of conjugate powers
    ps = power_sums(PLASTIC, 61)
    v = float(plastic.real_value(plastic.theta_power(60)))
    assert abs((v - ps[60]) - complex(z).real) < 1e-6 * ps[60] ** 0 + 1e-3


def test_minimal_polynomial_of_square(plastic):
    assert power_minimal_polynomial(PLASTIC, 2) == (-1, 1, -2)
    assert plastic.minimal_polynomial_of_power(1) == tuple(PLASTIC)


def test_rebase_roundtrip(plastic):
    G = verify_pisot(power_minimal_polynomial(PLASTIC, 2))
    x = plastic.theta_power(2)
    y = plastic.rebase(x, 2, G)
    assert y == G.theta_power(1)


def test_companion_matrix_shape():
    M = companion_matrix(PLASTIC)
    assert len(M) == 3 and all(len(r) == 3 for r in M)


def test_refine_narrows(plastic):
    assert plastic.refine(512).theta.rad < plastic.theta.rad


def test_json_roundtrip(plastic):
    x = plastic.element((1, -2, 3), 7)
    assert type(x).from_json(x.to_json(), plastic.coeffs) == x
