"""Reference systems used by the tests, the verify suite and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .ifs import PisotFormSystem, canonicalize
from .numberfield import PisotField, verify_pisot

__all__ = [
    "PLASTIC",
    "plastic_field",
    "plastic_system",
    "plastic_23_system",
    "golden_degenerate_system",
    "uniform_system",
    "fixed_point_system",
    "HEADLINE_M_HAT",
]

PLASTIC = (-1, -1, 0)          # X^3 - X - 1
SUPERGOLDEN = (-1, 0, -1)      # X^3 - X^2 - 1
GOLDEN = (-1, -1)              # X^2 - X - 1
GOLDEN_SQUARED = (1, -3)       # X^2 - 3X + 1, root (3 + sqrt 5)/2

# m_hat(1) of the plastic system at p = (1/2, 1/2), evaluated independently
# (the F*G formula, the forward chain at lambda**-800, and direct 90-digit
# phases all agree to these digits)
HEADLINE_M_HAT = complex("0.000118642360286244+0.0000328199824840233j")


def plastic_field(precision: int = 128) -> PisotField:
    return verify_pisot(PLASTIC, precision)


def plastic_system(p=("1/2", "1/2"), precision: int = 128) -> PisotFormSystem:
    """phi_0(x) = lambda x, phi_1(x) = lambda^2 x + 1."""
    F = plastic_field(precision)
    return canonicalize(F, (1, 2), (F.zero(), F.one()), list(p))


def plastic_23_system(p=None, precision: int = 128) -> PisotFormSystem:
    """phi_0(x) = lambda^2 x, phi_1(x) = lambda^3 x + 1; default p = (lambda^2, lambda^3)."""
    F = plastic_field(precision)
    if p is None:
        p = (F.theta_power(-2), F.theta_power(-3))
    return canonicalize(F, (2, 3), (F.zero(), F.one()), list(p))


def golden_degenerate_system(p=("1/2", "1/2"), precision: int = 128) -> PisotFormSystem:
    """lambda = (3 - sqrt 5)/2 with the plastic-style maps (exps (1, 2), mus (0, 1))."""
    F = verify_pisot(GOLDEN_SQUARED, precision)
    return canonicalize(F, (1, 2), (F.zero(), F.one()), list(p))


def uniform_system(N: int, precision: int = 128) -> PisotFormSystem:
    """phi_k(x) = (x + k)/(N + 1); the invariant measure is Lebesgue on [0, 1]."""
    F = verify_pisot((-(N + 1),), precision)
    mus = [F.rational(Fraction(k, N + 1)) for k in range(N + 1)]
    return canonicalize(F, [1] * (N + 1), mus, [Fraction(1, N + 1)] * (N + 1))


def fixed_point_system(precision: int = 128) -> PisotFormSystem:
    """Maps with common fixed point c = (1 + theta)/3 for X^2 - 3X - 1.

    ``lambda**-n c mod 1`` converges to 2/3.
    """
    F = verify_pisot((-1, -3), precision)
    c = (1 + F.theta_power(1)) / 3
    lam = F.lam()
    return canonicalize(F, (1, 2), (c * (1 - lam), c * (1 - lam * lam)), ["1/2", "1/2"])
