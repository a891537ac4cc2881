"""Midpoint-radius ("ball") arithmetic over gmpy2.

A ball stores a high-precision midpoint (``gmpy2.mpfr``) and an absolute
radius kept as a Python float that is always rounded *upward*.  Every
operation propagates the input radii and adds a bound for the rounding error
of the midpoint, so the true value is guaranteed to lie in the result.

Precision is taken from the active gmpy2 context, which is thread-local; use
:func:`working_precision` to select it for a block of code.

Radii are doubles, so certified accuracy bottoms out near 1e-300 whatever the
midpoint precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational

import gmpy2
from gmpy2 import mpfr, mpq

__all__ = [
    "CertifiedReal",
    "CertifiedComplex",
    "working_precision",
    "current_precision",
]

# (1 - 2**-53)**k >= 1 - k*2**-53, so this covers up to 128 float ops per radius
_UP = 1.0 + 2.0**-46
_DOWN = 1.0 - 2.0**-46
_TINY = math.ulp(0.0)
_TWO_PI_UPPER = 6.283185307179587  # > 2*pi as a double


def working_precision(bits: int):
    """Context manager selecting the midpoint precision (bits) for a block."""
    return gmpy2.context(gmpy2.get_context(), precision=int(bits))


def current_precision() -> int:
    return gmpy2.get_context().precision


def _unit() -> float:
    # a relative rounding error bound for one correctly rounded operation
    return math.ldexp(1.0, max(1 - gmpy2.get_context().precision, -1070))


def _mag(x) -> float:
    """Upper bound for |x| as a double."""
    return abs(float(x)) * _UP


def _rounding(mag: float) -> float:
    return mag * _unit() + _TINY


def _to_mpq(x) -> mpq:
    if isinstance(x, (CertifiedReal,)):
        raise TypeError("balls have no exact rational value")
    if isinstance(x, float):
        return mpq(*x.as_integer_ratio())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class CertifiedReal:
    """Real ball ``[mid - rad, mid + rad]``."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad: float = 0.0):
        self.mid = mid if isinstance(mid, type(mpfr(0))) else mpfr(mid)
        if not rad >= 0.0:
            raise ValueError(f"radius must be nonnegative, got {rad!r}")
        self.rad = float(rad)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_value(cls, x) -> "CertifiedReal":
        """Ball around an exact number (int, Fraction, float, mpfr, mpq)."""
        if isinstance(x, CertifiedReal):
            return x
        if isinstance(x, CertifiedComplex):
            if x.im != 0:
                raise TypeError("cannot convert a non-real ball")
            return CertifiedReal(x.re, x.rad)
        if isinstance(x, float) or isinstance(x, type(mpfr(0))):
            m = mpfr(x)
            if math.isfinite(float(x)) and mpq(m) == _to_mpq(x):
                return cls(m, 0.0)
            return cls(m, _rounding(_mag(m)))
        if isinstance(x, (Integral, Rational)) or isinstance(x, type(mpq(0))):
            q = _to_mpq(x)
            m = mpfr(q)
            rad = 0.0 if mpq(m) == q else _rounding(_mag(m))
            return cls(m, rad)
        raise TypeError(f"cannot build a ball from {type(x).__name__}")

    @classmethod
    def pi(cls) -> "CertifiedReal":
        m = gmpy2.const_pi()
        return cls(m, _rounding(_mag(m)))

    # -- queries ------------------------------------------------------------

    def lower(self) -> mpq:
        return mpq(self.mid) - _to_mpq(self.rad)

    def upper(self) -> mpq:
        return mpq(self.mid) + _to_mpq(self.rad)

    def upper_float(self) -> float:
        return (abs(float(self.mid)) * _UP + self.rad) * _UP

    def sign(self):
        """+1 or -1 when the sign is certified, ``None`` when 0 is inside."""
        if self.lower() > 0:
            return 1
        if self.upper() < 0:
            return -1
        return None

    def contains(self, x) -> bool:
        if isinstance(x, CertifiedReal):
            return self.contains_ball(x)
        return abs(_to_mpq(x) - mpq(self.mid)) <= _to_mpq(self.rad)

    def contains_ball(self, other: "CertifiedReal") -> bool:
        return abs(mpq(other.mid) - mpq(self.mid)) + _to_mpq(other.rad) <= _to_mpq(self.rad)

    def overlaps(self, other) -> bool:
        other = CertifiedReal.from_value(other)
        return abs(mpq(other.mid) - mpq(self.mid)) <= _to_mpq(self.rad) + _to_mpq(other.rad)

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"CertifiedReal({float(self.mid)!r} +/- {self.rad:.3g})"

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        return CertifiedReal.from_value(other)

    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(-self.mid, self.rad)

    def __add__(self, other):
        if isinstance(other, CertifiedComplex):
            return NotImplemented
        other = self._coerce(other)
        m = self.mid + other.mid
        return CertifiedReal(m, (self.rad + other.rad + _rounding(_mag(m))) * _UP)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, CertifiedComplex):
            return NotImplemented
        other = self._coerce(other)
        m = self.mid - other.mid
        return CertifiedReal(m, (self.rad + other.rad + _rounding(_mag(m))) * _UP)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, CertifiedComplex):
            return NotImplemented
        other = self._coerce(other)
        m = self.mid * other.mid
        r = (_mag(self.mid) * other.rad + _mag(other.mid) * self.rad
             + self.rad * other.rad + _rounding(_mag(m)))
        return CertifiedReal(m, r * _UP)

    __rmul__ = __mul__

    def inverse(self) -> "CertifiedReal":
        a = abs(float(self.mid)) * _DOWN
        if not a > self.rad:
            raise ZeroDivisionError("ball contains zero")
        m = 1 / self.mid
        r = self.rad / (a * (a - self.rad)) * _UP
        return CertifiedReal(m, (r + _rounding(_mag(m))) * _UP)

    def __truediv__(self, other):
        if isinstance(other, CertifiedComplex):
            return NotImplemented
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "CertifiedReal":
        if not isinstance(n, Integral):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return (self ** (-n)).inverse()
        result = CertifiedReal(mpfr(1), 0.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- elementary functions -------------------------------------------------------

    def log(self) -> "CertifiedReal":
        a = float(self.mid) * _DOWN
        if not a > self.rad:
            raise ValueError("log of a ball that is not certified positive")
        m = gmpy2.log(self.mid)
        # |log x - log m| <= r / (m - r)
        r = self.rad / (a - self.rad) * _UP
        return CertifiedReal(m, (r + _rounding(_mag(m))) * _UP)

    def exp(self) -> "CertifiedReal":
        m = gmpy2.exp(self.mid)
        r = _mag(m) * math.expm1(self.rad) * _UP
        return CertifiedReal(m, (r + _rounding(_mag(m))) * _UP)

    def sqrt(self) -> "CertifiedReal":
        a = float(self.mid) * _DOWN
        if not a > self.rad:
            raise ValueError("sqrt of a ball that is not certified positive")
        m = gmpy2.sqrt(self.mid)
        # |sqrt x - sqrt m| <= r / (sqrt(m - r) + sqrt(m))
        r = self.rad / (math.sqrt(a - self.rad) * _DOWN) * _UP
        return CertifiedReal(m, (r + _rounding(_mag(m))) * _UP)


class CertifiedComplex:
    """Complex disc ``{z : |z - (re + i im)| <= rad}``."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re, im=0, rad: float = 0.0):
        _mpfr = type(mpfr(0))
        self.re = re if isinstance(re, _mpfr) else mpfr(re)
        self.im = im if isinstance(im, _mpfr) else mpfr(im)
        if not rad >= 0.0:
            raise ValueError(f"radius must be nonnegative, got {rad!r}")
        self.rad = float(rad)

    @classmethod
    def from_value(cls, z) -> "CertifiedComplex":
        if isinstance(z, CertifiedComplex):
            return z
        if isinstance(z, CertifiedReal):
            return cls(z.mid, 0, z.rad)
        if isinstance(z, complex):
            return cls(z.real, z.imag, 0.0)
        if isinstance(z, tuple):
            re, im = (CertifiedReal.from_value(v) for v in z)
            return cls(re.mid, im.mid, (re.rad + im.rad) * _UP)
        x = CertifiedReal.from_value(z)
        return cls(x.mid, 0, x.rad)

    @classmethod
    def one(cls) -> "CertifiedComplex":
        return cls(1, 0, 0.0)

    @classmethod
    def expi2pi(cls, x: CertifiedReal) -> "CertifiedComplex":
        """Ball for exp(2*pi*i*x), using |e^{ia} - e^{ib}| <= |a - b|."""
        arg = 2 * gmpy2.const_pi() * x.mid
        r = _TWO_PI_UPPER * x.rad + 4 * _rounding(_mag(arg))
        c, s = gmpy2.cos(arg), gmpy2.sin(arg)
        return cls(c, s, (r + 2 * _rounding(1.0)) * _UP)

    # -- queries -------------------------------------------------------------

    @property
    def real(self) -> CertifiedReal:
        return CertifiedReal(self.re, self.rad)

    @property
    def imag(self) -> CertifiedReal:
        return CertifiedReal(self.im, self.rad)

    def abs_upper(self) -> float:
        return (math.hypot(float(self.re), float(self.im)) * _UP + self.rad) * _UP

    def abs_lower(self) -> float:
        return max(0.0, math.hypot(float(self.re), float(self.im)) * _DOWN - self.rad * _UP)

    def contains(self, z) -> bool:
        if isinstance(z, CertifiedComplex):
            return self.contains_ball(z)
        if isinstance(z, complex):
            zr, zi = _to_mpq(z.real), _to_mpq(z.imag)
        elif isinstance(z, tuple):
            zr, zi = _to_mpq(z[0]), _to_mpq(z[1])
        else:
            zr, zi = _to_mpq(z), mpq(0)
        dr, di = zr - mpq(self.re), zi - mpq(self.im)
        r = _to_mpq(self.rad)
        return dr * dr + di * di <= r * r

    def contains_ball(self, other: "CertifiedComplex") -> bool:
        # |c1 - c2| + r2 <= r1, tested without square roots
        d2 = (mpq(other.re) - mpq(self.re)) ** 2 + (mpq(other.im) - mpq(self.im)) ** 2
        slack = _to_mpq(self.rad) - _to_mpq(other.rad)
        return slack >= 0 and d2 <= slack * slack

    def overlaps(self, other: "CertifiedComplex") -> bool:
        d2 = (mpq(other.re) - mpq(self.re)) ** 2 + (mpq(other.im) - mpq(self.im)) ** 2
        r = _to_mpq(self.rad) + _to_mpq(other.rad)
        return d2 <= r * r

    def is_real_within_radius(self) -> bool:
        return abs(mpq(self.im)) <= _to_mpq(self.rad)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"CertifiedComplex({complex(self)!r} +/- {self.rad:.3g})"

    def to_json(self) -> dict:
        """Double-precision midpoint with the radius widened to cover the cast."""
        re, im = float(self.re), float(self.im)
        err = abs(mpq(self.re) - _to_mpq(re)) + abs(mpq(self.im) - _to_mpq(im))
        rad = (self.rad + float(err) * _UP) * _UP
        return {"re": re, "im": im, "radius": rad}

    # -- arithmetic -------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "CertifiedComplex":
        if isinstance(other, CertifiedComplex):
            return other
        return CertifiedComplex.from_value(other)

    def _l1(self) -> float:
        return (abs(float(self.re)) + abs(float(self.im))) * _UP

    def conjugate(self) -> "CertifiedComplex":
        return CertifiedComplex(self.re, -self.im, self.rad)

    def __neg__(self) -> "CertifiedComplex":
        return CertifiedComplex(-self.re, -self.im, self.rad)

    def __add__(self, other):
        other = self._coerce(other)
        re, im = self.re + other.re, self.im + other.im
        out = CertifiedComplex(re, im, 0.0)
        out.rad = (self.rad + other.rad + _rounding(out._l1())) * _UP
        return out

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        re, im = self.re - other.re, self.im - other.im
        out = CertifiedComplex(re, im, 0.0)
        out.rad = (self.rad + other.rad + _rounding(out._l1())) * _UP
        return out

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, CertifiedReal):
            return self.scale(other)
        other = self._coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        re = a * c - b * d
        im = a * d + b * c
        n1, n2 = self._l1(), other._l1()
        r = n1 * other.rad + n2 * self.rad + self.rad * other.rad + 4 * _rounding(n1 * n2)
        return CertifiedComplex(re, im, r * _UP)

    __rmul__ = __mul__

    def scale(self, x) -> "CertifiedComplex":
        """Multiply by a real ball (or exact real)."""
        x = x if isinstance(x, CertifiedReal) else CertifiedReal.from_value(x)
        re, im = self.re * x.mid, self.im * x.mid
        n1, nx = self._l1(), _mag(x.mid)
        r = n1 * x.rad + nx * self.rad + self.rad * x.rad + 2 * _rounding(n1 * nx)
        return CertifiedComplex(re, im, r * _UP)

    def inverse(self) -> "CertifiedComplex":
        a = math.hypot(float(self.re), float(self.im)) * _DOWN
        if not a > self.rad:
            raise ZeroDivisionError("disc contains zero")
        n2 = self.re * self.re + self.im * self.im
        re, im = self.re / n2, -self.im / n2
        r = self.rad / (a * (a - self.rad)) * _UP
        out = CertifiedComplex(re, im, 0.0)
        # two roundings for n2, one per component division, plus the products
        out.rad = (r + 8 * _rounding(out._l1())) * _UP
        return out

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "CertifiedComplex":
        if not isinstance(n, Integral):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return (self ** (-n)).inverse()
        result = CertifiedComplex.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result
