"""Exact arithmetic in Q[theta] for a Pisot number theta.

Elements are stored as rational coordinates in the power basis
``1, theta, ..., theta^s`` and multiplied exactly modulo the minimal
polynomial.  The conjugate embeddings are certified discs obtained by a
Krawczyk test around approximate roots, so every numeric quantity derived
from them inherits a proven error radius.

Polynomials are given by their coefficients ``(a_0, ..., a_s)`` in ascending
order; the leading coefficient 1 of ``X^(s+1)`` is implicit.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from numbers import Integral, Rational
from typing import Sequence

import gmpy2
import mpmath
from gmpy2 import mpfr, mpq

from .balls import CertifiedComplex, CertifiedReal, working_precision
from .errors import (
    NotPisot,
    PrecisionInsufficient,
    ReducibleDetected,
    ThresholdViolation,
)

__all__ = [
    "FieldElement",
    "PisotField",
    "Membership",
    "verify_pisot",
    "trace",
    "in_T",
    "embed",
    "power_mod_one",
    "companion_matrix",
    "power_sums",
    "power_minimal_polynomial",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096


# ---------------------------------------------------------------------------
# polynomial helpers (integer coefficients, ascending, monic implicit)
# ---------------------------------------------------------------------------

def _full_ascending(coeffs: Sequence[int]) -> list[int]:
    return [int(c) for c in coeffs] + [1]


def _eval_int(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(1)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


_POWER_SUM_CACHE: dict[tuple, list[int]] = {}
_POWER_SUM_LOCK = threading.Lock()


def power_sums(coeffs: Sequence[int], count: int) -> list[int]:
    """Newton power sums ``p_0, ..., p_{count-1}`` of the roots of Q.

    ``p_n = Tr(theta^n)``.  For ``n > deg Q`` the linear recurrence
    ``p_{n+d} = -(a_{d-1} p_{n+d-1} + ... + a_0 p_n)`` is used.
    """
    key = tuple(int(c) for c in coeffs)
    d = len(key)
    with _POWER_SUM_LOCK:
        ps = _POWER_SUM_CACHE.get(key)
        if ps is None:
            ps = [d]
            _POWER_SUM_CACHE[key] = ps
        if len(ps) < count:
            # c_i is the coefficient of X^(d-i) in Q; c_0 = 1
            c = [1] + [key[d - i] for i in range(1, d + 1)]
            for k in range(len(ps), count):
                if k <= d:
                    acc = k * c[k] + sum(c[i] * ps[k - i] for i in range(1, k))
                else:
                    acc = sum(c[i] * ps[k - i] for i in range(1, d + 1))
                ps.append(-acc)
        return ps[:count]


def power_minimal_polynomial(coeffs: Sequence[int], g: int) -> tuple[int, ...]:
    """Minimal polynomial (ascending, monic implicit) of ``theta^g``.

    For a Pisot number the characteristic polynomial of ``theta^g`` is
    irreducible, since ``theta^g`` is the only root of modulus above one.  Its
    coefficients are recovered from the power sums ``P_k = p_{gk}`` by the
    inverse Newton identities.
    """
    d = len(coeffs)
    if g == 1:
        return tuple(int(c) for c in coeffs)
    ps = power_sums(coeffs, g * d + 1)
    P = [ps[g * k] for k in range(d + 1)]
    # e_k from P_k: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} P_i
    e = [Fraction(1)]
    for k in range(1, d + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * P[i] for i in range(1, k + 1))
        e.append(s / k)
    out = []
    for k in range(d, 0, -1):
        ck = (-1) ** k * e[k]
        if ck.denominator != 1:
            raise ArithmeticError("power sums do not define an integer polynomial")
        out.append(int(ck))
    return tuple(out)


def companion_matrix(coeffs_or_field) -> tuple[tuple[int, ...], ...]:
    """Companion matrix: ones on the superdiagonal, last row ``-a_0..-a_s``."""
    coeffs = getattr(coeffs_or_field, "coeffs", coeffs_or_field)
    d = len(coeffs)
    rows = []
    for i in range(d - 1):
        rows.append(tuple(1 if j == i + 1 else 0 for j in range(d)))
    rows.append(tuple(-int(c) for c in coeffs))
    return tuple(rows)


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class FieldElement:
    """``sum(num[i] * theta**i) / den`` with ``theta`` a root of ``modulus``.

    Instances are normalized on construction: ``den > 0`` and
    ``gcd(num..., den) == 1``.
    """

    num: tuple
    den: int
    modulus: tuple = dc_field(repr=False)

    def __post_init__(self):
        d = len(self.modulus)
        num = [int(v) for v in self.num]
        if len(num) > d:
            raise ValueError(f"{len(num)} coordinates for a degree-{d} field")
        num += [0] * (d - len(num))
        den = int(self.den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-v for v in num], -den
        g = math.gcd(den, *num)
        if g > 1:
            num, den = [v // g for v in num], den // g
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_coords(cls, coords: Sequence, modulus: Sequence[int]) -> "FieldElement":
        fr = [_as_fraction(c) for c in coords]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls(tuple(int(f * den) for f in fr), den, tuple(modulus))

    @classmethod
    def rational(cls, q, modulus: Sequence[int]) -> "FieldElement":
        return cls.from_coords([q], modulus)

    @classmethod
    def from_json(cls, data: dict, modulus: Sequence[int]) -> "FieldElement":
        return cls(tuple(data["num"]), data.get("den", 1), tuple(modulus))

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": self.den}

    # -- queries ----------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.modulus)

    def coords(self) -> list[Fraction]:
        return [Fraction(v, self.den) for v in self.num]

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_integral_basis(self) -> bool:
        """True when the element lies in Z[theta]."""
        return self.den == 1

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = []
        for i, v in enumerate(self.num):
            if v:
                terms.append(f"{v}" if i == 0 else f"{v}*t^{i}" if i > 1 else f"{v}*t")
        body = " + ".join(terms) or "0"
        return f"FieldElement(({body})/{self.den})" if self.den != 1 else f"FieldElement({body})"

    # -- arithmetic -------------------------------------------------------------

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("elements of different fields")
            return other
        return FieldElement.rational(_as_fraction(other), self.modulus)

    def __neg__(self):
        return FieldElement(tuple(-v for v in self.num), self.den, self.modulus)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        den = self.den * o.den
        num = tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num))
        return FieldElement(num, den, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            try:
                q = _as_fraction(other)
            except TypeError:
                return NotImplemented
            return FieldElement(tuple(v * q.numerator for v in self.num),
                                self.den * q.denominator, self.modulus)
        o = self._lift(other)
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    prod[i + j] += a * b
        _reduce(prod, self.modulus)
        return FieldElement(tuple(prod[:d]), self.den * o.den, self.modulus)

    __rmul__ = __mul__

    def mul_theta(self, k: int = 1) -> "FieldElement":
        """Multiply by ``theta**k`` (k may be negative)."""
        x = self
        c = self.modulus
        d = len(c)
        if k >= 0:
            for _ in range(k):
                top = x.num[-1]
                num = [0] + list(x.num[:-1])
                num = [num[i] - top * c[i] for i in range(d)]
                x = FieldElement(tuple(num), x.den, c)
            return x
        a0 = c[0]
        if a0 == 0:
            raise ZeroDivisionError("theta is not invertible")
        for _ in range(-k):
            # theta^-1 = -(theta^s + a_s theta^(s-1) + ... + a_1) / a_0
            # so x/theta = (x_0 * theta^-1) + x_1 + x_2 theta + ...
            x0 = x.num[0]
            num = list(x.num[1:]) + [0]
            num = [num[i] * a0 for i in range(d)]
            for i in range(d):
                num[i] -= x0 * (c[i + 1] if i + 1 < d else 1)
            x = FieldElement(tuple(num), x.den * a0, c)
        return x

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = self.degree
        # columns of the multiplication-by-self matrix
        cols = []
        basis = FieldElement((1,), 1, self.modulus)
        for i in range(d):
            cols.append((self * basis.mul_theta(i)).coords())
        A = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if A[r][col] != 0)
            A[col], A[piv] = A[piv], A[col]
            pv = A[col][col]
            A[col] = [v / pv for v in A[col]]
            for r in range(d):
                if r != col and A[r][col] != 0:
                    f = A[r][col]
                    A[r] = [a - f * b for a, b in zip(A[r], A[col])]
        return FieldElement.from_coords([A[i][d] for i in range(d)], self.modulus)

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self * self._lift(other).inverse()
        try:
            q = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self * (1 / q)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement((1,), 1, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def _reduce(prod: list[int], modulus: Sequence[int]) -> None:
    """Reduce an integer coefficient list in place modulo the monic Q."""
    d = len(modulus)
    for k in range(len(prod) - 1, d - 1, -1):
        top = prod[k]
        if top:
            prod[k] = 0
            base = k - d
            for i in range(d):
                prod[base + i] -= top * modulus[i]


# ---------------------------------------------------------------------------
# certified roots
# ---------------------------------------------------------------------------

def _horner(desc: Sequence[int], z: CertifiedComplex) -> CertifiedComplex:
    acc = CertifiedComplex(desc[0], 0, 0.0)
    for c in desc[1:]:
        acc = acc * z + c
    return acc


def _krawczyk(desc, ddesc, center: CertifiedComplex, rho: float):
    """Return a disc containing a unique root inside disc(center, rho), or None."""
    Z = CertifiedComplex(center.re, center.im, rho)
    Pz = _horner(desc, center)
    dPZ = _horner(ddesc, Z)
    dPz = _horner(ddesc, center)
    try:
        y = dPz.inverse()
    except ZeroDivisionError:
        return None
    Y = CertifiedComplex(y.re, y.im, 0.0)
    K = center - Y * Pz + (CertifiedComplex.one() - Y * dPZ) * (Z - center)
    # strict inclusion in the interior of Z
    widened = CertifiedComplex(K.re, K.im, K.rad * (1 + 2.0**-30) + 1e-300)
    if widened.rad < rho and Z.contains_ball(widened):
        return K
    return None


def _mpmath_to_mpfr(x) -> mpfr:
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    return mpfr(mpq(man * 2**exp) if exp >= 0 else mpq(man, 2**-exp))


def _approximate_roots(coeffs: Sequence[int], prec: int):
    desc = [1] + [int(c) for c in reversed(coeffs)]
    with mpmath.workprec(prec + 20):
        steps = 50
        while True:
            try:
                roots = mpmath.polyroots(desc, maxsteps=steps, extraprec=prec)
                break
            except mpmath.libmp.libhyper.NoConvergence:
                steps *= 4
                if steps > 5000:
                    raise PrecisionInsufficient("root finder did not converge")
        out = []
        with working_precision(prec):
          for r in roots:
              rc = mpmath.mpc(r)
              out.append((_mpmath_to_mpfr(rc.real), _mpmath_to_mpfr(rc.imag)))
    return out


def _is_reciprocal(coeffs: Sequence[int]) -> bool:
    full = _full_ascending(coeffs)
    return full == full[::-1] or full == [-c for c in full[::-1]]


def _check_irreducible(coeffs: Sequence[int]) -> str:
    """Raise ReducibleDetected when a factor is found; return how it was settled."""
    d = len(coeffs)
    a0 = int(coeffs[0])
    if d == 1:
        return "linear"
    if a0 == 0:
        raise ReducibleDetected("X divides the polynomial")
    for r in _divisors(a0):
        for cand in (r, -r):
            if _eval_int(coeffs, Fraction(cand)) == 0:
                raise ReducibleDetected(f"rational root {cand}")
    if d <= 3:
        return "no rational root"
    if d == 4:
        a1, a2, a3 = (int(c) for c in coeffs[1:])
        # (X^2 + b X + c)(X^2 + e X + f): c f = a0, b + e = a3,
        # c + f + b e = a2, b f + c e = a1
        for c in _divisors(a0) + [-v for v in _divisors(a0)]:
            f = a0 // c
            disc = a3 * a3 - 4 * (a2 - c - f)
            if disc < 0:
                continue
            sq = math.isqrt(disc)
            if sq * sq != disc:
                continue
            for b2 in (a3 + sq, a3 - sq):
                if b2 % 2:
                    continue
                b = b2 // 2
                e = a3 - b
                if b * f + c * e == a1:
                    raise ReducibleDetected(
                        f"factor X^2 + {b}X + {c} times X^2 + {e}X + {f}")
        return "exhaustive quadratic factor search"
    # a monic integer factor not containing theta would have all roots in the
    # open unit disc, hence constant term 0; a0 != 0 excludes this
    return "root pattern"


def _isolate(coeffs: Sequence[int], prec: int):
    """Certified, pairwise disjoint discs for all roots, or None on failure.

    Returns (real_discs, pair_discs) where real discs have real centers and
    pair discs are the members with positive imaginary part.
    """
    d = len(coeffs)
    desc = [1] + [int(c) for c in reversed(coeffs)]
    ddesc = [(d - i) * desc[i] for i in range(d)]
    approx = _approximate_roots(coeffs, prec)
    with working_precision(prec):
        # decide real or non-real from the approximation; certified below
        scale = mpfr(2) ** (-(prec // 2))
        reals, uppers = [], []
        for re, im in approx:
            mag = max(abs(re), 1)
            if abs(im) <= scale * mag:
                reals.append(re)
            elif im > 0:
                uppers.append((re, im))
        if len(reals) + 2 * len(uppers) != d:
            return None
        discs_real, discs_pair = [], []

        def certify(re, im):
            c = CertifiedComplex(re, im, 0.0)
            # a few Newton steps at full precision
            for _ in range(8):
                Pz = _horner(desc, c)
                dPz = _horner(ddesc, c)
                try:
                    step = Pz * dPz.inverse()
                except ZeroDivisionError:
                    return None
                c = CertifiedComplex(c.re - step.re, mpfr(0) if im == 0 else c.im - step.im, 0.0)
            Pz, dPz = _horner(desc, c), _horner(ddesc, c)
            try:
                delta = (Pz * dPz.inverse()).abs_upper()
            except ZeroDivisionError:
                return None
            zmag = max(1.0, abs(complex(c)))
            rho = max(4 * delta, math.ldexp(zmag, 12 - prec))
            for _ in range(12):
                K = _krawczyk(desc, ddesc, c, rho)
                if K is not None:
                    return K
                rho *= 16
            return None

        for re in reals:
            K = certify(re, mpfr(0))
            if K is None:
                return None
            # the root is real and lies in K, so the real-centered disc holds it
            discs_real.append(CertifiedComplex(K.re, 0, K.rad))
        for re, im in uppers:
            K = certify(re, im)
            if K is None or not abs(mpq(K.im)) > mpq(K.rad):
                return None
            discs_pair.append(K)
        all_discs = discs_real + discs_pair + [k.conjugate() for k in discs_pair]
        for i in range(len(all_discs)):
            for j in range(i + 1, len(all_discs)):
                if all_discs[i].overlaps(all_discs[j]):
                    return None
    return discs_real, discs_pair


def _inside_unit(disc: CertifiedComplex) -> bool:
    r = mpq(*float(disc.rad).as_integer_ratio())
    if r >= 1:
        return False
    return mpq(disc.re) ** 2 + mpq(disc.im) ** 2 < (1 - r) ** 2


def _outside_unit(disc: CertifiedComplex) -> bool:
    r = mpq(*float(disc.rad).as_integer_ratio())
    return mpq(disc.re) ** 2 + mpq(disc.im) ** 2 > (1 + r) ** 2


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    """Outcome of the T(theta) test; ``threshold`` is m0 for members."""

    member: bool
    threshold: int | None = None

    def __bool__(self) -> bool:
        return self.member


@dataclass(frozen=True, eq=False)
class PisotField:
    """Q[theta] for a certified Pisot number theta.

    Use :func:`verify_pisot` to build one.  ``conjugates`` lists the discs
    for alpha_1..alpha_s: real conjugates first (descending), then each
    non-real pair with the positive-imaginary member first.
    """

    coeffs: tuple
    theta: CertifiedReal
    conjugates: tuple
    precision_bits: int
    irreducibility: str = "root pattern"

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def theta_enclosure(self) -> CertifiedReal:
        return self.theta

    @property
    def conjugate_enclosures(self) -> tuple:
        return self.conjugates

    def __eq__(self, other):
        return isinstance(other, PisotField) and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PisotField(coeffs={self.coeffs}, theta~{float(self.theta.mid):.12g}, bits={self.precision_bits})"

    # -- elements ---------------------------------------------------------------

    def element(self, num, den: int = 1) -> FieldElement:
        if isinstance(num, Integral):
            num = (num,)
        return FieldElement(tuple(num), den, self.coeffs)

    def from_coords(self, coords) -> FieldElement:
        return FieldElement.from_coords(coords, self.coeffs)

    def rational(self, q) -> FieldElement:
        return FieldElement.rational(q, self.coeffs)

    def one(self) -> FieldElement:
        return self.element((1,))

    def zero(self) -> FieldElement:
        return self.element((0,))

    def theta_power(self, n: int) -> FieldElement:
        """``theta**n``; negative n gives powers of lambda = 1/theta."""
        return self.one().mul_theta(n)

    def lam(self) -> FieldElement:
        return self.theta_power(-1)

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.modulus != self.coeffs:
                raise ValueError("element belongs to a different field")
            return x
        return self.rational(x)

    # -- exact invariants ----------------------------------------------------------

    def power_sum(self, n: int) -> int:
        return power_sums(self.coeffs, n + 1)[n]

    def trace(self, x) -> Fraction:
        x = self.coerce(x)
        ps = power_sums(self.coeffs, self.degree)
        return Fraction(sum(v * p for v, p in zip(x.num, ps)), x.den)

    def trace_vector(self, x) -> list[Fraction]:
        """``(Tr(x), Tr(theta x), ..., Tr(theta^s x))``."""
        x = self.coerce(x)
        d = self.degree
        ps = power_sums(self.coeffs, 2 * d)
        return [Fraction(sum(x.num[i] * ps[i + k] for i in range(d)), x.den) for k in range(d)]

    def in_T(self, x) -> Membership:
        """Decide whether ``Tr(theta^n x)`` is an integer for all large n.

        The trace vectors ``W_n = (t_n, ..., t_{n+s})`` with
        ``t_n = Tr(theta^n x)`` obey the integral companion recursion, so the
        scaled residues ``D W_n mod D`` live in a finite set.  Once a residue
        repeats the sequence is periodic; zero is a fixed point, so x belongs
        to T(theta) iff the zero residue is reached, and the first such n is
        the threshold ``m0`` (counted from n = 0).
        """
        W = self.trace_vector(x)
        D = math.lcm(*(w.denominator for w in W))
        if D == 1:
            return Membership(True, 0)
        c = self.coeffs
        d = len(c)
        state = tuple(int(w * D) % D for w in W)
        seen = {state: 0}
        n = 0
        while True:
            if not any(state):
                return Membership(True, n)
            nxt = -sum(c[i] * state[i] for i in range(d)) % D
            state = state[1:] + (nxt,)
            n += 1
            if state in seen:
                return Membership(False, None)
            seen[state] = n

    def threshold(self, x) -> int:
        """m0 for a member of T(theta); raises DualLatticeViolation otherwise."""
        from .errors import DualLatticeViolation

        m = self.in_T(x)
        if not m.member:
            raise DualLatticeViolation(f"{x!r} is not in T(theta)")
        return m.threshold

    def minimal_polynomial_of_power(self, g: int) -> tuple[int, ...]:
        return power_minimal_polynomial(self.coeffs, g)

    def rebase(self, x: FieldElement, g: int, target: "PisotField") -> FieldElement:
        """Coordinates of x in the power basis of ``theta**g`` (the field ``target``)."""
        x = self.coerce(x)
        d = self.degree
        # columns: (theta^g)^i in the theta basis
        tg = self.theta_power(g)
        cols, cur = [], self.one()
        for _ in range(d):
            cols.append(cur.coords())
            cur = cur * tg
        A = [[cols[j][i] for j in range(d)] + [x.coords()[i]] for i in range(d)]
        for col in range(d):
            piv = next((r for r in range(col, d) if A[r][col] != 0), None)
            if piv is None:
                raise ArithmeticError("theta^g does not generate the field")
            A[col], A[piv] = A[piv], A[col]
            pv = A[col][col]
            A[col] = [v / pv for v in A[col]]
            for r in range(d):
                if r != col and A[r][col] != 0:
                    f = A[r][col]
                    A[r] = [a - f * b for a, b in zip(A[r], A[col])]
        return target.from_coords([A[i][d] for i in range(d)])

    # -- embeddings ---------------------------------------------------------------

    def root(self, j: int):
        """Enclosure of the j-th root: theta for j = 0, alpha_j otherwise."""
        if j == 0:
            return CertifiedComplex(self.theta.mid, 0, self.theta.rad)
        return self.conjugates[j - 1]

    def embed(self, x, j: int, tol: float | None = None) -> CertifiedComplex:
        """Ball for ``x^(j)``: the image of x under theta -> root j."""
        x = self.coerce(x)
        if not 0 <= j < self.degree:
            raise IndexError(f"embedding index {j} out of range")
        if x.is_rational():
            with working_precision(self.precision_bits):
                out = CertifiedComplex.from_value(CertifiedReal.from_value(Fraction(x.num[0], x.den)))
        else:
            with working_precision(self.precision_bits):
                z = self.root(j)
                acc = CertifiedComplex(x.num[-1], 0, 0.0)
                for v in reversed(x.num[:-1]):
                    acc = acc * z + v
                out = acc.scale(CertifiedReal.from_value(Fraction(1, x.den)))
                if j == 0:
                    out = CertifiedComplex(out.re, 0, out.rad)
        if tol is not None and out.rad > tol:
            raise PrecisionInsufficient(
                f"embedding radius {out.rad:.3g} exceeds {tol:.3g} at {self.precision_bits} bits")
        return out

    def real_value(self, x) -> CertifiedReal:
        return self.embed(x, 0).real

    def embeddings(self, x) -> list[CertifiedComplex]:
        return [self.embed(x, j) for j in range(self.degree)]

    def power_mod_one(self, x, n: int, threshold: int | None = None) -> CertifiedComplex:
        """``theta^n x`` modulo 1 as ``-sum_j x^(j) alpha_j^n``.

        For n at or past the T-threshold m0 of x, ``Tr(theta^n x)`` is an
        integer, so this small conjugate sum differs from ``theta^n x`` by an
        integer.  The representative is not reduced further.
        """
        x = self.coerce(x)
        m0 = self.threshold(x) if threshold is None else threshold
        if n < m0:
            raise ThresholdViolation(f"exponent {n} is below the threshold {m0}")
        if x.is_zero() or self.degree == 1:
            return CertifiedComplex(0, 0, 0.0)
        with working_precision(self.precision_bits):
            total = CertifiedComplex(0, 0, 0.0)
            for j in range(1, self.degree):
                total = total + self.embed(x, j) * (self.conjugates[j - 1] ** n)
            # the exact value is real; projecting the center keeps it enclosed
            return CertifiedComplex(-total.re, 0, total.rad)

    def refine(self, bits: int) -> "PisotField":
        """The same field with enclosures recomputed at ``bits`` of precision."""
        finer = verify_pisot(self.coeffs, bits)
        return finer


# ---------------------------------------------------------------------------
# public functional API
# ---------------------------------------------------------------------------

def verify_pisot(coeffs: Sequence[int], precision: int = DEFAULT_PRECISION,
                 max_precision: int = MAX_PRECISION) -> PisotField:
    """Certify that ``X^(s+1) + a_s X^s + ... + a_0`` has a Pisot root.

    Raises NotPisot when the root pattern is certified wrong,
    ReducibleDetected when a factor is found, and PrecisionInsufficient when
    some root cannot be separated from the unit circle below
    ``max_precision`` bits.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if not coeffs:
        raise ValueError("need at least one coefficient")
    d = len(coeffs)
    if d == 1:
        theta = -coeffs[0]
        if theta <= 1:
            raise NotPisot(f"root {theta} is not > 1")
        with working_precision(precision):
            return PisotField(coeffs, CertifiedReal.from_value(theta), (), precision, "linear")
    how = _check_irreducible(coeffs)
    if d > 2 and _is_reciprocal(coeffs):
        raise NotPisot("reciprocal polynomial: roots come in pairs r, 1/r")
    prec = max(int(precision), 53)
    while True:
        iso = _isolate(coeffs, prec + 32)
        if iso is not None:
            reals, pairs = iso
            big = [r for r in reals if mpq(r.re) - mpq(*r.rad.as_integer_ratio()) > 1]
            rest_real = [r for r in reals if r not in big]
            others = rest_real + pairs
            if not big:
                if all(_inside_unit(r) or _outside_unit(r) for r in reals + pairs):
                    raise NotPisot("no real root greater than 1")
            elif len(big) > 1 or any(_outside_unit(o) for o in others):
                raise NotPisot("a conjugate lies outside the unit disc")
            elif all(_inside_unit(o) for o in others):
                with working_precision(prec + 32):
                    theta = CertifiedReal(big[0].re, big[0].rad)
                    conj = sorted(rest_real, key=lambda z: -float(z.re))
                    pairs_sorted = sorted(pairs, key=lambda z: (-abs(complex(z)), float(z.im)))
                    for z in pairs_sorted:
                        conj.append(z)
                        conj.append(z.conjugate())
                return PisotField(coeffs, theta, tuple(conj), prec + 32, how)
        if prec >= max_precision:
            raise PrecisionInsufficient(
                f"could not separate the roots from the unit circle at {prec} bits")
        prec = min(2 * prec, max_precision)


def trace(field: PisotField, x) -> Fraction:
    return field.trace(x)


def in_T(field: PisotField, x) -> Membership:
    return field.in_T(x)


def embed(field: PisotField, x, j: int, tol: float | None = None) -> CertifiedComplex:
    return field.embed(x, j, tol)


def power_mod_one(field: PisotField, x, n: int) -> CertifiedComplex:
    return field.power_mod_one(x, n)
