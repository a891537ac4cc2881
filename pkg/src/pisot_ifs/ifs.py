"""Affine iterated function systems, generic and in Pisot form.

A Pisot-form system is ``phi_k(x) = lambda**n_k * x + mu_k`` where
``1/lambda = theta`` is a Pisot number, the integer exponents are coprime and
every translation lies in T(theta).  This module validates such systems,
canonicalizes them, computes similarity dimensions and runs the
screening predicates for degenerate and uniqueness cases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Integral, Rational
from typing import Sequence

from gmpy2 import mpfr, mpq

from .balls import CertifiedReal, working_precision
from .errors import (
    DriftNonPositive,
    InvalidSystem,
    MalformedDecomposition,
    NoCommonFixedPoint,
    NoCrossing,
    NotInDualLattice,
    NotStrictContraction,
    PrecisionInsufficient,
)
from .numberfield import FieldElement, PisotField, verify_pisot

__all__ = [
    "ProbabilityVector",
    "GenericSystem",
    "PisotFormSystem",
    "DimensionResult",
    "DensityVerdict",
    "UniquenessVerdict",
    "Decomposition",
    "canonicalize",
    "similarity_dimension",
    "dimension_threshold_roots",
    "common_fixed_point",
    "degenerate_limit",
    "bounded_density_screen",
    "classify_uniqueness",
    "rationality_screen",
    "field_sign",
]


def _exact(x):
    """Fraction for exact scalar input; floats are read through their repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def field_sign(field: PisotField, x: FieldElement, max_bits: int = 4096) -> int:
    """Exact sign of the real embedding of a field element."""
    if x.is_zero():
        return 0
    f = field
    while True:
        s = f.real_value(x).sign()
        if s is not None:
            return s
        if f.precision_bits >= max_bits:
            raise PrecisionInsufficient("cannot decide the sign of a nonzero element")
        f = f.refine(min(2 * f.precision_bits, max_bits))


# ---------------------------------------------------------------------------
# probability vectors
# ---------------------------------------------------------------------------

class ProbabilityVector:
    """Weights ``p_0..p_N`` on the closed simplex.

    Entries are Fractions, elements of the Pisot field (real embedding), or
    :class:`CertifiedReal` balls.  Exact entries must sum to exactly one.
    """

    __slots__ = ("entries", "field")

    def __init__(self, entries: Sequence, field: PisotField | None = None):
        vals = []
        for e in entries:
            if isinstance(e, (FieldElement, CertifiedReal)):
                vals.append(e)
            elif isinstance(e, dict):
                if field is None:
                    raise InvalidSystem("field-valued probabilities need a Pisot field")
                vals.append(FieldElement.from_json(e, field.coeffs))
            else:
                try:
                    vals.append(_exact(e))
                except (TypeError, ValueError, ZeroDivisionError) as exc:
                    raise InvalidSystem(f"bad probability {e!r}") from exc
        if len(vals) < 1:
            raise InvalidSystem("empty probability vector")
        if any(isinstance(v, FieldElement) for v in vals):
            if field is None:
                raise InvalidSystem("field-valued probabilities need a Pisot field")
            vals = [field.coerce(v) if isinstance(v, FieldElement) else v for v in vals]
        self.entries = tuple(vals)
        self.field = field
        self._validate()

    def _validate(self):
        if self.is_exact:
            total = sum(self.entries[1:], self.entries[0])
            if isinstance(total, FieldElement):
                ok = total == self.field.one()
            else:
                ok = total == 1
            if not ok:
                raise InvalidSystem(f"probabilities sum to {total}, not 1")
        else:
            total = sum(self.balls()[1:], self.balls()[0])
            if not total.contains(1):
                raise InvalidSystem("probabilities do not sum to 1 within their radii")
        for j, e in enumerate(self.entries):
            if self._sign(j) < 0:
                raise InvalidSystem(f"p_{j} is negative")

    def _sign(self, j: int) -> int:
        e = self.entries[j]
        if isinstance(e, Fraction):
            return (e > 0) - (e < 0)
        if isinstance(e, FieldElement):
            return field_sign(self.field, e)
        if e.mid == 0 and e.rad == 0:
            return 0
        s = e.sign()
        if s is None:
            if e.upper() < 0:
                return -1
            raise InvalidSystem(f"sign of p_{j} is undetermined")
        return s

    # -- queries ------------------------------------------------------------

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    def __eq__(self, other):
        return isinstance(other, ProbabilityVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ProbabilityVector({[str(e) if isinstance(e, Fraction) else e for e in self.entries]})"

    @property
    def is_exact(self) -> bool:
        return all(isinstance(e, (Fraction, FieldElement)) for e in self.entries)

    def is_zero(self, j: int) -> bool:
        return self._sign(j) == 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(len(self)) if not self.is_zero(j))

    @property
    def interior(self) -> bool:
        return len(self.support) == len(self)

    def ball(self, j: int) -> CertifiedReal:
        e = self.entries[j]
        if isinstance(e, CertifiedReal):
            return e
        if isinstance(e, FieldElement):
            return self.field.real_value(e)
        return CertifiedReal.from_value(e)

    def balls(self) -> list[CertifiedReal]:
        return [self.ball(j) for j in range(len(self))]

    def permuted(self, perm: Sequence[int]) -> "ProbabilityVector":
        return ProbabilityVector([self.entries[i] for i in perm], self.field)

    def to_json(self) -> list:
        out = []
        for e in self.entries:
            if isinstance(e, Fraction):
                out.append(str(e))
            elif isinstance(e, FieldElement):
                out.append(e.to_json())
            else:
                out.append({"mid": float(e.mid), "radius": e.rad})
        return out


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericSystem:
    """Maps ``phi_k(x) = r_k x + b_k``; r and b are exact rationals.

    ``exact_input`` records whether the ratios were supplied exactly (ints or
    "a/b" strings) rather than as binary floats.
    """

    r: tuple
    b: tuple
    p: ProbabilityVector
    exact_input: bool = False

    def __post_init__(self):
        if len(self.r) != len(self.b) or len(self.r) != len(self.p):
            raise InvalidSystem("maps and probabilities have different lengths")
        if len(self.r) < 2:
            raise InvalidSystem("need at least two maps")
        if any(r <= 0 for r in self.r):
            raise InvalidSystem("all ratios must be positive")
        if not any(r < 1 for r in self.r):
            raise InvalidSystem("no contracting map")
        with working_precision(128):
            lyap = sum((self.p.ball(j) * CertifiedReal.from_value(self.r[j]).log()
                        for j in range(len(self.r))), CertifiedReal(0))
        if lyap.sign() != -1:
            raise InvalidSystem("the system is not contracting on average")

    @classmethod
    def from_maps(cls, maps: Sequence[tuple], p) -> "GenericSystem":
        exact = all(not isinstance(r, float) for r, _ in maps)
        r = tuple(_exact(m[0]) for m in maps)
        b = tuple(_exact(m[1]) for m in maps)
        if not isinstance(p, ProbabilityVector):
            p = ProbabilityVector(p)
        return cls(r, b, p, exact)

    @property
    def N(self) -> int:
        return len(self.r) - 1


@dataclass(frozen=True)
class PisotFormSystem:
    """``phi_k(x) = lambda**exps[k] * x + mus[k]`` with ``1/lambda`` Pisot.

    Build instances through :func:`canonicalize`, which enforces the
    invariants and records the T-thresholds of the translations.
    """

    field: PisotField
    exps: tuple
    mus: tuple
    p: ProbabilityVector
    thresholds: tuple

    @property
    def N(self) -> int:
        return len(self.exps) - 1

    @property
    def m0(self) -> int:
        return max(self.thresholds)

    @property
    def n_min(self) -> int:
        return min(self.exps)

    @property
    def n_star(self) -> int:
        return max(self.exps)

    @property
    def strict(self) -> bool:
        return all(n >= 1 for n in self.exps)

    def require_strict(self):
        if not self.strict:
            raise NotStrictContraction(f"exponents {self.exps} are not all >= 1")

    def lam(self) -> FieldElement:
        return self.field.lam()

    def ratio(self, k: int) -> FieldElement:
        return self.field.theta_power(-self.exps[k])

    def drift(self):
        """``sum p_j n_j`` exactly when p is exact, otherwise as a ball."""
        if self.p.is_exact:
            total = 0
            for pj, nj in zip(self.p, self.exps):
                total = pj * nj + total
            return total
        return self.drift_ball()

    def drift_ball(self) -> CertifiedReal:
        total = CertifiedReal(0)
        for j, nj in enumerate(self.exps):
            total = total + self.p.ball(j) * nj
        return total

    def with_p(self, p) -> "PisotFormSystem":
        if not isinstance(p, ProbabilityVector):
            p = ProbabilityVector(p, self.field)
        if len(p) != len(self.exps):
            raise InvalidSystem("probability vector has the wrong length")
        sys = replace(self, p=p)
        _check_drift(sys)
        return sys

    def with_mus(self, mus: Sequence[FieldElement]) -> "PisotFormSystem":
        return canonicalize(self.field, self.exps, mus, self.p)

    def scaled(self, alpha: FieldElement) -> "PisotFormSystem":
        """The system with every translation multiplied by ``alpha``."""
        return self.with_mus([alpha * mu for mu in self.mus])

    def support_bound(self) -> CertifiedReal:
        """``B = max_k |mu_k| / (1 - lambda**n_min)`` bounding |X|."""
        self.require_strict()
        with working_precision(self.field.precision_bits):
            mags = []
            for mu in self.mus:
                v = self.field.real_value(mu)
                mags.append((v if field_sign(self.field, mu) >= 0 else -v).upper_float())
            lam_n = self.field.real_value(self.field.theta_power(-self.n_min))
            denom = 1 - lam_n
            return CertifiedReal.from_value(max(mags)) / denom

    def permuted(self, perm: Sequence[int]) -> "PisotFormSystem":
        return canonicalize(self.field, [self.exps[i] for i in perm],
                            [self.mus[i] for i in perm], self.p.permuted(perm))

    def __repr__(self):
        return (f"PisotFormSystem(poly={self.field.coeffs}, exps={self.exps}, "
                f"mus={list(self.mus)}, p={self.p!r}, m0={self.m0})")


def _check_drift(system: PisotFormSystem):
    d = system.drift()
    if isinstance(d, FieldElement):
        positive = field_sign(system.field, d) > 0
    elif isinstance(d, CertifiedReal):
        positive = d.sign() == 1
    else:
        positive = d > 0
    if not positive:
        raise DriftNonPositive("sum p_j n_j must be positive")


def canonicalize(field: PisotField, exps: Sequence[int], mus: Sequence, p) -> PisotFormSystem:
    """Validate a Pisot-form system and reduce its exponents to gcd 1.

    When ``g = gcd(exps) > 1`` the field is replaced by that of ``theta**g``
    (minimal polynomial from power sums, re-verified Pisot), the exponents
    are divided by g and all elements are rewritten in the new basis.
    """
    exps = tuple(int(n) for n in exps)
    if len(exps) < 2:
        raise InvalidSystem("need at least two maps")
    if len(mus) != len(exps):
        raise InvalidSystem("exponents and translations have different lengths")
    if not any(exps):
        raise InvalidSystem("exponents are all zero")
    mus = tuple(field.coerce(mu) for mu in mus)
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector(p, field)
    if len(p) != len(exps):
        raise InvalidSystem("probability vector has the wrong length")
    g = math.gcd(*exps)
    if g > 1:
        new_field = verify_pisot(field.minimal_polynomial_of_power(g), field.precision_bits)
        mus = tuple(field.rebase(mu, g, new_field) for mu in mus)
        entries = [field.rebase(e, g, new_field) if isinstance(e, FieldElement) else e
                   for e in p.entries]
        p = ProbabilityVector(entries, new_field)
        exps = tuple(n // g for n in exps)
        field = new_field
    elif p.field is not field and any(isinstance(e, FieldElement) for e in p.entries):
        p = ProbabilityVector(p.entries, field)
    elif p.field is None:
        p = ProbabilityVector(p.entries, field)
    thresholds = []
    for k, mu in enumerate(mus):
        m = field.in_T(mu)
        if not m.member:
            raise NotInDualLattice(k)
        thresholds.append(m.threshold)
    system = PisotFormSystem(field, exps, mus, p, tuple(thresholds))
    _check_drift(system)
    return system


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionResult:
    value: CertifiedReal
    boundary: bool

    def __float__(self):
        return float(self.value)


def _entropy_and_lyapunov(system):
    p = system.p
    H = CertifiedReal(0)
    L = CertifiedReal(0)
    if isinstance(system, PisotFormSystem):
        log_theta = system.field.theta.log()
        for j in p.support:
            pj = p.ball(j)
            H = H - pj * pj.log()
            L = L + pj * (log_theta * system.exps[j])
    else:
        for j in p.support:
            pj = p.ball(j)
            H = H - pj * pj.log()
            L = L - pj * CertifiedReal.from_value(system.r[j]).log()
    return H, L


def similarity_dimension(system, precision: int = 128) -> DimensionResult:
    """``s(p, r) = (-sum p log p) / (-sum p log r)`` with 0 log 0 = 0."""
    with working_precision(precision):
        H, L = _entropy_and_lyapunov(system)
        return DimensionResult(H / L, not system.p.interior)


def _threshold_function(x: mpfr, n0: int, n1: int, log_lam: CertifiedReal) -> CertifiedReal:
    # x = p_0; f < 0 exactly where the similarity dimension exceeds one
    p0 = CertifiedReal(x)
    p1 = 1 - p0
    return p0 * p0.log() + p1 * p1.log() - (p0 * n0 + p1 * n1) * log_lam


def dimension_threshold_roots(system: PisotFormSystem, tol: float = 1e-15,
                              precision: int = 128):
    """The two values of p_0 where ``s(p, lambda) = 1`` (two maps).

    With ``S = lambda**n_0 + lambda**n_1`` the function
    ``f(p) = sum p log p - (sum p n) log lambda`` is strictly convex with
    minimum ``-log S`` at ``p = (lambda**n_0, lambda**n_1) / S``.  The sign of
    ``S - 1`` is decided exactly in the field: below one there is no
    crossing, at one both roots merge into the tangency point, above one the
    roots on each side of the minimum are bracketed and bisected.
    """
    if len(system.exps) != 2:
        raise InvalidSystem("threshold roots are defined for two maps")
    system.require_strict()
    F = system.field
    n0, n1 = system.exps
    S = F.theta_power(-n0) + F.theta_power(-n1)
    sgn = field_sign(F, S - 1)
    if sgn < 0:
        raise NoCrossing("lambda^n0 + lambda^n1 < 1: the dimension never exceeds one")
    with working_precision(precision):
        if sgn == 0:
            tangent = F.real_value(F.theta_power(-n0))
            return tangent, tangent
        log_lam = -F.theta.log()
        xstar = F.real_value(F.theta_power(-n0) / S).mid
        if _threshold_function(xstar, n0, n1, log_lam).sign() != -1:
            raise PrecisionInsufficient("minimum of the threshold function not certified negative")

        def bisect(a: mpfr, b: mpfr, sign_a: int) -> CertifiedReal:
            # invariant: f(a) has sign sign_a, f(b) the opposite sign
            while True:
                half = (b - a) / 2
                if float(abs(half)) <= tol:
                    break
                m = a + half
                s = _threshold_function(m, n0, n1, log_lam).sign()
                if s is None:
                    break
                if s == sign_a:
                    a = m
                else:
                    b = m
            lo, hi = (a, b) if a < b else (b, a)
            mid = (lo + hi) / 2
            rad = float(max(mpq(hi) - mpq(mid), mpq(mid) - mpq(lo))) * (1 + 2.0**-40)
            return CertifiedReal(mid, rad + 1e-300)

        # f(0+) = n1 log(1/lambda) > 0 and f(1-) = n0 log(1/lambda) > 0
        eps = mpfr(2) ** (-precision // 2)
        lo_edge, hi_edge = eps, 1 - eps
        if _threshold_function(lo_edge, n0, n1, log_lam).sign() != 1 or \
                _threshold_function(hi_edge, n0, n1, log_lam).sign() != 1:
            raise PrecisionInsufficient("threshold roots too close to the simplex boundary")
        low = bisect(lo_edge, xstar, 1)
        high = bisect(hi_edge, xstar, 1)
        return low, high


# ---------------------------------------------------------------------------
# degenerate systems
# ---------------------------------------------------------------------------

def common_fixed_point(system):
    """The common fixed point of all maps, or None."""
    if isinstance(system, GenericSystem):
        for rk, bk in zip(system.r, system.b):
            if rk != 1:
                c = bk / (1 - rk)
                break
        else:
            return None
        ok = all(bk == c * (1 - rk) for rk, bk in zip(system.r, system.b))
        return c if ok else None
    F = system.field
    c = None
    for n, mu in zip(system.exps, system.mus):
        if n != 0:
            c = mu / (F.one() - F.theta_power(-n))
            break
    if c is None:
        return None
    for n, mu in zip(system.exps, system.mus):
        if mu != c * (F.one() - F.theta_power(-n)):
            return None
    return c


def degenerate_limit(system: PisotFormSystem) -> Fraction:
    """Limit of ``lambda**-n * c mod 1`` for the common fixed point c.

    Since ``theta**n c = Tr(theta**n c) - sum_j c^(j) alpha_j**n`` and the
    conjugate sum tends to 0, the limit is the eventual constant value of
    ``Tr(theta**n c) mod 1``.  The first K where that value repeats over
    ``K .. K + 2(s+1)`` is used; d + 1 equal consecutive values already force
    the linear recurrence to be constant from there on.
    """
    c = common_fixed_point(system)
    if c is None:
        raise NoCommonFixedPoint("the maps have no common fixed point")
    F = system.field
    d = F.degree
    window = 2 * d + 1
    traces = F.trace_vector(c)
    vals = [t % 1 for t in traces]
    coeffs = F.coeffs

    def extend():
        nxt = -sum(coeffs[i] * traces[len(traces) - d + i] for i in range(d))
        traces.append(nxt)
        vals.append(nxt % 1)

    # the residues are eventually periodic with period dividing a bounded
    # number; the theory guarantees the limit exists, so cap generously
    D = math.lcm(*(t.denominator for t in traces))
    cap = 4 * d + 64 + D ** min(d, 3)
    K = 0
    while True:
        while len(vals) < K + window:
            extend()
        if all(v == vals[K] for v in vals[K:K + window]):
            return vals[K]
        K += 1
        if K > cap:
            raise ArithmeticError("trace residues do not stabilize")


# ---------------------------------------------------------------------------
# screening predicates
# ---------------------------------------------------------------------------

class DensityVerdict(str, enum.Enum):
    POSSIBLY_AC = "possibly_ac"
    CERTAINLY_SINGULAR_IF_AC_BOUNDED = "certainly_singular_if_ac_bounded"


class UniquenessVerdict(str, enum.Enum):
    U_SET_CERTIFIED = "U_set_certified"
    M_SET_CERTIFIED = "M_set_certified"
    UNDETERMINED = "undetermined"


def _exceeds(system, j: int) -> bool:
    """Certified ``p_j > r_j``; undecidable ball comparisons count as False."""
    pj = system.p[j]
    if isinstance(system, GenericSystem):
        rj = system.r[j]
        if isinstance(pj, CertifiedReal):
            return (pj - CertifiedReal.from_value(rj)).sign() == 1
        return pj > rj
    F = system.field
    rj = system.ratio(j)
    if isinstance(pj, CertifiedReal):
        return (pj - F.real_value(rj)).sign() == 1
    return field_sign(F, F.coerce(pj) - rj) > 0


def bounded_density_screen(system) -> DensityVerdict:
    """Flag weights that rule out a bounded density (``p_j > r_j``)."""
    if isinstance(system, PisotFormSystem):
        system.require_strict()
    if any(_exceeds(system, j) for j in range(len(system.p))):
        return DensityVerdict.CERTAINLY_SINGULAR_IF_AC_BOUNDED
    return DensityVerdict.POSSIBLY_AC


@dataclass(frozen=True)
class Decomposition:
    """``b_k = b * a_k + c * (1 - lambda**n_k)`` with exact b, c, a_k."""

    b: object
    c: object
    a: tuple


def _prime_exponents(q: Fraction) -> dict[int, int]:
    out: dict[int, int] = {}
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        m, f = n, 2
        while f * f <= m:
            while m % f == 0:
                out[f] = out.get(f, 0) + sign
                m //= f
            f += 1
        if m > 1:
            out[m] = out.get(m, 0) + sign
    return out


def _log_ratio_irrational(r1: Fraction, r2: Fraction) -> bool:
    """True iff log r1 / log r2 is provably irrational, for rationals in (0,1).

    ``log r1 / log r2 = u/v`` means ``r1**v = r2**u``, i.e. proportional prime
    exponent vectors.
    """
    e1, e2 = _prime_exponents(r1), _prime_exponents(r2)
    primes = sorted(set(e1) | set(e2))
    v1 = [e1.get(q, 0) for q in primes]
    v2 = [e2.get(q, 0) for q in primes]
    for i in range(len(primes)):
        for j in range(i + 1, len(primes)):
            if v1[i] * v2[j] != v1[j] * v2[i]:
                return True
    return False


def classify_uniqueness(system, decomposition: Decomposition | None = None) -> UniquenessVerdict:
    """Set-of-uniqueness screen for the attractor F mod 1.

    Pisot-form systems with a matching decomposition are checked against
    the U-set criterion: ``1/lambda > N + 2``, coprime exponents >= 1,
    ``a_k >= 0``, ``b >= 0`` and ``sup bG <= b max a_k / (1 - lambda**n_min) < 1``.
    Generic systems are certified M-sets only from exact rational ratios
    with a provably irrational log-ratio and no common fixed point.
    """
    if isinstance(system, GenericSystem):
        if any(not 0 < r < 1 for r in system.r):
            return UniquenessVerdict.UNDETERMINED
        if not system.exact_input or common_fixed_point(system) is not None:
            return UniquenessVerdict.UNDETERMINED
        rs = system.r
        for i in range(len(rs)):
            for j in range(i + 1, len(rs)):
                if _log_ratio_irrational(rs[i], rs[j]):
                    return UniquenessVerdict.M_SET_CERTIFIED
        return UniquenessVerdict.UNDETERMINED

    system.require_strict()
    F = system.field
    if decomposition is None:
        return UniquenessVerdict.UNDETERMINED
    b = F.coerce(decomposition.b)
    c = F.coerce(decomposition.c)
    a = [F.coerce(v) for v in decomposition.a]
    if len(a) != len(system.mus):
        raise MalformedDecomposition("one a_k per map is required")
    for k, (mu, n) in enumerate(zip(system.mus, system.exps)):
        if mu != b * a[k] + c * (F.one() - F.theta_power(-n)):
            raise MalformedDecomposition(f"b_{k} does not match b*a_k + c*(1 - lambda^n_k)")
    N = system.N
    if (F.theta - (N + 2)).sign() != 1:
        return UniquenessVerdict.UNDETERMINED
    if math.gcd(*system.exps) != 1:
        return UniquenessVerdict.UNDETERMINED
    if field_sign(F, b) < 0 or any(field_sign(F, ak) < 0 for ak in a):
        return UniquenessVerdict.UNDETERMINED
    with working_precision(F.precision_bits):
        amax = max((F.real_value(ak) for ak in a), key=lambda z: z.upper())
        bound = F.real_value(b) * amax / (1 - F.real_value(F.theta_power(-system.n_min)))
        if (bound - 1).sign() == -1:
            return UniquenessVerdict.U_SET_CERTIFIED
    return UniquenessVerdict.UNDETERMINED


def rationality_screen(system: GenericSystem, depth: int = 100) -> list[dict]:
    """Best rational fit ``p/q`` (``q <= depth``) of each log-ratio.

    Advisory only: a tiny residual suggests Pisot-form structure, a large one
    suggests an irrational ratio, and neither is proven.
    """
    logs = [math.log(float(r)) for r in system.r]
    report = []
    for i in range(len(logs)):
        for j in range(i + 1, len(logs)):
            if logs[j] == 0:
                report.append({"pair": (i, j), "ratio": None, "p": None, "q": None,
                               "residual": math.inf})
                continue
            ratio = logs[i] / logs[j]
            best = Fraction(ratio).limit_denominator(depth)
            report.append({"pair": (i, j), "ratio": ratio, "p": best.numerator,
                           "q": best.denominator, "residual": abs(ratio - float(best))})
    return report
