"""Fourier transform of the invariant measure.

The deterministic path evaluates ``nu_hat(alpha * theta**k)`` through the
conditioning relation

    nu_hat(t) = sum_j p_j exp(2 pi i t mu_j) nu_hat(t * lambda**n_j),

which along the orbit ``t_m = alpha * theta**m`` is a linear chain
``c_m = sum_j p_j e_j(m) c_{m - n_j}``.  It starts where ``|t_m|`` is so small that
``|nu_hat(t_m) - 1| <= 2 pi |t_m| B`` meets the tolerance, and climbs to m = k.
The phases ``alpha mu_j theta**m mod 1`` are taken from the conjugate sum
once ``m`` reaches the T-threshold, so large arguments never appear.

The Monte Carlo path samples the random series ``X = sum_l mu_{e_l} lambda**S_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpfr

from .balls import CertifiedComplex, CertifiedReal, working_precision
from .errors import DualLatticeViolation, EmptyBatch, TolUnreachable
from .ifs import PisotFormSystem, field_sign
from .numberfield import FieldElement, PisotField

__all__ = [
    "PhasePlan",
    "NuEvaluator",
    "nu_hat",
    "SampleBatch",
    "sample_nu",
    "empirical_nu_hat",
    "KSResult",
    "self_similarity_check",
    "RNG_ALGORITHM",
    "CHUNK",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096
RNG_ALGORITHM = "numpy Philox4x64-10, chunk i seeded with seed XOR i"
CHUNK = 1 << 16


def _abs_upper_real(field: PisotField, x: FieldElement) -> float:
    v = field.real_value(x)
    return v.upper_float() if field_sign(field, x) >= 0 else (-v).upper_float()


class PhasePlan:
    """Certified ``x_j * theta**m mod 1`` and its exponential for a family x_j.

    For ``m >= m0(x_j)`` the representative ``-sum_t x_j^(t) alpha_t**m`` is
    used (conjugate pairs contribute twice the real part); below the
    threshold the real embedding ``x_j * theta**m`` is evaluated directly.
    Results are memoized; a plan is bound to one working precision.
    """

    def __init__(self, field: PisotField, xs: Sequence[FieldElement], precision: int):
        self.field = field
        self.xs = tuple(field.coerce(x) for x in xs)
        self.precision = int(precision)
        self.thresholds = []
        for j, x in enumerate(self.xs):
            m = field.in_T(x)
            if not m.member:
                raise DualLatticeViolation(f"element {j} of the phase family is not in T(theta)")
            self.thresholds.append(m.threshold)
        with working_precision(self.precision):
            F = field if field.precision_bits >= self.precision else field.refine(self.precision)
            self._F = F
            d = F.degree
            # conjugates grouped as (index, weight): real ones once, pairs via
            # their positive-imaginary member with weight 2
            groups = []
            t = 1
            while t < d:
                z = F.conjugates[t - 1]
                if z.im == 0:
                    groups.append((t, 1))
                    t += 1
                else:
                    groups.append((t, 2))
                    t += 2
            self._groups = groups
            self._roots = {t: F.conjugates[t - 1] for t, _ in groups}
            self._emb = [{t: F.embed(x, t) for t, _ in groups} for x in self.xs]
            self._real = [F.real_value(x) for x in self.xs]
            self._theta = F.theta
            self._lam = F.real_value(F.lam())
        self._root_pow = {t: {0: CertifiedComplex.one()} for t, _ in groups}
        self._phase: dict = {}
        self._exp: dict = {}

    def _power(self, t: int, m: int) -> CertifiedComplex:
        cache = self._root_pow[t]
        z = cache.get(m)
        if z is None:
            if m - 1 in cache:
                z = cache[m - 1] * self._roots[t]
            else:
                z = self._roots[t] ** m
            cache[m] = z
        return z

    def phase(self, j: int, m: int) -> CertifiedReal:
        key = (j, m)
        v = self._phase.get(key)
        if v is not None:
            return v
        with working_precision(self.precision):
            x = self.xs[j]
            if x.is_zero():
                v = CertifiedReal(0)
            elif m >= self.thresholds[j]:
                acc = CertifiedReal(0)
                for t, w in self._groups:
                    prod = (self._emb[j][t] * self._power(t, m)).real
                    acc = acc + (prod * w if w != 1 else prod)
                v = -acc
            else:
                scale = self._theta ** m if m >= 0 else self._lam ** (-m)
                v = self._real[j] * scale
        self._phase[key] = v
        return v

    def expi(self, j: int, m: int) -> CertifiedComplex:
        """Ball for ``exp(2 pi i x_j theta**m)``."""
        key = (j, m)
        v = self._exp.get(key)
        if v is None:
            with working_precision(self.precision):
                ph = self.phase(j, m)
                v = CertifiedComplex.one() if ph.mid == 0 and ph.rad == 0 else CertifiedComplex.expi2pi(ph)
            self._exp[key] = v
        return v

    def conjugate_tail_bound(self, k: int, n_min: int) -> float:
        """``2 pi sum_t max_j |x_j^(t)| |alpha_t|**(n_min - k) / (1 - |alpha_t|**n_min)``.

        Bounds the phase of the backward series at level k, summed over the
        full conjugate set.
        """
        total = 0.0
        for t, w in self._groups:
            a = self._roots[t].abs_upper()
            mx = max(self._emb[j][t].abs_upper() for j in range(len(self.xs)))
            if mx == 0.0:
                continue
            e = n_min - k
            term = mx * a ** e / (1 - a ** n_min) if e >= 0 else math.inf
            total += w * term
        return total * 2 * math.pi * (1 + 1e-12)


class NuEvaluator:
    """Deterministic ``nu_hat(alpha * theta**k)`` for a strict-contraction system."""

    def __init__(self, system: PisotFormSystem, precision: int = DEFAULT_PRECISION,
                 max_precision: int = MAX_PRECISION):
        system.require_strict()
        self.system = system
        self.precision = int(precision)
        self.max_precision = int(max_precision)
        with working_precision(max(self.precision, system.field.precision_bits)):
            self.support_bound = system.support_bound()
        self._plans: dict = {}

    def plan(self, alpha: FieldElement, precision: int) -> PhasePlan:
        key = (alpha, precision)
        plan = self._plans.get(key)
        if plan is None:
            plan = PhasePlan(self.system.field, [alpha * mu for mu in self.system.mus], precision)
            self._plans[key] = plan
        return plan

    def base_index(self, alpha: FieldElement, tol: float) -> int:
        """Largest m with ``2 pi |alpha| theta**m B <= tol`` (certified bound)."""
        F = self.system.field
        a = _abs_upper_real(F, alpha)
        B = self.support_bound.upper_float()
        theta = self.system.field.theta.lower()
        log_theta = math.log(float(theta)) * (1 - 1e-12)
        m = math.floor(math.log(tol / (2 * math.pi * a * B)) / log_theta)
        while self._base_radius(a, B, m) > tol:
            m -= 1
        while self._base_radius(a, B, m + 1) <= tol:
            m += 1
        return m

    def _base_radius(self, a: float, B: float, m: int) -> float:
        theta_up = float(self.system.field.theta.upper()) * (1 + 1e-15)
        theta_lo = float(self.system.field.theta.lower()) * (1 - 1e-15)
        scale = theta_up ** m if m >= 0 else theta_lo ** m
        return 2 * math.pi * (1 + 1e-12) * a * B * scale

    def chain(self, alpha, k: int, tol: float, precision: int | None = None,
              p_balls: Sequence[CertifiedReal] | None = None) -> dict:
        """All ``c_m`` for ``m <= k`` on the orbit of alpha, as a dict.

        Entries below the base index are not stored; use :meth:`value_at`.
        """
        sys = self.system
        alpha = sys.field.coerce(alpha)
        prec = precision or self.precision
        plan = self.plan(alpha, prec)
        mb = self.base_index(alpha, tol)
        a = _abs_upper_real(sys.field, alpha)
        B = self.support_bound.upper_float()
        exps = sys.exps
        with working_precision(prec):
            if p_balls is None:
                p_balls = sys.p.balls()
            active = [j for j in range(len(exps)) if not sys.p.is_zero(j)]
            c = {}
            for m in range(mb - max(exps) + 1, mb + 1):
                c[m] = CertifiedComplex(1, 0, self._base_radius(a, B, m))
            for m in range(mb + 1, k + 1):
                acc = None
                for j in active:
                    term = (plan.expi(j, m) * c[m - exps[j]]).scale(p_balls[j])
                    acc = term if acc is None else acc + term
                c[m] = acc
        return {"values": c, "base": mb, "alpha": alpha, "a": a, "B": B}

    def value_at(self, chain: dict, m: int) -> CertifiedComplex:
        if m in chain["values"]:
            return chain["values"][m]
        if m <= chain["base"]:
            return CertifiedComplex(1, 0, self._base_radius(chain["a"], chain["B"], m))
        raise KeyError(m)

    def nu_hat(self, alpha, k: int = 0, tol: float = 1e-8) -> CertifiedComplex:
        """``nu_hat(alpha * theta**k)`` with radius at most ``tol``."""
        alpha = self.system.field.coerce(alpha)
        if alpha.is_zero():
            return CertifiedComplex.one()
        prec = self.precision
        base_tol = tol / 2
        while True:
            ch = self.chain(alpha, k, base_tol, prec)
            v = self.value_at(ch, k)
            if v.rad <= tol:
                return v
            if prec >= self.max_precision:
                raise TolUnreachable(f"radius {v.rad:.3g} above {tol:.3g} at {prec} bits")
            prec = min(2 * prec, self.max_precision)
            base_tol /= 4


def nu_hat(system: PisotFormSystem, alpha, k: int = 0, tol: float = 1e-8,
           precision: int = DEFAULT_PRECISION) -> CertifiedComplex:
    return NuEvaluator(system, precision).nu_hat(alpha, k, tol)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleBatch:
    """Truncated draws of X; each is within ``truncation_bound`` of an exact draw."""

    seed: int
    count: int
    depth: int
    samples: np.ndarray
    truncation_bound: float

    @property
    def statistical_error(self) -> float:
        return 1.0 / math.sqrt(self.count) if self.count else math.inf


def _float_params(system: PisotFormSystem):
    F = system.field
    with working_precision(F.precision_bits):
        mus = np.array([float(F.real_value(mu)) for mu in system.mus])
        ratios = np.array([float(F.real_value(F.theta_power(-n))) for n in system.exps])
        probs = np.array([float(b) for b in system.p.balls()])
    probs = probs / probs.sum()
    return mus, ratios, np.cumsum(probs)


def _draw_symbols(rng: np.random.Generator, cum: np.ndarray, shape) -> np.ndarray:
    u = rng.random(shape)
    return np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1).astype(np.int8)


def sample_nu(system: PisotFormSystem, count: int, depth: int = 100,
              seed: int = 0) -> SampleBatch:
    """``count`` draws of ``sum_{l < depth} mu_{e_l} lambda**S_l``.

    Chunk i of ``CHUNK`` samples uses ``Philox(seed ^ i)``, so the batch does
    not depend on how chunks are distributed over workers.
    """
    system.require_strict()
    mus, ratios, cum = _float_params(system)
    out = np.empty(count, dtype=np.float64)
    for i, start in enumerate(range(0, count, CHUNK)):
        n = min(CHUNK, count - start)
        rng = np.random.Generator(np.random.Philox(seed ^ i))
        eps = _draw_symbols(rng, cum, (n, depth))
        acc = np.zeros(n)
        for l in range(depth - 1, -1, -1):
            e = eps[:, l]
            acc = mus[e] + ratios[e] * acc
        out[start:start + n] = acc
    B = float(np.max(np.abs(mus))) / (1 - float(np.max(ratios))) if count else 0.0
    lam_min = float(np.max(ratios))
    trunc = lam_min ** depth * B
    # double rounding of the Horner sum: about 2 ulps of the running sum per level
    rounding = 2 * depth * 2.0**-52 * B
    return SampleBatch(seed, count, depth, out, trunc + rounding)


def empirical_nu_hat(batch: SampleBatch, t: float) -> CertifiedComplex:
    """``mean(exp(2 pi i t x))``; the radius covers truncation and rounding only."""
    if batch.count == 0:
        raise EmptyBatch("empirical transform of an empty batch")
    if t == 0:
        return CertifiedComplex.one()
    z = np.exp(2j * np.pi * t * batch.samples)
    mean = complex(np.mean(z))
    arg_err = 2 * math.pi * abs(t) * (batch.truncation_bound
                                      + 4 * 2.0**-52 * float(np.max(np.abs(batch.samples))))
    rad = arg_err + 8 * 2.0**-52 * math.log2(max(batch.count, 2))
    with working_precision(64):
        return CertifiedComplex(mean.real, mean.imag, rad)


@dataclass(frozen=True)
class KSResult:
    statistic: float
    critical_value: float
    sizes: tuple

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical_value


def _ks_critical(n: int, m: int, c_alpha: float = 1.628) -> float:
    # asymptotic two-sample critical value at the 1% level
    return c_alpha * math.sqrt((n + m) / (n * m))


def self_similarity_check(batch: SampleBatch, system, bins: int | None = None, *,
                          other: SampleBatch | None = None, p: Sequence[float] | None = None,
                          seed: int | None = None) -> KSResult:
    """KS distance between the batch and the p-mixture of images ``phi_j(Y)``.

    ``Y`` is an independent batch (``other``, or a fresh one drawn with
    ``seed``).  ``system`` may also be a list of ``(ratio, shift)`` float pairs.
    With ``bins`` the distance is taken over that many equally spaced CDF
    evaluation points instead of all sample points.
    """
    if batch.count == 0:
        raise EmptyBatch("self-similarity check on an empty batch")
    if isinstance(system, PisotFormSystem):
        mus, ratios, cum = _float_params(system)
        if other is None:
            other = sample_nu(system, batch.count, batch.depth,
                              seed=(batch.seed + 0x9E3779B97F4A7C15) % 2**64 if seed is None else seed)
    else:
        ratios = np.array([float(r) for r, _ in system])
        mus = np.array([float(b) for _, b in system])
        cum = np.cumsum(np.full(len(system), 1.0 / len(system)))
        if other is None:
            raise ValueError("an independent batch is required for explicit maps")
    if p is not None:
        pv = np.asarray(p, dtype=float)
        cum = np.cumsum(pv / pv.sum())
    rng = np.random.Generator(np.random.Philox((other.seed ^ 0x5DEECE66D) % 2**64))
    j = np.minimum(np.searchsorted(cum, rng.random(other.count), side="right"), len(cum) - 1)
    mapped = ratios[j] * other.samples + mus[j]
    a = np.sort(batch.samples)
    b = np.sort(mapped)
    if bins:
        lo, hi = min(a[0], b[0]), max(a[-1], b[-1])
        grid = np.linspace(lo, hi, int(bins) + 1)
    else:
        grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    stat = float(np.max(np.abs(fa - fb)))
    return KSResult(stat, _ks_critical(a.size, b.size), (a.size, b.size))
