"""Property and regression suite behind ``pisot-ifs verify``.

Each check reports a measured discrepancy against an allowed bound.  Values
that come from an independent evaluation (rather than printed digits) are
compared at their own precision; see ``fixtures.HEADLINE_M_HAT``.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import fixtures
from .balls import CertifiedComplex, working_precision
from .errors import PisotIFSError
from .ifs import (
    ProbabilityVector,
    dimension_threshold_roots,
    similarity_dimension,
)
from .limit import (
    LimitEvaluator,
    k_invariance_check,
    line_grid,
    m_hat,
    mc_limit_check,
    sweep,
)
from .numberfield import power_sums, verify_pisot
from .transform import NuEvaluator, sample_nu, self_similarity_check

__all__ = ["Check", "run_suite", "system_checks", "DEFAULT_CHECKS"]

# derived reference roots of s(p, lambda) = 1 for the plastic system
THRESHOLD_ROOTS = (0.20347490446381, 0.90803530002932)


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    allowed: float
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured,
                "allowed": self.allowed, "detail": self.detail}


def _timed(name: str, fn: Callable[[], tuple]) -> Check:
    t0 = time.perf_counter()
    try:
        passed, measured, allowed, detail = fn()
    except PisotIFSError as exc:
        passed, measured, allowed, detail = False, math.inf, 0.0, f"{type(exc).__name__}: {exc}"
    return Check(name, bool(passed), float(measured), float(allowed), detail,
                 time.perf_counter() - t0)


def _dist(a: CertifiedComplex, b: complex) -> float:
    return abs(complex(a) - b)


# -- individual checks ---------------------------------------------------------------

def check_headline():
    S = fixtures.plastic_system()
    v = m_hat(S, 1, 1e-8)
    d = _dist(v, fixtures.HEADLINE_M_HAT)
    allowed = v.rad + 1e-12
    return d <= allowed and v.rad <= 1e-7, d, allowed, f"m_hat(1) = {complex(v):.12g} +/- {v.rad:.2g}"


def check_endpoints():
    S = fixtures.plastic_system()
    worst = 0.0
    for p in (("1", "0"), ("0", "1")):
        v = m_hat(S.with_p(list(p)), 1, 1e-12)
        worst = max(worst, _dist(v, 1) + v.rad)
    delta = LimitEvaluator(S.with_p(["0", "1"])).delta(None, 1e-12)
    ok = worst <= 1e-10 and delta.contains(2)
    return ok, worst, 1e-10, f"Delta_(0,1) = {complex(delta):.6g}"


def check_thresholds():
    S = fixtures.plastic_system()
    lo, hi = dimension_threshold_roots(S, 1e-14)
    d = max(abs(float(lo) - THRESHOLD_ROOTS[0]), abs(float(hi) - THRESHOLD_ROOTS[1]))
    s = similarity_dimension(S).value
    ok = d <= 1e-12 and round(float(s), 2) == 1.64
    return ok, d, 1e-12, f"roots ({float(lo):.12f}, {float(hi):.12f}), s = {float(s):.6f}"


def check_second_system():
    S = fixtures.plastic_23_system()
    F = S.field
    worst = 0.0
    for n in range(1, 6):
        v = m_hat(S, n, 1e-9)
        if not v.contains(0):
            return False, abs(complex(v)), v.rad, f"m_hat({n}) excludes 0"
        worst = max(worst, abs(complex(v)))
    nu = NuEvaluator(S)
    L = 1 + float(F.real_value(F.lam()))
    theta = float(F.theta)
    for k in range(-3, 7):
        v = nu.nu_hat(1, k, 1e-9)
        t = theta ** k
        ref = cmath.exp(1j * math.pi * t * L) * math.sin(math.pi * t * L) / (math.pi * t * L)
        worst = max(worst, _dist(v, ref) - v.rad)
    return worst <= 1e-8, worst, 1e-8, "zero enclosures for n = 1..5; uniform closed form at 10 points"


def check_second_sweep():
    S = fixtures.plastic_23_system()
    F = S.field
    lam3 = float(F.real_value(F.theta_power(-3)))
    grid = line_grid(0, 1, 1000)
    step = 1 / 999
    table = sweep(S, 1, grid, 1e-8)
    best = table.argmin()
    d = abs(best.p_float[1] - lam3)
    far = [r for r in table.zero_enclosures() if abs(r.p_float[1] - lam3) > step]
    exact = m_hat(S, 1, 1e-9)
    ok = d <= step and not far and exact.contains(0)
    return ok, d, step, f"argmin p_1 = {best.p_float[1]:.6f}, lambda^3 = {lam3:.6f}"


def check_k_invariance(seed: int = 2024):
    S = fixtures.plastic_system()
    base = LimitEvaluator(S)
    rng = random.Random(seed)
    worst = 0.0
    ok = True
    for _ in range(20):
        p1 = Fraction(rng.randint(1, 9999), 10000)
        ev = base.with_p(ProbabilityVector([1 - p1, p1], S.field))
        k = ev.k_anchor
        vals = [ev.delta(kk, 1e-9) for kk in (k, k - 1, k - 5)]
        for other in vals[1:]:
            dist = abs(complex(vals[0]) - complex(other))
            if not vals[0].overlaps(other):
                ok = False
            worst = max(worst, dist / (vals[0].rad + other.rad))
    return ok, worst, 1.0, "20 interior p, k' in {k-1, k-5}; measured = distance / combined radii"


def check_mc(seed: int = 12345, count: int = 10**6):
    S = fixtures.plastic_system()
    rep = mc_limit_check(S, 1, 30, count, seed)
    return rep.passed, rep.discrepancy, rep.allowed, f"empirical {rep.empirical:.5g}"


def check_golden_identity():
    S = fixtures.golden_degenerate_system()
    ev = LimitEvaluator(S)
    delta = ev.delta(None, 1e-11)
    nu = NuEvaluator(S)
    f1 = nu.nu_hat(1, -1, 1e-11)
    f2 = nu.nu_hat(1, -2, 1e-11)
    with working_precision(128):
        rhs = f1 * f1.conjugate() + (f2 * f2.conjugate()).scale(Fraction(1, 2))
    d = _dist(delta, complex(rhs))
    allowed = delta.rad + rhs.rad
    return d <= allowed and allowed <= 1e-9, d, allowed, f"Delta = {complex(delta).real:.12f}"


def check_uniform():
    worst = 0.0
    for N in (1, 2):
        S = fixtures.uniform_system(N)
        for n in range(1, 6):
            v = m_hat(S, n, 1e-10)
            if not v.contains(0):
                return False, abs(complex(v)), v.rad, f"N={N} m_hat({n}) excludes 0"
        nu = NuEvaluator(S)
        for a, k in [(1, -1), (2, -1), (1, -2), (5, -2), (7, -2), (4, -3), (1, -5), (11, -3), (13, -4), (2, -2)]:
            t = a * (N + 1) ** k
            v = nu.nu_hat(a, k, 1e-11)
            ref = (cmath.exp(2j * math.pi * t) - 1) / (2j * math.pi * t)
            worst = max(worst, _dist(v, ref))
    return worst <= 1e-10, worst, 1e-10, "N in {1, 2}"


def check_algebra():
    worst = 0.0
    for c in [(-1, -1, 0), (-1, 0, -1), (-1, -1), (1, -3)]:
        F = verify_pisot(c)
        ps = power_sums(c, 51)
        with working_precision(F.precision_bits):
            for n in range(51):
                tot = F.root(0) ** n
                for z in F.conjugates:
                    tot = tot + z ** n
                if not tot.contains(ps[n]):
                    return False, _dist(tot, ps[n]), tot.rad, f"trace mismatch {c} n={n}"
                worst = max(worst, tot.rad / max(1, abs(ps[n])))
    try:
        verify_pisot((-2, 0))
        return False, 1, 0, "X^2 - 2 accepted"
    except PisotIFSError:
        pass
    F = fixtures.plastic_field()
    ok = F.in_T(F.one()).member and F.in_T(F.one()).threshold == 0 and not F.in_T(F.rational(Fraction(1, 2))).member
    return ok, worst, 1e-20, "relative radius of exact traces; accept 4 Pisot polynomials, reject X^2 - 2, T-membership examples"


def _fixture_list():
    return [
        ("plastic", fixtures.plastic_system()),
        ("plastic_23", fixtures.plastic_23_system()),
        ("golden_degenerate", fixtures.golden_degenerate_system()),
        ("uniform_1", fixtures.uniform_system(1)),
        ("uniform_2", fixtures.uniform_system(2)),
    ]


def check_properties(seed: int = 7):
    worst = 0.0
    for name, S in _fixture_list():
        if m_hat(S, 0).rad != 0 or complex(m_hat(S, 0)) != 1:
            return False, 1, 0, f"{name}: m_hat(0) != 1"
        nu = NuEvaluator(S)
        if complex(nu.nu_hat(0, 0)) != 1:
            return False, 1, 0, f"{name}: nu_hat(0) != 1"
        a, b = m_hat(S, 1, 1e-9), m_hat(S, -1, 1e-9)
        if not a.conjugate().overlaps(b):
            return False, _dist(a.conjugate(), complex(b)), a.rad + b.rad, f"{name}: Hermitian m_hat"
        if a.abs_lower() > 1:
            return False, a.abs_lower(), 1, f"{name}: |m_hat| > 1"
        for k in (-2, 0, 3):
            u, w = nu.nu_hat(1, k, 1e-9), nu.nu_hat(-1, k, 1e-9)
            if not u.conjugate().overlaps(w) or u.abs_lower() > 1:
                return False, _dist(u.conjugate(), complex(w)), u.rad + w.rad, f"{name}: Hermitian nu_hat"
            worst = max(worst, abs(complex(u).conjugate() - complex(w)))
        # precision nesting: a finer, tighter enclosure stays inside the coarse one
        coarse = LimitEvaluator(S, 1, precision=128).m_hat(1e-8)
        fine = LimitEvaluator(S, 1, precision=256).m_hat(1e-11)
        if not coarse.contains_ball(fine):
            return False, _dist(coarse, complex(fine)), coarse.rad, f"{name}: precision nesting"
        # self-similarity and seed determinism
        b1 = sample_nu(S, 20000, 60, seed)
        b2 = sample_nu(S, 20000, 60, seed)
        if b1.samples.tobytes() != b2.samples.tobytes():
            return False, 1, 0, f"{name}: same seed, different batch"
        ks = self_similarity_check(b1, S, other=sample_nu(S, 20000, 60, seed + 1))
        if not ks.passed:
            return False, ks.statistic, ks.critical_value, f"{name}: self-similarity KS"
        B = float(S.support_bound().mid)
        if np.max(np.abs(b1.samples)) > B + b1.truncation_bound:
            return False, float(np.max(np.abs(b1.samples))), B, f"{name}: support bound"
    return True, worst, 1e-9, "normalization, Hermitian symmetry, |.| <= 1, nesting, KS, determinism"


DEFAULT_CHECKS = [
    ("headline m_hat(1)", check_headline),
    ("endpoints", check_endpoints),
    ("dimension thresholds", check_thresholds),
    ("second system zeros and closed form", check_second_system),
    ("second system sweep", check_second_sweep),
    ("k-invariance", check_k_invariance),
    ("Monte Carlo limit", check_mc),
    ("golden-degenerate identity", check_golden_identity),
    ("uniform fixtures", check_uniform),
    ("algebra", check_algebra),
    ("properties", check_properties),
]


def run_suite(seed: int = 12345, checks=None) -> list[Check]:
    out = []
    for name, fn in (checks or DEFAULT_CHECKS):
        if fn is check_mc:
            out.append(_timed(name, lambda: check_mc(seed)))
        elif fn is check_properties:
            out.append(_timed(name, lambda: check_properties(seed % 2**32)))
        else:
            out.append(_timed(name, fn))
    return out


def system_checks(system, seed: int = 12345, tol: float = 1e-8) -> list[Check]:
    """Checks applicable to an arbitrary strict-contraction system."""

    def normalization():
        v = m_hat(system, 0)
        return complex(v) == 1 and v.rad == 0, 0.0, 0.0, "m_hat(0) = 1"

    def hermitian():
        a, b = m_hat(system, 1, tol), m_hat(system, -1, tol)
        d = _dist(a.conjugate(), complex(b))
        return a.conjugate().overlaps(b) and a.abs_lower() <= 1, d, a.rad + b.rad, ""

    def kinv():
        rep = k_invariance_check(system, 1, tol=tol)
        return rep.passed, rep.discrepancy, rep.allowed, f"k in {rep.ks}"

    def mc():
        rep = mc_limit_check(system, 1, 30, 10**5, seed, tol)
        return rep.passed, rep.discrepancy, rep.allowed, f"empirical {rep.empirical:.5g}"

    def ks():
        b1 = sample_nu(system, 20000, 60, seed)
        rep = self_similarity_check(b1, system, other=sample_nu(system, 20000, 60, seed + 1))
        return rep.passed, rep.statistic, rep.critical_value, ""

    return [_timed(n, f) for n, f in [("normalization", normalization), ("Hermitian symmetry", hermitian),
                                       ("k-invariance", kinv), ("Monte Carlo limit", mc),
                                       ("self-similarity KS", ks)]]
