"""Acceptance criteria, each at its stated tolerance.

Printed reference digits are checked literally: a value written as
``0.0001186...`` must lie in ``[0.0001186, 0.0001187)``.
"""

import cmath
import json
import math
import random
import time
from fractions import Fraction

from pisot_ifs import fixtures
from pisot_ifs.cli import main
from pisot_ifs.errors import PisotIFSError
from pisot_ifs.ifs import ProbabilityVector, dimension_threshold_roots, similarity_dimension
from pisot_ifs.limit import LimitEvaluator, line_grid, m_hat, mc_limit_check, sweep
from pisot_ifs.numberfield import power_sums, verify_pisot
from pisot_ifs.transform import NuEvaluator, sample_nu, self_similarity_check


def digits_consistent(ball_lo, ball_hi, printed: str) -> bool:
    """Does [ball_lo, ball_hi] meet the interval of reals whose expansion starts with ``printed``?"""
    lo = Fraction(printed)
    decimals = len(printed.split(".")[1])
    hi = lo + Fraction(1, 10**decimals)
    return ball_hi >= lo and ball_lo < hi


def test_criterion_01_headline(criterion):
    S = fixtures.plastic_system()
    t0 = time.perf_counter()
    v = m_hat(S, 1)
    elapsed = time.perf_counter() - t0
    re_ok = digits_consistent(v.real.lower(), v.real.upper(), "0.0001186")
    im_ok = digits_consistent(v.imag.lower(), v.imag.upper(), "0.0000327")
    ok = re_ok and im_ok and v.rad <= 1e-7 and elapsed <= 10
    criterion(1, ok, f"m_hat(1) = {complex(v):.10g} +/- {v.rad:.1e} in {elapsed:.2f}s; "
                     f"re digits {'ok' if re_ok else 'MISMATCH'}, im digits {'ok' if im_ok else 'MISMATCH'} "
                     f"(printed 0.0001186... + 0.0000327...i)")


def test_criterion_02_endpoints(criterion):
    S = fixtures.plastic_system()
    worst = 0.0
    for p in ([1, 0], [0, 1]):
        v = m_hat(S.with_p(p), 1, 1e-12)
        worst = max(worst, abs(complex(v) - 1) + v.rad)
    delta = LimitEvaluator(S.with_p([0, 1])).delta(None, 1e-12)
    ok = worst <= 1e-10 and delta.contains(2)
    criterion(2, ok, f"max |m_hat - 1| + radius = {worst:.1e}; Delta_(0,1) contains 2: {delta.contains(2)}")


def test_criterion_03_thresholds(criterion):
    S = fixtures.plastic_system()
    lo, hi = dimension_threshold_roots(S)
    s = similarity_dimension(S).value
    lo_ok = digits_consistent(lo.lower(), lo.upper(), "0.203")
    hi_ok = digits_consistent(hi.lower(), hi.upper(), "0.907")
    s_ok = digits_consistent(s.lower(), s.upper(), "1.64")
    criterion(3, lo_ok and hi_ok and s_ok,
              f"roots ({float(lo):.12f}, {float(hi):.12f}) vs printed (0.203..., 0.907...): "
              f"low {'ok' if lo_ok else 'MISMATCH'}, high {'ok' if hi_ok else 'MISMATCH'}; "
              f"s = {float(s):.5f} {'ok' if s_ok else 'MISMATCH'}")


def test_criterion_04_second_system(criterion):
    S = fixtures.plastic_23_system()
    F = S.field
    lam2, lam3 = F.theta_power(-2), F.theta_power(-3)
    lam3_f = float(F.real_value(lam3))
    # 999 uniform points plus the exact special point: 1000 grid points
    grid = line_grid(0, 1, 999)
    grid.append((lam2, lam3))
    step = 1 / 998
    table = sweep(S, 1, grid, 1e-8)
    zeros = table.zero_enclosures()
    far = [r for r in zeros if abs(r.p_float[1] - lam3_f) > step]
    best = table.argmin()
    sweep_ok = bool(zeros) and not far and abs(best.p_float[1] - lam3_f) <= step
    zero_ok = all(m_hat(S, n, 1e-9).contains(0) for n in range(1, 6))
    nu = NuEvaluator(S)
    L = 1 + float(F.real_value(F.lam()))
    theta = float(F.theta)
    worst = 0.0
    for a, k in [(1, -3), (1, -1), (1, 0), (2, 0), (1, 1), (3, 1), (1, 2), (1, 4), (5, 3), (1, 6)]:
        t = a * theta**k
        ref = cmath.exp(1j * math.pi * t * L) * math.sin(math.pi * t * L) / (math.pi * t * L)
        v = nu.nu_hat(a, k, 1e-10)
        worst = max(worst, abs(complex(v) - ref))
    closed_ok = worst <= 1e-8
    criterion(4, sweep_ok and zero_ok and closed_ok,
              f"{len(zeros)} zero enclosure(s), all within one step of lambda^3 = {lam3_f:.6f}: {not far}; "
              f"argmin p_1 = {best.p_float[1]:.6f}; m_hat(1..5) contain 0: {zero_ok}; "
              f"closed form error {worst:.1e}")


def test_criterion_05_k_invariance(criterion):
    S = fixtures.plastic_system()
    base = LimitEvaluator(S)
    rng = random.Random(20240607)
    ok, worst = True, 0.0
    for _ in range(20):
        p1 = Fraction(rng.randint(1, 999_999), 1_000_000)
        ev = base.with_p(ProbabilityVector([1 - p1, p1], S.field))
        k = ev.k_anchor
        d0 = ev.delta(k, 1e-9)
        for kk in (k - 1, k - 5):
            d = ev.delta(kk, 1e-9)
            dist = abs(complex(d0) - complex(d))
            ok &= dist <= d0.rad + d.rad
            worst = max(worst, dist / (d0.rad + d.rad))
    criterion(5, ok, f"worst |Delta(k) - Delta(k')| / combined radii = {worst:.2e} over 20 p")


def test_criterion_06_monte_carlo(criterion):
    S = fixtures.plastic_system()
    t0 = time.perf_counter()
    rep = mc_limit_check(S, 1, K=30, count=10**6, seed=12345)
    elapsed = time.perf_counter() - t0
    bound = 3e-3 + rep.truncation_radius + rep.deterministic.rad
    ok = rep.discrepancy <= bound and elapsed <= 60
    criterion(6, ok, f"|empirical - m_hat(1)| = {rep.discrepancy:.2e} <= {bound:.2e}; {elapsed:.1f}s")


def test_criterion_07_golden_identity(criterion):
    S = fixtures.golden_degenerate_system()
    delta = LimitEvaluator(S).delta(None, 1e-11)
    nu = NuEvaluator(S)
    f1, f2 = nu.nu_hat(1, -1, 1e-11), nu.nu_hat(1, -2, 1e-11)
    rhs = f1 * f1.conjugate() + (f2 * f2.conjugate()).scale(Fraction(1, 2))
    dist = abs(complex(delta) - complex(rhs))
    radii = delta.rad + rhs.rad
    ok = dist <= radii and radii <= 1e-9
    criterion(7, ok, f"Delta = {complex(delta).real:.15f}, distance {dist:.1e}, combined radii {radii:.1e}")


def test_criterion_08_uniform(criterion):
    ok, worst = True, 0.0
    for N in (1, 2):
        S = fixtures.uniform_system(N)
        ok &= all(m_hat(S, n, 1e-10).contains(0) for n in range(1, 6))
        nu = NuEvaluator(S)
        for a, k in [(1, -1), (2, -1), (1, -2), (5, -2), (7, -2), (4, -3), (1, -5), (11, -3), (13, -4), (3, -6)]:
            t = a * (N + 1) ** k
            ref = (cmath.exp(2j * math.pi * t) - 1) / (2j * math.pi * t)
            worst = max(worst, abs(complex(nu.nu_hat(a, k, 1e-12)) - ref))
    ok &= worst <= 1e-10
    criterion(8, ok, f"m_hat(1..5) contain 0 for N = 1, 2: {ok}; sinc error {worst:.1e}")


def test_criterion_09_algebra(criterion):
    accepted = []
    trace_ok = True
    for c in [(-1, -1, 0), (-1, 0, -1), (-1, -1), (1, -3)]:
        F = verify_pisot(c)
        accepted.append(c)
        ps = power_sums(c, 51)
        for n in range(51):
            tot = F.root(0) ** n
            for z in F.conjugates:
                tot = tot + z ** n
            trace_ok &= tot.contains(ps[n])
    try:
        verify_pisot((-2, 0))
        rejected = False
    except PisotIFSError:
        rejected = True
    F = fixtures.plastic_field()
    member_ok = F.in_T(F.one()).member and not F.in_T(F.rational(Fraction(1, 2))).member
    criterion(9, len(accepted) == 4 and rejected and trace_ok and member_ok,
              f"4 Pisot polynomials accepted, X^2 - 2 rejected: {rejected}; traces n <= 50 within radii: "
              f"{trace_ok}; 1 in T and 1/2 not in T: {member_ok}")


def test_criterion_10_property_suite(criterion, capsys, tmp_path):
    out = tmp_path / "verify.json"
    t0 = time.perf_counter()
    code = main(["verify", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    capsys.readouterr()
    report = json.loads(out.read_text())
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    S = fixtures.plastic_system()
    a, b = sample_nu(S, 50_000, seed=1), sample_nu(S, 50_000, seed=2)
    ks = self_similarity_check(a, S, other=b)
    ok = code == 0 and not failed and elapsed <= 300 and ks.passed
    criterion(10, ok, f"verify exit {code} in {elapsed:.1f}s; failed checks: {failed or 'none'}; "
                      f"KS {ks.statistic:.4f} <= {ks.critical_value:.4f}")
