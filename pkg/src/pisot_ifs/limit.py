"""Fourier coefficients of the limit measure of ``lambda**-n X mod 1``.

For a strict-contraction Pisot-form system and an integer ``n != 0``,

    m_hat(n) = Delta_p(k) / E(n_e),
    Delta_p(k) = sum_{0 <= r < n*} F(k + r) G(k + r, r),

where ``F(k') = nu_hat(n lambda**k')`` comes from the forward chain and

    G(k', r) = sum_{j : n_j > r} p_j exp(2 pi i n mu_j theta**(n_j - k')) H(k' - n_j)

collects the backward half-sequence.  ``H`` obeys the downward chain

    H(k) = sum_j p_j exp(2 pi i n mu_j theta**(n_j - k)) H(k - n_j),

whose phases are read in the conjugate representation (so that the series
over the past converges), and ``H(k) -> 1`` as ``k -> -inf`` with an explicit
geometric bound.  Delta does not depend on k as long as every backward
exponent is past the T-threshold, which is checked.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .balls import CertifiedComplex, CertifiedReal, working_precision
from .errors import PisotIFSError, ThresholdViolation, TolUnreachable
from .ifs import PisotFormSystem, ProbabilityVector
from .numberfield import FieldElement
from .transform import (
    CHUNK,
    DEFAULT_PRECISION,
    MAX_PRECISION,
    NuEvaluator,
    _draw_symbols,
    _float_params,
)

__all__ = [
    "LimitEvaluator",
    "m_hat",
    "M_hat",
    "SweepRow",
    "SweepTable",
    "sweep",
    "line_grid",
    "simplex_grid",
    "parse_grid",
    "KInvarianceReport",
    "k_invariance_check",
    "MCLimitReport",
    "mc_limit_check",
]


class LimitEvaluator:
    """Evaluates ``Delta_p(k)`` and ``m_hat`` for one coefficient.

    The phase tables depend on the maps and on ``alpha`` (``n`` for
    ``m_hat(n)``) but not on p, so one evaluator serves a whole sweep.
    """

    def __init__(self, system: PisotFormSystem, n: int = 1, alpha: FieldElement | None = None,
                 precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION):
        system.require_strict()
        self.system = system
        F = system.field
        self.n = int(n)
        self.alpha = F.coerce(self.n if alpha is None else alpha)
        if self.alpha.is_zero():
            raise ValueError("use the special case m_hat(0) = 1")
        self.precision = int(precision)
        self.max_precision = int(max_precision)
        self.nu = NuEvaluator(system, self.precision, self.max_precision)
        self.n_star = system.n_star
        self.n_min = system.n_min
        plan = self.nu.plan(self.alpha, self.precision)
        self.m0 = max(plan.thresholds)
        self.k_anchor = -self.m0 - self.n_star + self.n_min

    # -- building blocks ---------------------------------------------------------

    def _check_k(self, k: int):
        if k > 1 - self.m0:
            raise ThresholdViolation(
                f"k = {k} exceeds 1 - m0 = {1 - self.m0}; backward phases would "
                "fall below the T-threshold")

    def backward_base(self, tol: float, top: int, precision: int) -> int:
        """Largest k <= top whose conjugate tail bound is at most tol."""
        plan = self.nu.plan(self.alpha, precision)
        k = top
        while plan.conjugate_tail_bound(k, self.n_min) > tol:
            k -= 1
        return k

    def backward_chain(self, top: int, tol: float, p_balls, precision: int) -> dict:
        sys = self.system
        plan = self.nu.plan(self.alpha, precision)
        kb = self.backward_base(tol, top, precision)
        exps = sys.exps
        active = [j for j in range(len(exps)) if not sys.p.is_zero(j)]
        h = {}
        with working_precision(precision):
            for k in range(kb - self.n_star + 1, kb + 1):
                h[k] = CertifiedComplex(1, 0, plan.conjugate_tail_bound(k, self.n_min))
            for k in range(kb + 1, top + 1):
                acc = None
                for j in active:
                    term = (plan.expi(j, exps[j] - k) * h[k - exps[j]]).scale(p_balls[j])
                    acc = term if acc is None else acc + term
                h[k] = acc
        return {"values": h, "base": kb, "plan": plan}

    def _h(self, chain: dict, k: int) -> CertifiedComplex:
        if k in chain["values"]:
            return chain["values"][k]
        if k <= chain["base"]:
            return CertifiedComplex(1, 0, chain["plan"].conjugate_tail_bound(k, self.n_min))
        raise KeyError(k)

    def backward_H(self, k: int, tol: float = 1e-8) -> CertifiedComplex:
        """``H(k)`` of the backward half-sequence with radius at most tol."""
        self._check_k(k + self.n_min)
        prec = self.precision
        base_tol = tol / 2
        while True:
            with working_precision(prec):
                pb = self.system.p.balls()
            ch = self.backward_chain(k, base_tol, pb, prec)
            v = self._h(ch, k)
            if v.rad <= tol:
                return v
            if prec >= self.max_precision:
                raise TolUnreachable(f"radius {v.rad:.3g} above {tol:.3g}")
            prec, base_tol = min(2 * prec, self.max_precision), base_tol / 4

    def delta_parts(self, k: int | None = None, tol_f: float = 1e-10, tol_g: float = 1e-10,
                    precision: int | None = None):
        """``(Delta_p(k), [F(k+r)], [G(k+r, r)])`` as balls."""
        k = self.k_anchor if k is None else int(k)
        self._check_k(k)
        sys = self.system
        prec = precision or self.precision
        exps = sys.exps
        with working_precision(prec):
            pb = sys.p.balls()
        fwd = self.nu.chain(self.alpha, -k, tol_f, prec, pb)
        bwd = self.backward_chain(k - 1, tol_g, pb, prec)
        plan = bwd["plan"]
        Fs, Gs = [], []
        with working_precision(prec):
            total = CertifiedComplex(0, 0, 0.0)
            for r in range(self.n_star):
                kr = k + r
                f = self.nu.value_at(fwd, -kr)
                g = CertifiedComplex(0, 0, 0.0)
                for j in range(len(exps)):
                    if exps[j] > r and not sys.p.is_zero(j):
                        g = g + (plan.expi(j, exps[j] - kr) * self._h(bwd, kr - exps[j])).scale(pb[j])
                Fs.append(f)
                Gs.append(g)
                total = total + f * g
        return total, Fs, Gs

    def delta(self, k: int | None = None, tol: float = 1e-8) -> CertifiedComplex:
        """``Delta_p(k)`` with radius at most tol."""
        return self._refine(lambda tf, tg, prec: self.delta_parts(k, tf, tg, prec)[0], tol)

    def _refine(self, compute, tol: float) -> CertifiedComplex:
        share = tol / (4 * self.n_star)
        prec = self.precision
        while True:
            v = compute(share, share, prec)
            if v.rad <= tol:
                return v
            if prec >= self.max_precision:
                raise TolUnreachable(f"radius {v.rad:.3g} above {tol:.3g} at {prec} bits")
            prec, share = min(2 * prec, self.max_precision), share / 4

    def m_hat(self, tol: float = 1e-8, k: int | None = None) -> CertifiedComplex:
        """``Delta_p(k) / E(n_e)`` with radius at most tol."""
        def compute(tf, tg, prec):
            d, _, _ = self.delta_parts(k, tf, tg, prec)
            with working_precision(prec):
                return d.scale(self.system.drift_ball().inverse())
        return self._refine(compute, tol)

    def with_p(self, p) -> "LimitEvaluator":
        """Same phase tables, new probability vector."""
        other = object.__new__(LimitEvaluator)
        other.__dict__.update(self.__dict__)
        other.system = self.system.with_p(p)
        nu = object.__new__(NuEvaluator)
        nu.__dict__.update(self.nu.__dict__)
        nu.system = other.system
        other.nu = nu
        return other


def m_hat(system: PisotFormSystem, n: int = 1, tol: float = 1e-8,
          precision: int = DEFAULT_PRECISION, k: int | None = None) -> CertifiedComplex:
    """Fourier coefficient ``m_hat(n)`` of the limit measure."""
    if n == 0:
        return CertifiedComplex.one()
    return LimitEvaluator(system, n, precision=precision).m_hat(tol, k)


def M_hat(system: PisotFormSystem, nvec: Sequence[int], tol: float = 1e-8,
          precision: int = DEFAULT_PRECISION) -> CertifiedComplex:
    """Coefficient of the (s+1)-dimensional limit at ``nvec``.

    Equals ``m_hat(1)`` for the translations ``alpha mu_j`` with
    ``alpha = sum_u nvec[u] theta**u``.
    """
    F = system.field
    if len(nvec) != F.degree:
        raise ValueError(f"nvec must have {F.degree} entries")
    if not any(nvec):
        return CertifiedComplex.one()
    alpha = F.from_coords(list(nvec))
    for j, mu in enumerate(system.mus):
        if not F.in_T(alpha * mu).member:
            from .errors import NotInDualLattice
            raise NotInDualLattice(j, f"alpha * mu_{j} is not in T(theta)")
    return LimitEvaluator(system, alpha=alpha, precision=precision).m_hat(tol)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def line_grid(lo, hi, count: int) -> list[tuple]:
    """Uniform grid of p_1 on [lo, hi] for two maps; p_0 = 1 - p_1."""
    lo, hi = _frac(lo), _frac(hi)
    if not (0 <= lo <= hi <= 1):
        raise ValueError("grid bounds must lie in [0, 1]")
    if count < 1:
        raise ValueError("grid needs at least one point")
    if count == 1:
        return [(1 - lo, lo)]
    step = (hi - lo) / (count - 1)
    return [(1 - (lo + i * step), lo + i * step) for i in range(count)]


def simplex_grid(N: int, lo, hi, count: int) -> list[tuple]:
    """Product grid for ``p_1..p_N`` projected to the simplex (``p_0 = 1 - sum``)."""
    axis = [p1 for _, p1 in line_grid(lo, hi, count)]
    out = [()]
    for _ in range(N):
        out = [pt + (v,) for pt in out for v in axis if sum(pt) + v <= 1]
    return [(1 - sum(pt),) + pt for pt in out]


def parse_grid(spec: str) -> tuple:
    """``"lo:hi:count"`` to ``(Fraction, Fraction, int)``."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec {spec!r} is not lo:hi:count")
    return _frac(parts[0]), _frac(parts[1]), int(parts[2])


@dataclass
class SweepRow:
    index: int
    p: tuple
    value: CertifiedComplex | None
    status: str = "ok"
    p_float: tuple = ()


@dataclass
class SweepTable:
    n: int
    grid: str
    tol: float
    k_anchor: int
    rows: list = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok_rows(self) -> list:
        return [r for r in self.rows if r.value is not None]

    @property
    def success_fraction(self) -> float:
        return len(self.ok_rows) / len(self.rows) if self.rows else 1.0

    def argmin(self) -> SweepRow | None:
        ok = self.ok_rows
        return min(ok, key=lambda r: r.value.abs_upper()) if ok else None

    def zero_enclosures(self) -> list:
        return [r for r in self.ok_rows if r.value.contains(0)]

    def metadata(self, system_hash: str | None = None) -> dict:
        best = self.argmin()
        return {
            "n": self.n,
            "grid": self.grid,
            "tolerance": self.tol,
            "k_anchor": self.k_anchor,
            "rows": len(self.rows),
            "succeeded": len(self.ok_rows),
            "argmin_index": None if best is None else best.index,
            "argmin_abs_upper": None if best is None else best.value.abs_upper(),
            "zero_enclosure_indices": [r.index for r in self.zero_enclosures()],
            "system_hash": system_hash,
        }

    def to_csv(self, fh=None) -> str | None:
        """Columns: index, p_0..p_N, re, im, abs, radius, status."""
        out = fh if fh is not None else io.StringIO()
        width = len(self.rows[0].p) if self.rows else 0
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index"] + [f"p_{i}" for i in range(width)] + ["re", "im", "abs", "radius", "status"])
        for r in self.rows:
            ps = [repr(v) for v in (r.p_float or tuple(float(v) for v in r.p))]
            if r.value is None:
                w.writerow([r.index] + ps + ["", "", "", "", r.status])
            else:
                j = r.value.to_json()
                w.writerow([r.index] + ps + [repr(j["re"]), repr(j["im"]),
                                             repr(abs(complex(j["re"], j["im"]))),
                                             repr(j["radius"]), r.status])
        return out.getvalue() if fh is None else None


def sweep(system: PisotFormSystem, n: int, grid: Iterable[tuple], tol: float = 1e-8,
          precision: int = DEFAULT_PRECISION, grid_spec: str = "") -> SweepTable:
    """``m_hat(n)`` at every grid point; failed rows are kept with their error name."""
    grid = list(grid)
    t0 = time.perf_counter()
    if n == 0:
        table = SweepTable(n, grid_spec, tol, 0)
        for i, p in enumerate(grid):
            table.rows.append(SweepRow(i, tuple(p), CertifiedComplex.one(), "ok",
                                       tuple(float(b.mid) for b in ProbabilityVector(p, system.field).balls())))
        return table
    base = LimitEvaluator(system, n, precision=precision)
    table = SweepTable(n, grid_spec, tol, base.k_anchor)
    for i, p in enumerate(grid):
        try:
            pv = ProbabilityVector(p, system.field)
            pf = tuple(float(b.mid) for b in pv.balls())
        except PisotIFSError as exc:
            table.rows.append(SweepRow(i, tuple(p), None, type(exc).__name__))
            continue
        try:
            ev = base.with_p(pv)
            table.rows.append(SweepRow(i, tuple(p), ev.m_hat(tol), "ok", pf))
        except PisotIFSError as exc:
            table.rows.append(SweepRow(i, tuple(p), None, type(exc).__name__, pf))
    table.elapsed = time.perf_counter() - t0
    return table


# ---------------------------------------------------------------------------
# consistency checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KInvarianceReport:
    ks: tuple
    values: tuple
    discrepancy: float
    allowed: float

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.allowed


def k_invariance_check(system: PisotFormSystem, n: int, k_list: Sequence[int] | None = None,
                       tol: float = 1e-8, precision: int = DEFAULT_PRECISION) -> KInvarianceReport:
    """Evaluate ``Delta_p(k)`` independently for each k and compare pairwise.

    The check passes when every pairwise distance is within the sum of the
    two radii, i.e. all enclosures overlap pairwise.  ``discrepancy`` and
    ``allowed`` report the worst pair by margin.
    """
    ev = LimitEvaluator(system, n, precision=precision)
    if k_list is None:
        k_list = (ev.k_anchor, ev.k_anchor - 1, ev.k_anchor - 5)
    vals = [ev.delta(k, tol) for k in k_list]
    worst, allowed, margin = 0.0, 0.0, -math.inf
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            dist = abs(complex(vals[i]) - complex(vals[j]))
            bound = vals[i].rad + vals[j].rad
            if not vals[i].overlaps(vals[j]):
                dist = max(dist, bound * (1 + 1e-15) + 1e-300)
            if dist - bound > margin:
                worst, allowed, margin = dist, bound, dist - bound
    return KInvarianceReport(tuple(k_list), tuple(vals), worst, allowed)


@dataclass(frozen=True)
class MCLimitReport:
    deterministic: CertifiedComplex
    empirical: complex
    sigma: float
    truncation_radius: float
    count: int

    @property
    def discrepancy(self) -> float:
        return abs(self.empirical - complex(self.deterministic))

    @property
    def allowed(self) -> float:
        return 3 * self.sigma + self.truncation_radius + self.deterministic.rad

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.allowed


def mc_limit_check(system: PisotFormSystem, n: int = 1, K: int = 30, count: int = 10**6,
                   seed: int = 0, tol: float = 1e-8, depth: int | None = None,
                   precision: int = DEFAULT_PRECISION) -> MCLimitReport:
    """Compare ``mean(exp(2 pi i n theta**K X))`` over samples with ``m_hat(n)``.

    Each sample's phase ``n theta**K X mod 1`` is accumulated term by term,
    ``n mu_e theta**(K - S_l) mod 1``, from a certified table (conjugate sums
    at or past the T-threshold, direct values below), so no large number is
    ever formed.  The symbol stream matches :func:`sample_nu`.
    """
    system.require_strict()
    if n == 0:
        one = CertifiedComplex.one()
        return MCLimitReport(one, 1 + 0j, 0.0, 0.0, count)
    ev = LimitEvaluator(system, n, precision=precision)
    det = ev.m_hat(tol)
    F = system.field
    exps = np.array(system.exps, dtype=np.int64)
    n_min = system.n_min
    with working_precision(precision):
        amax = max(abs(float(F.real_value(F.coerce(n) * mu))) for mu in system.mus)
    lam = float(F.real_value(F.lam())) * (1 + 1e-15)
    theta = 1 / lam

    def tail(L):
        # 2 pi |n mu| theta**(K - n_min L) / (1 - lambda**n_min)
        return 2 * math.pi * amax * theta ** (K - n_min * L) / (1 - lam ** n_min) * (1 + 1e-12)

    if depth is None:
        depth = max(1, math.ceil(K / n_min))
        while tail(depth) > 1e-12:
            depth += 1
    trunc = tail(depth)
    plan = ev.nu.plan(ev.alpha, precision)
    e_lo = K - int(exps.max()) * depth
    width = K - e_lo + 1
    table = np.zeros((len(system.exps), width))
    table_err = 0.0
    for j in range(len(system.exps)):
        for e in range(e_lo, K + 1):
            ph = plan.phase(j, e)
            v = float(ph.mid)
            table[j, e - e_lo] = v - math.floor(v)
            table_err = max(table_err, ph.rad)
    # every term adds table error plus one rounding of the reduced sum
    trunc += 2 * math.pi * depth * (table_err + 2.0**-52)
    _, _, cum = _float_params(system)
    total = 0j
    for i, start in enumerate(range(0, count, CHUNK)):
        m = min(CHUNK, count - start)
        rng = np.random.Generator(np.random.Philox(seed ^ i))
        eps = _draw_symbols(rng, cum, (m, depth))
        S = np.zeros(m, dtype=np.int64)
        phase = np.zeros(m)
        for l in range(depth):
            e = eps[:, l]
            phase += table[e, K - S - e_lo]
            phase -= np.floor(phase)
            S += exps[e]
        total += np.exp(2j * np.pi * phase).sum()
    emp = complex(total / count) if count else complex(math.nan)
    return MCLimitReport(det, emp, 1 / math.sqrt(count) if count else math.inf, trunc, count)
