"""Command-line interface.

Subcommands::

    analyze  system report (Pisot data, dimension, screens)
    mhat     one coefficient m_hat(n)
    nuhat    one value nu_hat(alpha * theta**k)
    sweep    m_hat(n) over a grid of p (CSV or JSON)
    verify   property and regression suite

Exit status: 0 success, 2 malformed input, 3 certification failure,
4 sweep with fewer than 99% successful rows, 5 failed verification.
Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .balls import CertifiedComplex, CertifiedReal
from .errors import DualLatticeViolation, InvalidSystem, NoCrossing, PisotIFSError
from .ifs import (
    GenericSystem,
    ProbabilityVector,
    bounded_density_screen,
    classify_uniqueness,
    common_fixed_point,
    degenerate_limit,
    dimension_threshold_roots,
    rationality_screen,
    similarity_dimension,
)
from .limit import LimitEvaluator, line_grid, parse_grid, simplex_grid, sweep
from .serialization import load_system, system_hash, system_to_json
from .transform import NuEvaluator

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_CERTIFICATION = 3
EXIT_SWEEP = 4
EXIT_VERIFY = 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    system: str | None = None
    tol: float = 1e-8
    precision_bits: int = 4096
    n: int = 1
    grid: str = "0:1:1000"
    seed: int = 0
    out: str | None = None
    format: str = "json"
    p: str | None = None
    alpha: str = "1"
    k: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidSystem("--tol must be positive")
        if self.precision_bits < 64:
            raise InvalidSystem("--precision-bits must be at least 64")
        if not 0 <= self.seed < 2**64:
            raise InvalidSystem("--seed must be an unsigned 64-bit integer")
        lo, hi, count = parse_grid(self.grid)
        if not (0 <= lo <= hi <= 1) or count < 1:
            raise InvalidSystem("grid must satisfy 0 <= lo <= hi <= 1 and count >= 1")


def _ball_json(v) -> dict:
    if isinstance(v, CertifiedReal):
        v = CertifiedComplex(v.mid, 0, v.rad)
    return v.to_json()


def _real_json(v: CertifiedReal) -> dict:
    j = _ball_json(v)
    return {"value": j["re"], "radius": j["radius"]}


def _emit(cfg: RunConfig, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(cfg: RunConfig):
    if not cfg.system:
        raise InvalidSystem("--system is required")
    return load_system(cfg.system)


def _with_p(system, spec: str | None):
    if spec is None:
        return system
    try:
        parts = [Fraction(s.strip()) for s in spec.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSystem(f"bad --p {spec!r}") from exc
    return system.with_p(ProbabilityVector(parts, system.field))


# -- subcommands ---------------------------------------------------------------

def cmd_analyze(cfg: RunConfig) -> int:
    system, dec = _load(cfg)
    report: dict = {"system_hash": system_hash(system)}
    if isinstance(system, GenericSystem):
        dim = similarity_dimension(system)
        report.update({
            "mode": "generic",
            "similarity_dimension": {**_real_json(dim.value), "boundary": dim.boundary},
            "common_fixed_point": None if (c := common_fixed_point(system)) is None else str(c),
            "bounded_density": bounded_density_screen(system).value,
            "uniqueness": classify_uniqueness(system).value,
            "rationality_screen": [{**r, "pair": list(r["pair"])} for r in rationality_screen(system)],
        })
        _emit(cfg, report)
        return EXIT_OK
    F = system.field
    report["pisot"] = {
        "min_poly": list(F.coeffs),
        "theta": _real_json(F.theta),
        "conjugates": [_ball_json(z) for z in F.conjugates],
        "precision_bits": F.precision_bits,
        "irreducibility": F.irreducibility,
    }
    report["canonical"] = system_to_json(system)
    report["thresholds"] = list(system.thresholds)
    report["m0"] = system.m0
    dim = similarity_dimension(system)
    report["similarity_dimension"] = {**_real_json(dim.value), "boundary": dim.boundary}
    if len(system.exps) == 2 and system.strict:
        try:
            lo, hi = dimension_threshold_roots(system)
            report["dimension_thresholds"] = {"low": _real_json(lo), "high": _real_json(hi)}
        except NoCrossing:
            report["dimension_thresholds"] = "no_crossing"
    c = common_fixed_point(system)
    report["common_fixed_point"] = None if c is None else c.to_json()
    if c is None:
        report["degenerate_limit"] = None
    else:
        q = degenerate_limit(system)
        report["degenerate_limit"] = f"{q.numerator}/{q.denominator}"
    if system.strict:
        report["bounded_density"] = bounded_density_screen(system).value
        report["uniqueness"] = classify_uniqueness(system, dec).value
    _emit(cfg, report)
    return EXIT_OK


def cmd_mhat(cfg: RunConfig) -> int:
    system, _ = _load(cfg)
    system = _with_p(system, cfg.p)
    t0 = time.perf_counter()
    if cfg.n == 0:
        value, k_anchor = CertifiedComplex.one(), None
    else:
        ev = LimitEvaluator(system, cfg.n, max_precision=cfg.precision_bits)
        value, k_anchor = ev.m_hat(cfg.tol), ev.k_anchor
    elapsed = time.perf_counter() - t0
    out = {"n": cfg.n, "p": system.p.to_json(), "k_anchor": k_anchor, "tolerance": cfg.tol,
           **_ball_json(value), "system_hash": system_hash(system)}
    _emit(cfg, out)
    # timing goes to stderr so that stdout stays byte-identical across runs
    print(json.dumps({"wall_time_s": round(elapsed, 3)}), file=sys.stderr)
    return EXIT_OK


def cmd_nuhat(cfg: RunConfig) -> int:
    system, _ = _load(cfg)
    system = _with_p(system, cfg.p)
    F = system.field
    try:
        a = json.loads(cfg.alpha)
    except json.JSONDecodeError:
        a = cfg.alpha
    try:
        alpha = F.element(tuple(a["num"]), a.get("den", 1)) if isinstance(a, dict) else F.rational(Fraction(str(a)))
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise InvalidSystem(f"bad --alpha {cfg.alpha!r}") from exc
    v = NuEvaluator(system, max_precision=cfg.precision_bits).nu_hat(alpha, cfg.k, cfg.tol)
    _emit(cfg, {"t": {"alpha": alpha.to_json(), "k": cfg.k}, **_ball_json(v)})
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    system, _ = _load(cfg)
    lo, hi, count = parse_grid(cfg.grid)
    N = len(system.exps) - 1
    grid = line_grid(lo, hi, count) if N == 1 else simplex_grid(N, lo, hi, count)
    table = sweep(system, cfg.n, grid, cfg.tol, grid_spec=cfg.grid)
    meta = table.metadata(system_hash(system))
    if cfg.format == "csv":
        text = "# " + json.dumps(meta, sort_keys=True) + "\n" + table.to_csv()
    else:
        rows = []
        for r in table.rows:
            row = {"index": r.index, "p": [str(v) for v in r.p], "status": r.status}
            if r.value is not None:
                row.update(_ball_json(r.value))
            rows.append(row)
        text = json.dumps({"metadata": meta, "rows": rows}, indent=2, sort_keys=True) + "\n"
    _emit(cfg, text)
    return EXIT_OK if table.success_fraction >= 0.99 else EXIT_SWEEP


def cmd_verify(cfg: RunConfig) -> int:
    from .checks import run_suite, system_checks

    if cfg.system:
        try:
            system, _ = _load(cfg)
        except PisotIFSError as exc:
            kind = type(exc).__name__
            if isinstance(exc, DualLatticeViolation) and kind != "DualLatticeViolation":
                kind = f"DualLatticeViolation ({kind})"
            report = {"passed": False, "checks": [{"name": "load system", "passed": False,
                                                    "measured": None, "allowed": None,
                                                    "detail": f"{kind}: {exc}"}]}
            _emit(cfg, report)
            return EXIT_VERIFY
        results = system_checks(system, cfg.seed, cfg.tol)
    else:
        results = run_suite(cfg.seed)
    for c in results:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {c.name}: measured {c.measured:.3g} vs allowed {c.allowed:.3g}"
              f" ({c.seconds:.1f}s) {c.detail}", file=sys.stderr)
    ok = all(c.passed for c in results)
    _emit(cfg, {"passed": ok, "checks": [c.to_json() for c in results]})
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"analyze": cmd_analyze, "mhat": cmd_mhat, "nuhat": cmd_nuhat,
            "sweep": cmd_sweep, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pisot-ifs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", metavar="FILE", help="system description (JSON)")
    common.add_argument("--tol", type=float, default=1e-8, help="absolute radius target")
    common.add_argument("--precision-bits", type=int, default=4096, dest="precision_bits",
                        help="cap on the working precision")
    common.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="analyze a system")
    p = sub.add_parser("mhat", parents=[common], help="evaluate m_hat(n)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", help="override probabilities, e.g. 1/2,1/2")
    p = sub.add_parser("nuhat", parents=[common], help="evaluate nu_hat(alpha theta^k)")
    p.add_argument("--alpha", default="1", help='rational "a/b" or {"num": [...], "den": d}')
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--p", help="override probabilities")
    p = sub.add_parser("sweep", parents=[common], help="m_hat(n) over a grid of p")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--grid", default="0:1:1000", help="lo:hi:count for p_1 (p_1..p_N for N > 1)")
    sub.add_parser("verify", parents=[common], help="run the verification suite")
    return parser


def _fail(code: int, exc: BaseException) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}),
          file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
        return COMMANDS[cfg.command](cfg)
    except (InvalidSystem, ValueError, OSError) as exc:
        return _fail(EXIT_MALFORMED, exc)
    except PisotIFSError as exc:
        return _fail(EXIT_CERTIFICATION, exc)


if __name__ == "__main__":
    sys.exit(main())
