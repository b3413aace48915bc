"""Command-line interface, report serialization and run persistence.

Exit codes: 0 success, 1 mathematical-invariant or bound violation detected
in the outputs, 2 invalid input.  Reports carry a ``schema`` field and split
deterministic content (``payload``) from timestamps (``meta``) so repeated
runs with the same seed are byte-identical where it matters.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .constants import (
    continuous_upper_bound_m1,
    diagonal_profile,
    envelope_value,
    optimal_constant,
    optimal_constant_d,
    verify_sharpness,
)
from .continuous import step_function_export, upper_bound_sequence
from .errors import BoundValidityError, ConvmaxError
from .gridfn import GridFn, ratio
from .minimax import SolverConfig, diagonal_constant, general_constant, grid_oracle
from . import pb
from .selftest import run_selftest
from .sidon import CubeSet, SampleConfig, enumerate_verify, max_size_g_sidon, verify_bound

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _wrap(argv, payload, config=None, seed=None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": list(argv),
        "config": config,
        "seed": seed,
        "payload": payload,
        "meta": {"timestamp": time.time(), "version": __version__},
    }


def export_report(payload, fmt: str = "json") -> bytes:
    """Serialize a report payload with stable field ordering."""
    if fmt == "json":
        return (json.dumps(payload, indent=2) + "\n").encode()
    if fmt == "text":
        return (_to_text(payload) + "\n").encode()
    if fmt == "csv":
        if isinstance(payload, dict) and "csv" in payload:
            return payload["csv"].encode()
        raise ValueError("csv format is only available for tabular reports")
    if fmt == "plotdata":
        if isinstance(payload, dict) and "plotdata" in payload:
            return payload["plotdata"].encode()
        raise ValueError("plotdata format is not available for this report")
    raise ValueError(f"unsupported format {fmt!r}")


def _to_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key, val in obj.items():
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_to_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {json.dumps(v) if isinstance(v, (dict, list)) else v}"
                         for v in obj)
    return f"{pad}{obj}"


def _rational(x: Fraction) -> dict:
    return {"exact": str(x), "decimal": float(x)}


def _emit(report: dict, fmt: str, out: str | None) -> None:
    data = export_report(report["payload"] if fmt in ("csv", "plotdata") else report, fmt)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_constant(args, argv) -> int:
    payload = {
        "k": args.k,
        "d": args.d,
        "constant": _rational(optimal_constant_d(args.k, args.d)),
        "constant_1d": _rational(optimal_constant(args.k)),
    }
    if args.k >= 2:
        payload["continuous_upper_bound_m1"] = _rational(continuous_upper_bound_m1(args.k))
    violation = False
    if args.profile:
        prof = diagonal_profile(args.k)
        payload["profile"] = {
            "breakpoints": [str(b) for b in prof.breakpoints],
            "piece_index": prof.piece_index,
            "envelope_min": _rational(prof.envelope_min_value),
            "envelope_min_locations": [str(x) for x in prof.envelope_min_locations],
        }
        samples = 1000
        rows = []
        for t in range(samples + 1):
            x = Fraction(t, samples)
            rows.append(f"{float(x)} {float(envelope_value(args.k, x))}")
        payload["plotdata"] = "\n".join(rows) + "\n"
        violation |= prof.envelope_min_value != optimal_constant(args.k)
    if args.sharpness:
        cert = verify_sharpness(args.k, args.d)
        payload["sharpness"] = {
            "lhs": _rational(cert.lhs),
            "rhs": _rational(cert.rhs),
            "passed": cert.passed,
        }
        violation |= not cert.passed
    _emit(_wrap(argv, payload), args.format, args.out)
    return EXIT_VIOLATION if violation else EXIT_OK


def _cmd_solve(args, argv) -> int:
    cfg = SolverConfig(multistarts=args.multistarts, tol=args.tol, seed=args.seed,
                       threads=args.threads)
    if args.mode == "diagonal":
        res = diagonal_constant(args.k, args.m, cfg)
    else:
        res = general_constant(args.k, args.m, cfg)
    payload = {"result": res.to_dict()}
    # independent recomputation of the reported argument
    fns = [GridFn(1, args.m, w) for w in (res.argument * args.k
                                          if res.diagonal else res.argument)]
    recomputed = float(ratio(fns[: args.k]))
    payload["recomputed_value"] = recomputed
    violation = abs(recomputed - res.value) > 1e-10
    if args.grid:
        oracle = grid_oracle(args.k, args.m, args.grid, diagonal=args.mode == "diagonal")
        payload["grid_oracle"] = oracle.to_dict()
        violation |= res.value > float(oracle.grid_min) + 1e-9
    _emit(_wrap(argv, payload, config=json.loads(cfg.to_json()), seed=args.seed),
          args.format, args.out)
    return EXIT_VIOLATION if violation else EXIT_OK


def _parse_probs(text: str):
    toks = [t.strip() for t in text.split(",") if t.strip()]
    if not toks:
        raise ValueError("empty probability list")
    if all(("/" in t or t in ("0", "1")) for t in toks):
        return [Fraction(t) for t in toks]
    return [float(t) for t in toks]


def _cmd_pb(args, argv) -> int:
    p = _parse_probs(args.p)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    dist = pb.pb_pmf(p)
    exact = dist.is_exact
    payload = {
        "p": [str(x) for x in p],
        "exact": exact,
        "pmf": [str(v) if exact else v for v in dist.pmf],
    }
    violation = False
    if "unimodal" in checks:
        mode, shared = pb.pb_mode(dist)
        payload["mode"] = {"index": mode, "shared": shared}
    if "ulc" in checks:
        rep = pb.check_ultra_log_concave(dist)
        payload["ultra_log_concave"] = {
            "ok": rep.ultra_ok,
            "plain_ok": rep.plain_ok,
            "worst_margin": str(rep.worst_ultra) if exact else float(rep.worst_ultra),
        }
        violation |= not (rep.ultra_ok and rep.plain_ok)
    if "newton" in checks and dist.k >= 3:
        rep = pb.check_newton_differences(dist)
        payload["newton_differences"] = {
            "ok": rep.ok,
            "worst_margin": str(rep.worst) if exact else float(rep.worst),
        }
        violation |= not rep.ok
    if "ratios" in checks:
        ratios = []
        for i in range(1, dist.k + 1):
            try:
                r = pb.likelihood_ratio(p, i)
                ratios.append(str(r) if exact else float(r))
            except pb.ZeroDenominator:
                ratios.append(None)
        payload["likelihood_ratios"] = ratios
    if "lagrange" in checks:
        residuals = {}
        for i in range(1, dist.k + 1):
            try:
                r = pb.lagrange_residual(p, i)
            except pb.ZeroDenominator:
                continue
            residuals[str(i)] = str(r) if exact else float(r)
        payload["lagrange_residuals"] = residuals
    _emit(_wrap(argv, payload), args.format, args.out)
    return EXIT_VIOLATION if violation else EXIT_OK


def _cmd_sidon(args, argv) -> int:
    violation = False
    if args.action == "verify":
        cfg = SampleConfig(args.samples, args.seed) if args.d > 4 else None
        summary = enumerate_verify(args.d, args.k, cfg)
        payload = summary.to_dict()
        violation = summary.failures > 0
    elif args.action == "classify":
        with open(args.set) as fh:
            A = CubeSet.parse(fh.read())
        rep = verify_bound(A, args.k)
        payload = rep.to_dict()
        violation = not rep.passed
    else:  # search
        cfg = SampleConfig(args.samples, args.seed) if args.d > 4 else None
        res = max_size_g_sidon(args.d, args.k, args.g, cfg)
        payload = res.to_dict()
    _emit(_wrap(argv, payload, seed=args.seed), args.format, args.out)
    return EXIT_VIOLATION if violation else EXIT_OK


def _cmd_continuous(args, argv) -> int:
    cfg = SolverConfig(multistarts=args.multistarts, seed=args.seed)
    try:
        table = upper_bound_sequence(args.k, args.m_max, cfg)
    except BoundValidityError as e:
        print(f"bound validity violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    payload = table.to_dict()
    payload["csv"] = table.to_csv()
    if args.export_steps is not None:
        res = diagonal_constant(args.k, max(args.export_steps, 1), cfg)
        payload["step_function"] = step_function_export(res.argument[0], args.k).to_dict()
    _emit(_wrap(argv, payload, seed=args.seed), args.format, args.out)
    return EXIT_OK


def _cmd_selftest(args, argv) -> int:
    payload = run_selftest(args.seed)
    _emit(_wrap(argv, payload, seed=args.seed), args.format, args.out)
    return EXIT_OK if payload["passed"] else EXIT_VIOLATION


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get("CONVMAX_THREADS", "1"))
    parser = argparse.ArgumentParser(
        prog="convmax",
        description="Optimal constants for suprema of k-fold convolutions on discrete cubes",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv", "text", "plotdata"], default="json")
        p.add_argument("--out", default=None, help="write the report to a file")

    p = sub.add_parser("constant", help="closed forms, diagonal profile, sharpness")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="kept for symmetry; output is always exact")
    p.add_argument("--profile", action="store_true")
    p.add_argument("--sharpness", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_constant)

    p = sub.add_parser("solve", help="minimax solvers for C_{k,m} and Cbar_{k,m}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mode", choices=["diagonal", "general"], default="diagonal")
    p.add_argument("--grid", type=int, default=None, help="also run the exact grid oracle")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--multistarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=default_threads)
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("pb", help="Poisson-binomial pmf and structural checks")
    p.add_argument("--p", required=True, help="comma list: floats or exact 'p/q' rationals")
    p.add_argument("--checks", default="unimodal,ulc,newton,ratios,lagrange")
    common(p)
    p.set_defaults(func=_cmd_pb)

    p = sub.add_parser("sidon", help="representation counts and Sidon verification")
    s2 = p.add_subparsers(dest="action", required=True)
    pv = s2.add_parser("verify")
    pv.add_argument("--d", type=int, required=True)
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--samples", type=int, default=1000)
    pv.add_argument("--seed", type=int, default=0)
    common(pv)
    pv.set_defaults(func=_cmd_sidon)
    pc = s2.add_parser("classify")
    pc.add_argument("--set", required=True, help="set file, one 0/1 point per line")
    pc.add_argument("--k", type=int, required=True)
    pc.add_argument("--seed", type=int, default=0)
    common(pc)
    pc.set_defaults(func=_cmd_sidon)
    ps = s2.add_parser("search")
    ps.add_argument("--d", type=int, required=True)
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--g", type=int, required=True)
    ps.add_argument("--samples", type=int, default=1000)
    ps.add_argument("--seed", type=int, default=0)
    common(ps)
    ps.set_defaults(func=_cmd_sidon)

    p = sub.add_parser("continuous", help="upper bounds for the continuous constant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m-max", dest="m_max", type=int, default=1)
    p.add_argument("--multistarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--export-steps", type=int, default=None,
                   help="also export the step function for this m")
    common(p)
    p.set_defaults(func=_cmd_continuous)

    p = sub.add_parser("selftest", help="run the deterministic self-check battery")
    p.add_argument("--seed", type=int, default=42)
    common(p)
    p.set_defaults(func=_cmd_selftest)

    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0,) else 0
    try:
        return args.func(args, argv)
    except (ConvmaxError, ValueError, TypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
