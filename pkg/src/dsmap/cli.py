"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import io, theory
from .analytics import (
    PortraitMode,
    SweepResult,
    render_from_decomposition,
    sweep_escape_lengths,
    young_from_decomposition,
)
from .config import CliConfig, load_config
from .errors import DSMError, InvalidArgument, InvariantViolation, ResourceError
from .lattice import LatticeState, make_params
from .orbits import decompose, escape_length, trace_orbit, trace_orbit_exact

SUITES = ("symmetry", "bands", "bottleneck", "q4k2", "dwell", "two-rise", "window", "period4", "lower-bound")


class UsageError(DSMError):
    pass


def _add_params(p: argparse.ArgumentParser, q_required: bool = True) -> None:
    p.add_argument("--p", type=int, default=1, help="numerator of the twist alpha = p/q (default 1)")
    p.add_argument("--q", type=int, required=q_required, help="denominator of the twist alpha = p/q")
    p.add_argument("--a", type=int, default=0, help="numerator of the initial level y0 = a/b (default 0)")
    p.add_argument("--b", type=int, default=1, help="denominator of the initial level y0 = a/b (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsmap",
        description="Exact simulation of the discontinuous (sign-kick) standard map on its finite lattices.",
    )
    parser.add_argument("--threads", type=int, help="worker threads, 0 = one per CPU (overrides config)")
    parser.add_argument("--memory-budget-states", type=int, help="largest lattice to decompose (overrides config)")
    parser.add_argument("--output-dir", help="directory for relative output paths (overrides config)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "orbit",
        help="trace one lattice orbit",
        description="Trace the orbit of lattice point (r, j) and report its period, winding number and "
        "class. Reproduces the bounded/escaping classification; e.g. q=3, (r,j)=(1,0) is the period-3 "
        "escaping orbit.",
    )
    _add_params(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="also iterate the rational cylinder map and cross-check")

    p = sub.add_parser(
        "decompose",
        help="split the lattice into periodic orbits",
        description="Partition Z_bq x Z_q into periodic orbits. Reproduces the period portrait data, "
        "e.g. largest period 6168 and no escaping orbit at q=992.",
    )
    _add_params(p)
    p.add_argument("--out", help="write the per-state table r,j,orbit_id,period,winding")

    p = sub.add_parser(
        "ell",
        help="escape length for alpha = 1/q, y0 = 0",
        description="Length of the unique escaping orbit for odd q (alpha = 1/q, y0 = 0), e.g. "
        "414639 at q = 991, and sweeps of ell(q)/q^2 whose mean is close to 0.43.",
    )
    p.add_argument("--q", type=int)
    p.add_argument("--q-from", type=int)
    p.add_argument("--q-to", type=int)
    p.add_argument("--out", help="write the sweep as q,ell,ratio CSV")

    p = sub.add_parser(
        "search",
        help="smallest y0 = a/b giving an escaping orbit for alpha = p/4k",
        description="Search b = 1, 2, ... and then a for the first initial level a/b with an "
        "escaping orbit at q = 4k. Reproduces the minimal-b table (k=1..6: b = 3, 13, 11, 45, 57, 103).",
    )
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b-max", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--a", type=int, action="append", help="restrict the numerator (repeatable)")

    p = sub.add_parser(
        "verify",
        help="run a verification suite",
        description="Machine-check the structural results: point symmetry, band invariance, the "
        "critical-level boundedness theorem, the q=4k+2 escape and its mod-4 invariant, the dwell and "
        "two-rise lemmas, the q log q window bound, the period-4 census and the escape-length lower bound.",
    )
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--q-max", type=int, help="largest q for q-indexed suites")
    p.add_argument("--k-max", type=int, help="largest k for k-indexed suites")
    p.add_argument("--out", help="write the verdict JSON here")

    p = sub.add_parser(
        "render",
        help="write a phase portrait as a 16-bit PGM",
        description="Phase portrait of the lattice: 'period' shades each cell by the rank of its "
        "orbit's period (shorter is lighter); 'escape' lights the escaping orbit.",
    )
    _add_params(p)
    p.add_argument("--mode", required=True, choices=[m.value for m in PortraitMode])
    p.add_argument("--out", required=True)

    p = sub.add_parser(
        "young",
        help="write the Young diagram of orbit periods",
        description="Partition of the lattice size into orbit periods, scaled by 1/q on both axes, as "
        "exact rationals. --bounded-only drops escaping orbits (the odd-q comparison diagram).",
    )
    _add_params(p)
    p.add_argument("--bounded-only", action="store_true")
    p.add_argument("--out", required=True)
    return parser


def _out(cfg: CliConfig, path: str) -> Path:
    out = Path(path)
    return out if out.is_absolute() else cfg.output_dir / out


def _params(args):
    return make_params(args.p, args.q, args.a, args.b)


def cmd_orbit(args, cfg) -> int:
    params = _params(args)
    start = LatticeState(args.r, args.j)
    orbit = trace_orbit(start, params)
    print(f"period={orbit.period} winding={orbit.winding} class={orbit.orbit_class.value} "
          f"representative=({orbit.representative.r},{orbit.representative.j})")
    if args.exact:
        exact = trace_orbit_exact(start, params)
        same = exact == orbit
        print(f"exact: period={exact.period} winding={exact.winding} agrees={'yes' if same else 'no'}")
        if not same:
            return 1
    return 0


def cmd_decompose(args, cfg) -> int:
    d = decompose(_params(args), cfg.memory_budget_states)
    periods = [o.period for o in d.orbits]
    print(f"states={d.total_points} orbits={len(d.orbits)} escaping={len(d.escaping)} max_period={max(periods)}")
    if args.out:
        io.write_decomposition(d, _out(cfg, args.out))
    return 0


def cmd_ell(args, cfg) -> int:
    if args.q is not None:
        if args.q_from is not None or args.q_to is not None:
            raise UsageError("use either --q or --q-from/--q-to")
        result = SweepResult((escape_length(args.q),))
    elif args.q_from is not None and args.q_to is not None:
        result = sweep_escape_lengths(args.q_from, args.q_to, cfg.workers)
    else:
        raise UsageError("ell needs --q or both --q-from and --q-to")
    for row in io.sweep_rows(result):
        print(",".join(map(str, row)))
    if len(result.records) > 1:
        print(f"mean_ratio={result.mean_ratio!r} min_ratio={result.min_ratio!r} max_ratio={result.max_ratio!r}",
              file=sys.stderr)
    if args.out:
        io.write_sweep(result, _out(cfg, args.out))
    return 0


def cmd_search(args, cfg) -> int:
    found = theory.search_escape_seed(args.k, args.b_max, args.p, args.a, cfg.memory_budget_states)
    print(f"k={args.k} not-found (b<={args.b_max})" if found is None else f"k={args.k} b={found[0]} a={found[1]}")
    return 0


def run_suite(name: str, q_max: Optional[int], k_max: Optional[int], cfg: CliConfig) -> theory.VerdictReport:
    t, budget = cfg.workers, cfg.memory_budget_states
    if name == "symmetry":
        return theory.verify_symmetry()
    if name == "bands":
        return theory.verify_bands()
    if name == "bottleneck":
        return theory.verify_boundedness_sweep(q_max or 200, budget, t)
    if name == "q4k2":
        return theory.verify_q4k2_sweep(k_max or 50, threads=t)
    if name == "dwell":
        return theory.verify_dwell(q_max or 99)
    if name == "two-rise":
        return theory.verify_two_rise_sweep(q_max or 99)
    if name == "window":
        qs = (101, 331, 991) if q_max is None else range(3, q_max + 1, 2)
        return theory.verify_window_sweep(tuple(qs))
    if name == "period4":
        return theory.verify_period4(k_max or 25)
    if name == "lower-bound":
        return theory.verify_lower_bound(q_max or 2001, t)
    raise UsageError(f"unknown suite {name}")


def cmd_verify(args, cfg) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    report = theory.VerdictReport(args.suite, {"q_max": args.q_max, "k_max": args.k_max})
    for name in names:
        sub = run_suite(name, args.q_max, args.k_max, cfg)
        print(f"{name}: {'PASS' if sub.passed else 'FAIL'} ({len(sub.cases)} cases)", file=sys.stderr)
        for c in sub.failures()[:20]:
            print(f"  {c.id}: expected {c.expected}, observed {c.observed}", file=sys.stderr)
        report.extend(sub, f"{name}/" if len(names) > 1 else "")
    print(f"suite={args.suite} passed={'true' if report.passed else 'false'} cases={len(report.cases)}")
    if args.out:
        io.write_verdict(report, _out(cfg, args.out))
    return 0 if report.passed else 1


def cmd_render(args, cfg) -> int:
    d = decompose(_params(args), cfg.memory_budget_states)
    io.write_pgm(render_from_decomposition(d, PortraitMode(args.mode)), _out(cfg, args.out))
    return 0


def cmd_young(args, cfg) -> int:
    d = decompose(_params(args), cfg.memory_budget_states)
    io.write_young(young_from_decomposition(d, args.bounded_only), _out(cfg, args.out))
    return 0


COMMANDS = {
    "orbit": cmd_orbit,
    "decompose": cmd_decompose,
    "ell": cmd_ell,
    "search": cmd_search,
    "verify": cmd_verify,
    "render": cmd_render,
    "young": cmd_young,
}


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config().override({
            "threads": args.threads,
            "memory_budget_states": args.memory_budget_states,
            "output_dir": args.output_dir,
        })
        return COMMANDS[args.command](args, cfg)
    except (UsageError, InvalidArgument) as exc:
        print(f"dsmap: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"dsmap: resource error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"dsmap: invariant violated: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dsmap: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
