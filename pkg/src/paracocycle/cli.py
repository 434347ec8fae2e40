"""Command-line interface: ``paracocycle {pressure,curve,critical,gibbs,verify,measure}``.

Options come from flags, then from a ``--config`` file of ``key = value`` lines,
then from the defaults below. Exit codes: 0 success, 1 invalid input,
2 budget or precision limit, 3 property violation, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .curve import pressure_bracket, pressure_curve, t_grid
from .enumerate import Budget
from .errors import CocycleError, InvalidInputError, PropertyViolation
from .induced import (DEFAULT_TC_CONFIGS, expected_return_time, gibbs_cylinder_estimate,
                      heuristic_pressure, heuristic_t_c, induced_fekete_bracket, solve_t_c)
from .measures import measure_report
from .reports import CURVE_HEADER, ReportRecord, certified, certified_value, estimate, write_csv
from .series import solve_t_prime, solve_t_star
from .suites import DEFAULT_TRIALS, SUITE_ALIASES, SUITES, run_suite
from .transfer import ProjectiveGrid, transfer_eigenvalue

COARSE = {"tstar": (-2.18, -2.17), "tprime": (-1.83, -1.82), "tc": (-2.18, -1.82)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return v


def _t_or_tc(text: str) -> float | str:
    return "tc" if text == "tc" else _finite(text)


def _common(p: argparse.ArgumentParser) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     help="JSON report (default)")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--threads", type=_positive_int, default=1,
                   help="worker threads; results do not depend on it")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-sec", type=_positive_float, default=None,
                   help="wall-clock budget for enumerations")
    p.add_argument("--config", type=Path, help="file of key = value defaults")
    p.set_defaults(format="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paracocycle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pressure", help="certified bracket on P(t)")
    p.add_argument("--t", type=_finite, default=None)
    p.add_argument("--n-max", type=_positive_int, default=16)
    p.add_argument("--no-induced", dest="induced", action="store_false",
                   help="skip the induced-system certificates")
    p.add_argument("--N", type=_positive_int, default=None,
                   help="also report the truncated induced bracket and transfer estimate at this N")
    p.add_argument("--k-max", type=_positive_int, default=4)
    p.add_argument("--resolution", type=_positive_int, default=2048)
    _common(p)

    p = sub.add_parser("curve", help="pressure curve data")
    p.add_argument("--t-min", type=_finite, default=-3.0)
    p.add_argument("--t-max", type=_finite, default=1.0)
    p.add_argument("--step", type=_positive_float, default=0.25)
    p.add_argument("--n-max", type=_positive_int, default=16)
    p.add_argument("--no-induced", dest="induced", action="store_false")
    p.add_argument("--tolerance", type=_positive_float, default=1e-3,
                   help="bisection tolerance for the t_c bracket that sets the regimes")
    _common(p)

    p = sub.add_parser("critical", help="t*, t' or t_c")
    p.add_argument("--which", choices=sorted(COARSE), default=None)
    p.add_argument("--tolerance", type=_positive_float, default=None,
                   help="default 1e-6 for tstar/tprime and 1e-3 for tc")
    p.add_argument("--no-heuristic", dest="heuristic", action="store_false")
    p.add_argument("--resolution", type=_positive_int, default=1024)
    _common(p)

    p = sub.add_parser("gibbs", help="induced Gibbs cylinder weights")
    p.add_argument("--t", type=_t_or_tc, help="a number, or tc for the heuristic t_c")
    p.add_argument("--N", type=_positive_int, default=10)
    p.add_argument("--P", type=str, default="auto", help="discount, or auto")
    p.add_argument("--method", choices=["word-ratio", "eigen"], default="word-ratio")
    p.add_argument("--k", type=_positive_int, default=3, help="word depth; k + 1 is run for stability")
    p.add_argument("--resolution", type=_positive_int, default=1024)
    _common(p)

    p = sub.add_parser("verify", help="property suites")
    p.add_argument("--suite", default=None,
                   choices=sorted(SUITES) + sorted(SUITE_ALIASES) + ["all"])
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS)
    _common(p)

    p = sub.add_parser("measure", help="renewal equilibrium witness")
    p.add_argument("--t", type=_finite, default=None)
    p.add_argument("--symbols", type=_positive_int, default=10**7)
    p.add_argument("--seeds", type=_positive_int, default=32)
    p.add_argument("--no-mc", dest="mc", action="store_false")
    _common(p)
    return parser


# options that must come from the command line or the config file
REQUIRED = {"pressure": ("t",), "gibbs": ("t",), "measure": ("t",), "critical": ("which",),
            "verify": ("suite",)}

_TRUE, _FALSE = ("1", "true", "yes", "on"), ("0", "false", "no", "off")


def _config_value(action: argparse.Action, key: str, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        if raw.lower() not in _TRUE + _FALSE:
            raise InvalidInputError(f"config {key} = {raw!r} is not a boolean")
        return raw.lower() in _TRUE
    if key == "format":
        if raw not in ("json", "csv"):
            raise InvalidInputError(f"config format = {raw!r} is not json or csv")
        return raw
    try:
        value = (action.type or str)(raw)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise InvalidInputError(f"config {key} = {raw!r}: {exc}") from exc
    if action.choices is not None and value not in action.choices:
        raise InvalidInputError(f"config {key} = {raw!r} is not one of {sorted(action.choices)}")
    return value


def read_config(path: Path) -> dict[str, str]:
    """Flat ``key = value`` lines; blank lines and lines starting with # are skipped."""
    out = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
    for no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidInputError(f"{path}:{no}: expected key = value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in subparser._actions}
        defaults = {}
        for key, raw in read_config(args.config).items():
            if key not in actions or key in ("config", "help"):
                raise InvalidInputError(f"config key {key!r} is not an option of {args.command}")
            defaults[key] = _config_value(actions[key], key, raw)
        subparser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    missing = [k for k in REQUIRED.get(args.command, ()) if getattr(args, k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise InvalidInputError(f"paracocycle {args.command}: missing required option {flags}")
    return args


def _inputs(args: argparse.Namespace) -> dict:
    skip = {"out", "config", "format", "command", "threads", "budget_sec"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- commands -------------------------------------------------------------------

def cmd_pressure(args, budget: Budget) -> ReportRecord:
    pb = pressure_bracket(args.t, args.n_max, induced=args.induced, threads=args.threads,
                          budget=budget)
    rec = ReportRecord("pressure", _inputs(args))
    rec.certified["pressure"] = certified(pb.lower, pb.upper, pb.method.value, n_used=pb.n_used)
    rec.certified["fekete_sequence"] = certified(
        [b.lo for b in pb.sequence], [b.hi for b in pb.sequence], "fullshift-fekete",
        side="lower bounds" if args.t < 0 else "upper bounds" if args.t > 0 else "exact")
    rec.certified["sources"] = {k: certified(lo, hi, k) for k, (lo, hi) in pb.sources.items()}
    rec.estimates["pressure_estimate"] = estimate(pb.estimate, "log(s_n / s_{n-1}) clipped to the bracket")
    rec.provenance = {
        "pressure": "max/min over full-shift partition sums, the P >= 0 and log 2 anchors, "
                    "the renewal witness and the induced sign test",
        "fekete_sequence": "(1/n) log s_n(t) over all words of length n",
    }
    if args.N is not None:
        rep = induced_fekete_bracket(args.t, args.N, args.k_max, threads=args.threads, budget=budget)
        rec.certified["induced_truncated"] = certified(
            rep.bracket.lower, rep.bracket.upper, "induced-fekete", N=args.N, k_max=args.k_max,
            gap_bound=rep.gap_bound)
        tr = transfer_eigenvalue(args.t, args.N, ProjectiveGrid(args.resolution))
        rec.estimates["induced_transfer"] = estimate(tr.log_lambda, "transfer-heuristic",
                                                     iterations=tr.report.iterations,
                                                     residual=tr.report.residual)
        rec.provenance["induced_truncated"] = "super/sub-multiplicativity of block sums z_k"
        rec.provenance["induced_transfer"] = "power iteration on the slope-grid operator"
    return rec


def cmd_curve(args, budget: Budget) -> tuple[ReportRecord, str]:
    crit = solve_t_c(args.tolerance, heuristic=False, threads=args.threads, budget=budget)
    ts = t_grid(args.t_min, args.t_max, args.step)
    rows = pressure_curve(ts, crit.certified, args.n_max, induced=args.induced,
                          threads=args.threads, budget=budget)
    rec = ReportRecord("curve", _inputs(args))
    rec.certified["t_c"] = certified(crit.certified.lo, crit.certified.hi, "induced-fekete")
    rec.certified["rows"] = [certified(r.lower, r.upper, "combined", t=r.t, regime=r.regime.value)
                             for r in rows]
    rec.estimates["row_estimates"] = [estimate(r.estimate, "clipped full-shift ratio", t=r.t)
                                      for r in rows]
    rec.provenance["rows"] = "certified pressure brackets on a t grid"
    text = write_csv(CURVE_HEADER, [(r.t, r.lower, r.upper, r.estimate, r.regime.value) for r in rows])
    return rec, text


def cmd_critical(args, budget: Budget) -> ReportRecord:
    rec = ReportRecord("critical", _inputs(args))
    lo, hi = COARSE[args.which]
    if args.which in ("tstar", "tprime"):
        tol = args.tolerance or 1e-6
        r = (solve_t_star if args.which == "tstar" else solve_t_prime)(tol)
        rec.certified[args.which] = certified(r.lower, r.upper, "series bisection", N=r.N,
                                              width=r.width)
        rec.certified["series_at_lower"] = certified(*r.value_at_lower.as_tuple(), "series enclosure")
        rec.certified["series_at_upper"] = certified(*r.value_at_upper.as_tuple(), "series enclosure")
        inside = lo < r.lower and r.upper < hi
        rec.provenance[args.which] = ("root of sum (1 + ij)^t = 1" if args.which == "tstar"
                                      else "root of sum (n + 1/n)^t = 1")
    else:
        tol = args.tolerance or 1e-3
        r = solve_t_c(tol, heuristic=args.heuristic, grid=ProjectiveGrid(args.resolution),
                      threads=args.threads, budget=budget)
        rec.certified["tc"] = certified(r.certified.lo, r.certified.hi, "induced-fekete",
                                        sign_of_tc_plus_2=r.sign, warning=r.warning,
                                        bisection_steps=r.steps,
                                        lower_configs=[list(c) for c in DEFAULT_TC_CONFIGS])
        rec.certified["t_star"] = certified(*r.t_star.as_tuple(), "series bisection")
        rec.certified["t_prime"] = certified(*r.t_prime.as_tuple(), "series bisection")
        if r.heuristic is not None:
            rec.estimates["tc_heuristic"] = estimate(r.heuristic, "transfer-heuristic",
                                                     inside_certified=r.heuristic in r.certified)
        inside = lo < r.certified.lo and r.certified.hi < hi
        rec.provenance["tc"] = ("left end: pair series below 1; right end: certified positive "
                                "lower bound of the induced pressure")
    rec.diagnostics["coarse_bracket"] = [lo, hi]
    rec.diagnostics["inside_coarse_bracket"] = bool(inside)
    return rec


def cmd_gibbs(args, budget: Budget) -> ReportRecord:
    grid = ProjectiveGrid(args.resolution)
    t = heuristic_t_c(grid) if args.t == "tc" else args.t
    if args.P == "auto":
        P = heuristic_pressure(t, grid)
    else:
        try:
            P = float(args.P)
        except ValueError as exc:
            raise InvalidInputError(f"--P must be a number or auto, got {args.P!r}") from exc
    inputs = _inputs(args)
    inputs["t_used"], inputs["P_used"] = t, P
    rec = ReportRecord("gibbs", inputs)
    mu, rep = gibbs_cylinder_estimate(t, args.N, args.method, args.k, P, grid=grid,
                                      threads=args.threads, budget=budget, max_words=2**27)
    est = {"weights": mu.weights, "C1": rep.C1, "C2": rep.C2, "band": rep.band,
           "log_lambda": rep.log_lambda, "depth": rep.depth}
    if args.method == "word-ratio" and args.N > 1:
        _, rep2 = gibbs_cylinder_estimate(t, args.N, args.method, args.k + 1, P, threads=args.threads,
                                          budget=budget, max_words=2**27)
        est["band_next_depth"] = rep2.band
        est["band_relative_change"] = abs(rep2.band - rep.band) / rep.band
    decay = bool(np.all(np.diff(mu.weights[1:, :], axis=0) < 0)) if args.N > 2 else True
    est["decays_in_m_beyond_2"] = decay
    rec.estimates["gibbs"] = estimate(est, args.method)
    rt = expected_return_time(mu, t)
    rec.estimates["return_time"] = estimate(rt.value, "truncated mean of m + n",
                                            row_exponent=rt.row_exponent,
                                            column_exponent=rt.column_exponent,
                                            analytic_converges=rt.analytic_converges)
    rec.provenance["gibbs"] = "cylinder masses of the truncated induced system"
    return rec


def cmd_verify(args, budget: Budget) -> ReportRecord:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    rec = ReportRecord("verify", _inputs(args))
    bad = None
    for name in names:
        budget.check(f"suite {name}")
        r = run_suite(name, args.trials, args.seed)
        rec.certified[r.suite] = certified_value(r.violations, "property suite", trials=r.trials,
                                                 counterexample=r.counterexample)
        if r.violations and bad is None:
            bad = r
    if bad is not None:
        raise _Violation(rec, PropertyViolation(f"suite {bad.suite} found a violation",
                                                bad.counterexample))
    return rec


def cmd_measure(args, budget: Budget) -> ReportRecord:
    m = measure_report(args.t, args.symbols, args.seeds, args.seed, mc=args.mc)
    rec = ReportRecord("measure", _inputs(args))
    spec = m.spec
    rec.certified["pressure_witness"] = certified(*m.witness_bounds.as_tuple(), "renewal witness",
                                                  convention="blocks")
    rec.estimates["spec"] = estimate({"N": spec.N, "Q": spec.Q, "W": spec.W, "p": spec.p},
                                     "renewal parameters (float)")
    rec.estimates["entropy_per_block"] = estimate(m.entropy_induced, "-sum p log p",
                                                  convention="blocks")
    lb = m.lyapunov
    rec.estimates["lyapunov_bounds"] = estimate(
        {"upper_per_block": lb.upper_per_block, "lower_per_pair": lb.lower_per_pair,
         "upper_per_symbol": lb.upper_per_symbol, "lower_per_symbol": lb.lower_per_symbol,
         "block_mass": lb.block_mass, "pair_mass": lb.pair_mass},
        "analytic formulas in float64", conversion="per symbol = per return * mu(D)")
    if m.mc is not None:
        inside = m.mc.ci[1] >= lb.lower_per_symbol and m.mc.ci[0] <= lb.upper_per_symbol
        rec.estimates["mc_lyapunov"] = estimate(m.mc.estimate, "Monte Carlo", ci95=list(m.mc.ci),
                                                symbols=m.mc.symbols, seeds=len(m.mc.per_seed),
                                                within_bounds=inside)
    rec.estimates["kac"] = estimate(m.kac._asdict(), "Kac and Abramov identities")
    rec.provenance["pressure_witness"] = "log Q / W for the renewal measure"
    return rec


class _Violation(Exception):
    def __init__(self, record: ReportRecord, error: PropertyViolation):
        self.record, self.error = record, error


COMMANDS: dict[str, Callable] = {"pressure": cmd_pressure, "curve": cmd_curve,
                                 "critical": cmd_critical, "gibbs": cmd_gibbs,
                                 "verify": cmd_verify, "measure": cmd_measure}


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _error_record(command: str, exc: CocycleError) -> ReportRecord:
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    if getattr(exc, "counterexample", None) is not None:
        err["counterexample"] = exc.counterexample
    if getattr(exc, "residual", None) is not None:
        err["residual"] = exc.residual
    return ReportRecord(command, {}, error=err)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.monotonic()
    command = next((a for a in argv if a in COMMANDS), "unknown")
    args = None
    try:
        args = parse_args(argv)
        budget = Budget(args.budget_sec)
        result = COMMANDS[args.command](args, budget)
        rec, csv_text = result if isinstance(result, tuple) else (result, None)
        rec.wall_time = time.monotonic() - start
        if args.format == "csv":
            _emit(csv_text if csv_text is not None else rec.to_csv(), args.out)
        else:
            _emit(rec.to_json(), args.out)
        return 0
    except _Violation as v:
        v.record.error = _error_record(command, v.error).error
        v.record.wall_time = time.monotonic() - start
        _emit(v.record.to_json(), args.out if args else None)
        print(f"error: {v.error}", file=sys.stderr)
        return v.error.exit_code
    except CocycleError as exc:
        rec = _error_record(command, exc)
        rec.wall_time = time.monotonic() - start
        sys.stdout.write(rec.to_json())
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
