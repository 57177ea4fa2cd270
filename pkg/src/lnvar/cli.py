"""Command-line surface: estimate from data, generate samples, run grids, verify.

Exit codes: 0 success, 2 usage error, 3 data/domain error, 4 verification
failure, 5 budget refusal.  All floats are serialized with 17 significant
digits so CSV output round-trips losslessly.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence, TextIO

from . import __version__
from .errors import BudgetExceededError, DomainError
from .estimator import EstimateReport, SampleAccumulator
from .model import LogNormalParams, params_from_gk, sample
from .montecarlo import (
    DEFAULT_MASTER_SEED,
    GridConfig,
    SimulationCell,
    efficiency_curve,
    run_grid,
)
from .oracle import DEFAULT_MAX_N, DEFAULT_OMEGAS, TermKind, run_verification

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VERIFY = 4
EXIT_BUDGET = 5

CELL_CSV_HEADER = "n,cv,runs,seed,mean_khat,sd_khat,pred_mean,pred_sd,se_mean"

_REPORT_FIELDS = (
    "n",
    "a_n",
    "h_n",
    "k_n",
    "k_hat",
    "g_hat",
    "cv2_conventional",
    "predicted_sd_k_hat",
    "cost_collective",
    "cost_conventional",
)


class _UsageError(Exception):
    pass


def fsig(value: float) -> str:
    """17 significant digits: enough for a lossless float round trip."""
    return format(float(value), ".17g")


def cells_to_csv(cells: Sequence[SimulationCell]) -> str:
    lines = [CELL_CSV_HEADER]
    for c in cells:
        lines.append(
            ",".join(
                (
                    str(c.n),
                    fsig(c.cv),
                    str(c.runs),
                    str(c.seed),
                    fsig(c.mean_khat),
                    fsig(c.sd_khat),
                    fsig(c.pred_mean),
                    fsig(c.pred_sd),
                    fsig(c.se_mean),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _report_csv(report: EstimateReport) -> str:
    values = []
    for name in _REPORT_FIELDS:
        v = getattr(report, name)
        values.append(str(v) if isinstance(v, int) else fsig(v))
    return ",".join(_REPORT_FIELDS) + "\n" + ",".join(values) + "\n"


def _report_text(report: EstimateReport) -> str:
    width = max(len(name) for name in _REPORT_FIELDS)
    lines = []
    for name in _REPORT_FIELDS:
        v = getattr(report, name)
        rendered = str(v) if isinstance(v, int) else fsig(v)
        lines.append(f"{name:<{width}}  {rendered}")
    return "\n".join(lines) + "\n"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _emit_manifest(output_path: str, command: str, config: dict, master_seed: Optional[int]) -> None:
    doc = {
        "command": command,
        "config": config,
        "master_seed": master_seed,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if output_path == "-":
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        with open(output_path + ".manifest.json", "w", encoding="ascii") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _accumulate_stream(stream: TextIO, source: str) -> SampleAccumulator:
    acc = SampleAccumulator()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            x = float(line)
        except ValueError:
            raise DomainError(f"{source}:{lineno}: not a number: {line!r}") from None
        try:
            acc.add(x)
        except DomainError as exc:
            raise DomainError(f"{source}:{lineno}: {exc}") from None
    return acc


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise _UsageError(f"{flag} expects a comma-separated list of integers, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise _UsageError(f"{flag} expects a comma-separated list of numbers, got {text!r}") from None


def _cmd_estimate(args: argparse.Namespace) -> int:
    if args.input == "-":
        acc = _accumulate_stream(sys.stdin, "<stdin>")
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            acc = _accumulate_stream(fh, args.input)
    report = acc.report()
    text = _report_csv(report) if args.format == "csv" else _report_text(report)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_sample(args: argparse.Namespace) -> int:
    have_musig = args.mu is not None or args.sigma2 is not None
    have_gk = args.g is not None or args.k is not None
    if have_musig == have_gk:
        raise _UsageError(
            "give exactly one parameterization: --mu with --sigma2, or --g with --k"
        )
    if have_musig:
        if args.mu is None or args.sigma2 is None:
            raise _UsageError("--mu and --sigma2 must be given together")
        params = LogNormalParams(args.mu, args.sigma2)
    else:
        if args.g is None or args.k is None:
            raise _UsageError("--g and --k must be given together")
        params = params_from_gk(args.g, args.k)
    values = sample(params, args.n, args.seed)
    _write_text(args.output, "".join(fsig(v) + "\n" for v in values))
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = GridConfig(
        n_values=_parse_int_list(args.n, "--n"),
        cv_values=_parse_float_list(args.cv, "--cv"),
        master_seed=args.seed,
        runs_override=args.runs,
        runs_cap=None if args.runs_cap == 0 else args.runs_cap,
        mu_y=args.mu_y,
    )
    cells = run_grid(cfg)
    _write_text(args.output, cells_to_csv(cells))
    _emit_manifest(
        args.output,
        "simulate",
        {
            "n_values": list(cfg.n_values),
            "cv_values": list(cfg.cv_values),
            "runs_override": cfg.runs_override,
            "runs_cap": cfg.runs_cap,
            "mu_y": cfg.mu_y,
        },
        cfg.master_seed,
    )
    return EXIT_OK


def _cmd_efficiency(args: argparse.Namespace) -> int:
    if not args.min < args.max:
        raise _UsageError(f"--min must be below --max, got {args.min} >= {args.max}")
    if args.min <= 0:
        raise _UsageError(f"--min must be positive, got {args.min}")
    if args.points < 2:
        raise _UsageError(f"--points must be >= 2, got {args.points}")
    curve = efficiency_curve(args.min, args.max, args.points, args.spacing)
    lines = ["sigma2,efficiency"]
    lines.extend(f"{fsig(s2)},{fsig(eff)}" for s2, eff in curve)
    _write_text(args.output, "\n".join(lines) + "\n")
    _emit_manifest(
        args.output,
        "efficiency",
        {
            "sigma2_min": args.min,
            "sigma2_max": args.max,
            "points": args.points,
            "spacing": args.spacing,
        },
        None,
    )
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    fault = TermKind(args.inject_fault) if args.inject_fault else None
    report = run_verification(
        max_n=args.max_n,
        omegas=_parse_float_list(args.omega, "--omega"),
        multiplicity_fault=fault,
    )
    for group in report.groups:
        status = "PASS" if group.passed else "FAIL"
        print(f"{group.label:<42} {group.checks:>4} checks  {status}")
    if not report.passed:
        print(f"first mismatch: {report.first_failure}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lnvar",
        description=(
            "Estimate lognormal variability (squared coefficient of variation) "
            "from the ratio of arithmetic to harmonic sample means."
        ),
    )
    parser.add_argument("--version", action="version", version=f"lnvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "estimate",
        help="read one positive value per line and print the estimator report",
    )
    p.add_argument("input", nargs="?", default="-", help="data file, or - for stdin (default)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sample", help="write seeded lognormal variates, one per line")
    p.add_argument("--mu", type=float, help="log-space mean")
    p.add_argument("--sigma2", type=float, help="log-space variance")
    p.add_argument("--g", type=float, help="geometric mean")
    p.add_argument("--k", type=float, help="relative mean ratio (= squared cv)")
    p.add_argument("-n", type=int, required=True, help="number of variates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser(
        "simulate",
        help="run the Monte Carlo grid and write the plot-ready CSV plus manifest",
    )
    p.add_argument("--n", default="2,10,100", help="comma-separated sample sizes")
    p.add_argument("--cv", default="0.1,0.5,1.0", help="comma-separated cv values")
    p.add_argument("--runs", type=int, default=None, help="override runs for every cell")
    p.add_argument(
        "--runs-cap",
        type=int,
        default=10**6,
        help="cap the default floor(1e7/(n-1)) runs rule; 0 removes the cap",
    )
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED, help="master seed")
    p.add_argument("--mu-y", type=float, default=0.0, help="log-space mean of the population")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("efficiency", help="write the large-sample efficiency curve as CSV")
    p.add_argument("--min", type=float, default=0.01, help="smallest log-space variance")
    p.add_argument("--max", type=float, default=4.0, help="largest log-space variance")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser(
        "verify",
        help="cross-check the covariance enumeration oracle against the closed forms",
    )
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument(
        "--omega",
        default=",".join(f"{w:g}" for w in DEFAULT_OMEGAS),
        help="comma-separated mean-ratio values to check",
    )
    p.add_argument(
        "--inject-fault",
        choices=[kind.value for kind in TermKind],
        default=None,
        help=argparse.SUPPRESS,
    )
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())
