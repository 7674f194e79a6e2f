"""Command-line entry point: random-walk Wiener-Hopf solver and adaptive-filter benchmarks.

Usage:
  python main.py solve --r 1,0.5 --b 1,1 --walks 100000 --seed 7
  python main.py precheck --r 1,0.2,0.1
  python main.py identify --config configs/two_tap_ar1.yaml --out report.csv --format csv
  python main.py walks --config configs/walk_study.yaml --out walks.csv
  python main.py bounds --r 1,0.5 --b 1,1 --component 0 --depth 8
"""

import argparse
import logging
import sys
from typing import List, Optional

from corrmath.matrices import toeplitz_from_autocorr
from harness.config import load_experiment, load_walk_study
from harness.report import ReportFormat, emit_report, write_frame
from harness.runner import run_identification
from harness.study import run_walk_study_config
from mcsolve.bounds import error_bounds
from mcsolve.convergence import PrecheckReport, Verdict, precheck_convergence
from mcsolve.splitting import DEFAULT_ABSORB, ProbabilityScheme, SchemeKind
from mcsolve.walks import MAX_STEPS, solve
from utils.errors import WienerMCError
from utils.log import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIVERGENT = 2
EXIT_MARGINAL = 3

VERDICT_EXIT = {
    Verdict.CONVERGENT: EXIT_OK,
    Verdict.DIVERGENT: EXIT_DIVERGENT,
    Verdict.MARGINAL: EXIT_MARGINAL,
}


class CliParser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; 2 means divergence here, so usage errors exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def csv_floats(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def banner(title: str) -> None:
    print("=" * 60)
    print(title)
    print("=" * 60)


def print_precheck(report: PrecheckReport) -> None:
    print("Precheck:")
    print(f"  - Gershgorin disc: center {report.gershgorin_center:.6g}, radius {report.gershgorin_radius:.6g}")
    print(f"  - Widest row disc radius: {report.gershgorin_bound_radius:.6g}")
    print(f"  - Spectral radius of F: {report.spectral_radius_F:.10g}")
    print(f"  - Eigenvalues of R in (0, 2): {'yes' if report.eigen_interval_ok else 'no'}")
    print(f"  - Verdict: {report.verdict.value}")


def cmd_solve(args) -> int:
    R = toeplitz_from_autocorr(args.r)
    scheme = ProbabilityScheme(kind=SchemeKind(args.scheme), absorb=args.absorb)
    report = precheck_convergence(R)

    banner("RANDOM-WALK SOLVE")
    print_precheck(report)
    w, estimates = solve(R, args.b, scheme, walks=args.walks, seed=args.seed, force=args.force,
                         max_steps=args.max_steps, workers=args.workers)

    print(f"\nEstimates ({args.walks} walks per unknown, scheme {scheme.kind.value}, absorb {scheme.absorb}):")
    for i, est in enumerate(estimates):
        line = f"  w[{i}] = {est.mean:.10g}  stderr {est.stderr:.3g}  mean length {est.mean_length:.3g}"
        if est.truncated_walks:
            line += f"  ({est.truncated_walks} truncated)"
        print(line)
    return EXIT_MARGINAL if report.verdict is Verdict.MARGINAL else EXIT_OK


def cmd_precheck(args) -> int:
    report = precheck_convergence(toeplitz_from_autocorr(args.r))
    print_precheck(report)
    return VERDICT_EXIT[report.verdict]


def cmd_identify(args) -> int:
    config = load_experiment(args.config)
    report = run_identification(config, workers=args.workers)
    emit_report(report, ReportFormat(args.format), args.out)

    banner("IDENTIFICATION COMPLETE")
    print(f"  - Algorithms: {', '.join(a.algorithm.value for a in config.algorithms)}")
    print(f"  - Ladder: {list(config.iteration_ladder)}")
    print(f"  - Rows: {len(report.rows)}")
    print(f"  - Report: {args.out}")
    if report.metadata.get("forced_divergent"):
        print("  - WARNING: random-walk rows were forced on a divergent system")
    return EXIT_OK


def cmd_walks(args) -> int:
    study = load_walk_study(args.config)
    table = run_walk_study_config(study)
    write_frame(table, args.out)

    banner("WALK STUDY COMPLETE")
    for row in table.itertuples(index=False):
        print(f"  - {row.walks:>8d} walks: mean |error| {row.mean_abs_error:.4g}, mean stderr {row.mean_stderr:.4g}")
    print(f"  - Report: {args.out}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    R = toeplitz_from_autocorr(args.r)
    scheme = ProbabilityScheme(kind=SchemeKind(args.scheme), absorb=args.absorb)
    rows = error_bounds(R, args.b, args.component, args.depth, scheme)

    print(f"{'j':>3}  {'M^(j)':>12}  {'lower bound':>22}")
    for row in rows:
        walks = "-" if row.min_walks is None else str(row.min_walks)
        print(f"{row.depth:>3}  {walks:>12}  {row.lower_bound:>22.17g}")
    return EXIT_OK


def build_parser() -> CliParser:
    parser = CliParser(prog="main.py", description="Monte Carlo Wiener-Hopf solver and adaptive-filter benchmarks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scheme(p):
        p.add_argument("--scheme", choices=[k.value for k in SchemeKind], default=SchemeKind.UNIFORM.value)
        p.add_argument("--absorb", type=float, default=DEFAULT_ABSORB)

    p = sub.add_parser("solve", help="estimate w by random walks")
    p.add_argument("--r", type=csv_floats, required=True, help="autocorrelation r_0,...,r_{N-1}")
    p.add_argument("--b", type=csv_floats, required=True, help="cross-correlation vector")
    add_scheme(p)
    p.add_argument("--walks", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=MAX_STEPS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true", help="solve even if the precheck says DIVERGENT")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("precheck", help="convergence precheck for R")
    p.add_argument("--r", type=csv_floats, required=True)
    p.set_defaults(func=cmd_precheck)

    p = sub.add_parser("identify", help="run a system-identification experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=[f.value for f in ReportFormat], default=ReportFormat.CSV.value)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("walks", help="error versus walk count study")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_walks)

    p = sub.add_parser("bounds", help="minimum walk counts and error lower bounds")
    p.add_argument("--r", type=csv_floats, required=True)
    p.add_argument("--b", type=csv_floats, required=True)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    add_scheme(p)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except WienerMCError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
