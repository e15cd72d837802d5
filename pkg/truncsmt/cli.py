"""Command line entry: ``python -m truncsmt <command> ...``.

Exit codes: 0 on completion, 2 on a violated precondition, 3 when a numerical
procedure does not converge, 1 on a broken internal invariant.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import schemas
from .config import settings
from .exceptions import DomainError, PreconditionError, TruncSmtError
from .models import OutputFormat
from .services import reports
from .services.filtration import build_filtration, filtration_big_delta, truncation_report
from .services.lemmas import lemma_suite
from .services.nevanlinna import nevanlinna_table
from .services.parser import parse_expr, parse_form
from .services.polynomials import HomogeneousPoly
from .services.scenarios import load_scenario, proximity_sum_check, run_smt_scenario
from .services.theorem_r import theorem_r_check
from .services.zeros import zero_scan

logger = logging.getLogger(__name__)


def _global_flags() -> argparse.ArgumentParser:
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--out", choices=[f.value for f in OutputFormat], default=argparse.SUPPRESS,
                       help="Report format (default: csv).")
    flags.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                       help="Absolute quadrature tolerance (default: 1e-4).")
    flags.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                       help="Worker threads for per-radius / per-subset work.")
    flags.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                       help="Seed for the randomized suites.")
    return flags


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = argparse.ArgumentParser(
        prog="truncsmt",
        parents=[flags],
        description="Explicit truncation levels for the second main theorem: exact algebra and numeric checks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    lemmas = commands.add_parser("lemmas", parents=[flags], help="Run the lemma regression suites.")
    lemmas.add_argument("--caps", type=Path, default=None,
                        help='JSON file with per-block caps, e.g. {"lemma3": {"n": 2, "d": 3, "alpha": 12}}.')

    filtration = commands.add_parser("filtration", parents=[flags], help="Filtration levels and Delta.")
    filtration.add_argument("--n", type=int, required=True)
    filtration.add_argument("--d", type=int, required=True)
    filtration.add_argument("--alpha", type=int, required=True)
    filtration.add_argument("--gammas", type=Path, default=None,
                            help="File with one form per line (default: x_j^d, j = 1..n).")

    bound = commands.add_parser("bound", parents=[flags], help="Truncation levels for (n, d, epsilon).")
    bound.add_argument("--n", type=int, required=True)
    bound.add_argument("--d", type=int, required=True)
    bound.add_argument("--epsilon", required=True, help='Rational in (0, 1), e.g. "1/2".')
    bound.add_argument("--alpha", type=int, default=None, help="Override the epsilon-driven alpha.")
    bound.add_argument("--gammas", type=Path, default=None, help="Forms for an exact Delta.")

    zeros = commands.add_parser("zeros", parents=[flags], help="Zeros of an expression in |z| <= radius.")
    zeros.add_argument("--expr", required=True, help='e.g. "1 + z + exp(z)"')
    zeros.add_argument("--radius", type=float, required=True)

    for name, text in (
        ("nevanlinna", "Nevanlinna table of a scenario."),
        ("smt", "Second main theorem check of a scenario."),
        ("theorem-r", "Linear second main theorem check of a scenario."),
        ("proximity-sum", "Summed proximity bound through the Nullstellensatz constants."),
    ):
        command = commands.add_parser(name, parents=[flags], help=text)
        command.add_argument("--scenario", type=Path, required=True)
        if name == "nevanlinna":
            command.add_argument("--truncation", default=None,
                                 help='Truncation level M or "inf" (default: the scenario\'s M_override, else inf).')
    return parser


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _read_gammas(path: Optional[Path], n: int, d: int) -> List[HomogeneousPoly]:
    if path is None:
        return [HomogeneousPoly.monomial(tuple(d if v == j else 0 for v in range(n + 1))) for j in range(1, n + 1)]
    lines = [line.strip() for line in _read_text(path).splitlines() if line.strip()]
    return [parse_form(line, nvars=n + 1, degree=d) for line in lines]


def _read_caps(path: Path) -> dict:
    try:
        caps = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"invalid caps file {path}: {exc}") from exc
    if not isinstance(caps, dict):
        raise PreconditionError(f"caps file {path} must hold a JSON object")
    return caps


def _truncation(value: Optional[str], fallback: Optional[int]) -> Optional[int]:
    if value is None:
        return fallback
    if value.lower() in ("inf", "infinity"):
        return None
    try:
        return int(value)
    except ValueError:
        raise DomainError(f"truncation must be a positive integer or \"inf\", got {value!r}") from None


def run(args: argparse.Namespace) -> reports.Table:
    threads = getattr(args, "threads", None)
    if args.command == "lemmas":
        caps = _read_caps(args.caps) if args.caps else None
        summary = lemma_suite(caps, getattr(args, "seed", None))
        if not summary.all_passed:
            failing = [block for block, cases in summary.by_block().items() if not all(c.passed for c in cases)]
            logger.warning(f"failing lemma blocks: {', '.join(failing)}")
        return reports.lemma_table(summary)
    if args.command == "filtration":
        result = build_filtration(_read_gammas(args.gammas, args.n, args.d), args.alpha)
        return reports.filtration_table(result, filtration_big_delta(result))
    if args.command == "bound":
        gammas = _read_gammas(args.gammas, args.n, args.d) if args.gammas else None
        return reports.bound_table(truncation_report(args.n, args.d, args.epsilon, gammas, args.alpha))
    if args.command == "zeros":
        return reports.zeros_table(args.expr, zero_scan(parse_expr(args.expr), args.radius))

    scenario = load_scenario(args.scenario)
    if args.command == "smt":
        return reports.smt_table(run_smt_scenario(scenario, threads))
    if args.command == "theorem-r":
        report = theorem_r_check(scenario.curve, scenario.targets, scenario.r_grid, scenario.tol, threads)
        return reports.theorem_r_table(report)
    if args.command == "proximity-sum":
        return reports.proximity_sum_table(proximity_sum_check(scenario, threads))
    truncation = _truncation(args.truncation, scenario.M_override)
    rows = nevanlinna_table(scenario.curve, scenario.targets, scenario.r_grid, truncation, scenario.tol, threads)
    report = schemas.NevanlinnaReport(
        targets=[Q.to_text() for Q in scenario.targets],
        truncation=truncation,
        rows=[schemas.NevanlinnaRowOut.model_validate(row) for row in rows],
    )
    return reports.nevanlinna_table_report(report)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=settings.LOG_LEVEL, stream=sys.stderr)
    if hasattr(args, "tol"):
        settings.DEFAULT_TOL = args.tol
    if hasattr(args, "threads"):
        settings.THREADS = args.threads
    if hasattr(args, "seed"):
        settings.SEED = args.seed
    output = OutputFormat(getattr(args, "out", settings.OUTPUT_FORMAT))
    try:
        table = run(args)
    except TruncSmtError as exc:
        logger.error(f"{args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    sys.stdout.write(reports.render(table, output))
    return 0
