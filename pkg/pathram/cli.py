"""
Command-line interface for pathram
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

from pydantic import ValidationError

from .asymptotics import (
    bootstrap_rate,
    bootstrap_walk,
    certify_symmetric_lb,
    check_delta_ceiling,
    delta_ceiling,
    delta_family,
    family_lengths,
    period_analysis,
)
from .config import ConfigManager
from .exceptions import (
    CycleViolationError,
    InconclusiveComparisonError,
    InvalidConfigurationError,
    InvariantViolationError,
    PathRamseyError,
    WalkValidationError,
)
from .game import (
    GreedyPainter,
    Painter,
    RandomPainter,
    StrategyPainter,
    check_strategy_invariant,
    iter_game,
    run_game,
)
from .models import BootstrapParams, CommandConfig
from .recursion import beta_from_trace, evaluate, smallest_argmin_rate
from .reporting import ReportGenerator, stringify
from .solver import kstar_branch_and_bound, kstar_exhaustive, verify_table
from .walks import greedy_walk, parse_walk

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INVARIANT = 2

# Failures of the program itself rather than of its input.
INTERNAL_ERRORS = (CycleViolationError, InconclusiveComparisonError, InvariantViolationError)


def setup_logging(debug: bool = False) -> None:
    """Setup logging configuration"""
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


class PathramArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions"""

    def error(self, message: str) -> NoReturn:
        raise InvalidConfigurationError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.replace(" ", "").split(",") if item]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=["json", "csv", "text"],
                        help="Output format (default from config: text)")
    common.add_argument("--workers", type=int, help="Worker processes for branch-and-bound")
    common.add_argument("--witness-cap", type=int, help="Maximizing walks reported")
    common.add_argument("--seed", type=int, default=0, help="Seed for the random Painter")
    common.add_argument("--colors", type=int, help="Number of colours r for walk text")
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = PathramArgumentParser(
        prog="pathram",
        description="Exact solver and analysis toolkit for the online path-avoidance colouring game",
    )
    sub = parser.add_subparsers(dest="subcommand", parser_class=PathramArgumentParser)
    sub.required = True

    kstar = sub.add_parser("kstar", parents=[common],
                           help="k*(P_l1, P_l2): maximum of k(alpha) over the strategy walks W(l1, l2)")
    kstar.add_argument("--l1", type=int, required=True)
    kstar.add_argument("--l2", type=int, required=True)
    kstar.add_argument("--method", choices=["exhaustive", "bb"], default="bb",
                       help="exhaustive enumeration or branch-and-bound (default)")

    walk = sub.add_parser("eval-walk", parents=[common],
                          help="Evaluate the recursion k_i, x_(s,j) along one strategy walk; k(alpha), beta, delta")
    walk.add_argument("--walk", required=True, help="Run-length walk, e.g. '1^6,2^2,1^7,2,1^14,2^24'")

    table = sub.add_parser("verify-table", parents=[common],
                           help="Recompute k*(P_l, P_l) for 2 <= l <= max-ell against the published table")
    table.add_argument("--max-ell", type=int, default=27)

    family = sub.add_parser("delta-family", parents=[common],
                            help="Explicit walk family whose delta approaches delta(c) for c = 4, 5, 6")
    family.add_argument("--c", type=int, required=True, choices=[4, 5, 6])
    family.add_argument("--t", type=int, required=True)
    family.add_argument("--check-ceiling", type=int, metavar="MAX_ELL",
                        help="Also check delta(alpha) <= delta(c) for every W(l, c) walk ending in 2, l <= MAX_ELL")

    boot = sub.add_parser("bootstrap", parents=[common],
                          help="Nested walk alpha^(t) in W(l_(2,t), 4^t) and its rate bound f(q, s)")
    boot.add_argument("--q", type=_rational, default=Fraction(13, 10))
    boot.add_argument("--s", type=int, default=320)
    boot.add_argument("--t", type=int, default=1)
    boot.add_argument("--rate-only", action="store_true", help="Only compute f(q, s)")

    symmetric = sub.add_parser("symmetric-lb", parents=[common],
                               help="Symmetric walk alpha_hat^(t) in W(l_hat, l_hat) and the bound k >= l_hat^2.01 / 2")
    symmetric.add_argument("--t", type=int, default=1)

    simulate = sub.add_parser("simulate", parents=[common],
                              help="Builder-versus-Painter game on forests with the tree size restriction")
    simulate.add_argument("--l1", type=int)
    simulate.add_argument("--l2", type=int)
    simulate.add_argument("--painter", choices=["strategy", "greedy", "random"], default="greedy")
    simulate.add_argument("--walk", help="Walk for the strategy Painter A_alpha")
    simulate.add_argument("--cap", type=int, help="Tree size restriction k")
    simulate.add_argument("--transcript", action="store_true", help="Include the move transcript")
    simulate.add_argument("--check-invariant", action="store_true",
                          help="Check component sizes against x_(s,t) after every step (strategy Painter)")

    period = sub.add_parser("period", parents=[common],
                            help="Eventual periodicity of x_nu = beta + min-split(x) from a prefix")
    period.add_argument("--prefix", type=_int_list, required=True, help="x_0,...,x_t")
    period.add_argument("--beta", type=int, required=True)
    return parser


def _command_config(args: argparse.Namespace, config: ConfigManager) -> CommandConfig:
    targets = None
    if getattr(args, "l1", None) is not None or getattr(args, "l2", None) is not None:
        if args.l1 is None or args.l2 is None:
            raise InvalidConfigurationError("--l1 and --l2 must be given together")
        targets = (args.l1, args.l2)
    return CommandConfig(
        subcommand=args.subcommand,
        targets=targets,
        walk=getattr(args, "walk", None),
        c=getattr(args, "c", None),
        t=getattr(args, "t", None),
        q=getattr(args, "q", None),
        s=getattr(args, "s", None),
        method=getattr(args, "method", "bb"),
        output_format=args.output_format or config.get("output.format", "text"),
        workers=args.workers if args.workers is not None else config.get("search.workers", 1),
        witness_cap=args.witness_cap if args.witness_cap is not None else config.get("search.witness_cap", 16),
        seed=args.seed,
        painter=getattr(args, "painter", "greedy"),
        cap=getattr(args, "cap", None),
        colors=args.colors,
    )


class CommandRunner:
    """Executes one validated subcommand and returns its payload"""

    def __init__(self, command: CommandConfig, args: argparse.Namespace, config: ConfigManager):
        self.command = command
        self.args = args
        self.config = config
        self.reports = ReportGenerator()
        self.handlers: Dict[str, Callable[[], Any]] = {
            "kstar": self.kstar,
            "eval-walk": self.eval_walk,
            "verify-table": self.verify_table,
            "delta-family": self.delta_family,
            "bootstrap": self.bootstrap,
            "symmetric-lb": self.symmetric_lb,
            "simulate": self.simulate,
            "period": self.period,
        }

    def run(self) -> Any:
        return self.handlers[self.command.subcommand]()

    def _search_options(self) -> Dict[str, Any]:
        return {
            "witness_cap": self.command.witness_cap,
            "frontier_cap": self.config.get("search.frontier_cap", 64),
            "workers": self.command.workers,
            "split_depth": self.config.get("search.split_depth", 6),
        }

    def kstar(self) -> Any:
        if self.command.method == "exhaustive":
            report = kstar_exhaustive(self.command.targets, node_cap=self.config.get("search.node_cap"))
        else:
            report = kstar_branch_and_bound(self.command.targets, **self._search_options())
        return self.reports.search_payload(report)

    def eval_walk(self) -> Any:
        walk = parse_walk(self.command.walk, colors=self.command.colors)
        trace = evaluate(walk)
        beta = delta = None
        if walk.colors == 2:
            beta = beta_from_trace(trace)
            _, delta = smallest_argmin_rate(trace.x(1), beta)
        return self.reports.trace_payload(trace, beta=beta, delta=delta)

    def verify_table(self) -> Any:
        report = verify_table(self.args.max_ell, **self._search_options())
        return self.reports.table_rows(report)

    def delta_family(self) -> Any:
        c, t = self.command.c, self.command.t
        walk = delta_family(c, t)
        trace = evaluate(walk)
        beta = beta_from_trace(trace)
        _, delta = smallest_argmin_rate(trace.x(1), beta)
        payload = self.reports.family_payload(c, t, family_lengths(c, t), walk, beta, delta, delta_ceiling(c))
        if self.args.check_ceiling is not None:
            report = check_delta_ceiling(c, self.args.check_ceiling)
            payload["ceiling_check"] = self.reports.ceiling_payload(report, delta_ceiling(c))
        return payload

    def bootstrap(self) -> Any:
        q, s, t = self.command.q, self.command.s, self.command.t
        rate = bootstrap_rate(q, s)
        payload: Dict[str, Any] = {"q": q, "s": s, "rate": rate}
        if not self.args.rate_only:
            params = BootstrapParams(q=q, s=s, t=t)
            walk = bootstrap_walk(params)
            trace = evaluate(walk)
            beta = beta_from_trace(trace)
            _, delta = smallest_argmin_rate(trace.x(1), beta)
            payload.update({
                "t": t,
                "schedule": [list(row) for row in params.schedule()],
                "targets": list(walk.targets),
                "k": trace.k_final,
                "beta": beta,
                "delta": delta,
                "delta_at_least_rate_power": delta >= rate ** t,
            })
        return stringify(payload)

    def symmetric_lb(self) -> Any:
        return self.reports.certificate_payload(certify_symmetric_lb(self.command.t))

    def _painter(self, targets: Tuple[int, ...]) -> Painter:
        if self.command.painter == "strategy":
            return StrategyPainter(parse_walk(self.command.walk, colors=self.command.colors))
        if self.command.painter == "random":
            return RandomPainter(len(targets), seed=self.command.seed)
        return GreedyPainter(targets)

    def simulate(self) -> Any:
        if self.command.walk is not None:
            targets = parse_walk(self.command.walk, colors=self.command.colors).targets
            if self.command.targets is not None and tuple(self.command.targets) != targets:
                raise InvalidConfigurationError(
                    f"--l1/--l2 {self.command.targets} disagree with the walk's targets {targets}"
                )
        else:
            targets = tuple(self.command.targets)
        painter = self._painter(targets)
        result = run_game(targets, painter, cap=self.command.cap, record_transcript=self.args.transcript)
        verdict = None
        if self.args.check_invariant:
            if not isinstance(painter, StrategyPainter):
                raise InvalidConfigurationError("--check-invariant needs --painter strategy")
            trace = evaluate(painter.walk)
            verdict = check_strategy_invariant(
                iter_game(targets, StrategyPainter(painter.walk), cap=self.command.cap),
                trace.x_sequences,
            )
        return self.reports.game_payload(result, verdict)

    def period(self) -> Any:
        analysis = period_analysis(
            self.args.prefix,
            self.args.beta,
            max_extensions=self.config.get("periodicity.max_extensions", 10**6),
        )
        return self.reports.period_payload(analysis)


def run_cli(argv: Optional[Sequence[str]] = None) -> Tuple[int, str]:
    """
    Run one pathram command

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        (exit status, text): the rendered output on success, the error message otherwise
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InvalidConfigurationError as e:
        return EXIT_VALIDATION, f"error: {e}"
    except SystemExit as e:
        # --help
        return int(e.code or 0), ""

    setup_logging(args.debug)
    try:
        config = ConfigManager(args.config)
        if not args.debug and config.get("logging.debug", False):
            setup_logging(True)
        command = _command_config(args, config)
        payload = CommandRunner(command, args, config).run()
        return EXIT_OK, ReportGenerator().render(payload, command.output_format)
    except INTERNAL_ERRORS as e:
        logger.error(f"Internal invariant breach: {e}")
        return EXIT_INVARIANT, f"internal error: {e}"
    except (PathRamseyError, ValidationError) as e:
        return EXIT_VALIDATION, f"error: {e}"


def main() -> None:
    status, text = run_cli()
    if text:
        stream = sys.stdout if status == EXIT_OK else sys.stderr
        print(text, file=stream)
    sys.exit(status)


if __name__ == "__main__":
    main()
