# laurentnet/cli/commands/verify.py
import argparse
import logging

from laurentnet.cli.dependencies import output_json
from laurentnet.core.errors import InconsistentReport
from laurentnet.core.logging_config import log_stage
from laurentnet.core.netanalysis import duality_check, is_net
from laurentnet.core.pointgen import load_points
from laurentnet.storage.artifacts import net_report_model

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "verify",
        help="exact t by interval counting, cross-checked against the dual net",
        description="NetReport JSON for a digits or rational point file.",
    )
    parser.add_argument("--points", required=True, help="point CSV written by 'points'")
    parser.add_argument("--b", type=int, default=None, help="field size if the file has no header")
    parser.add_argument("--m", type=int, default=None, help="declared m (default from the file)")
    parser.add_argument("--t", type=int, default=None, help="also report is_net at this t")
    parser.add_argument("--t-bound", type=int, default=None, help="predicted bound to compare against")
    parser.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    points = load_points(args.points, b=args.b, m=args.m)
    with log_stage(logger, "verify", points=points.size, m=points.m) as audit:
        report = duality_check(points, t_bound=args.t_bound)
        extra = {}
        if args.t is not None:
            extra["is_net_at_t"] = {str(args.t): is_net(points, args.t)}
        audit.update({"t": report.exact_t, "consistent": report.duality_consistent})
    output_json(net_report_model(report, **extra), args.out)
    if not report.duality_consistent:
        raise InconsistentReport(
            f"interval counting gives t={report.exact_t}, dual net gives t={report.t_from_dual}",
            {"exact_t": report.exact_t, "t_from_dual": report.t_from_dual, "t_bound": args.t_bound},
        )
    return 0
