# laurentnet/cli/commands/discrepancy.py
import argparse
import logging

from laurentnet.cli.dependencies import output_json
from laurentnet.core.logging_config import log_stage
from laurentnet.core.pointgen import load_points
from laurentnet.core.quality import star_discrepancy_exact
from laurentnet.storage.artifacts import discrepancy_model

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "discrepancy",
        help="exact star discrepancy of a small point set (d <= 3)",
        description="DiscrepancyResult JSON; the bound shape is reported when --t is given.",
    )
    parser.add_argument("--points", required=True, help="point CSV written by 'points'")
    parser.add_argument("--b", type=int, default=None, help="field size if the file has no header")
    parser.add_argument("--t", type=int, default=None, help="t-value for the bound shape")
    parser.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    points = load_points(args.points, b=args.b)
    with log_stage(logger, "discrepancy", points=points.size, d=points.d) as audit:
        result = star_discrepancy_exact(points, t=args.t)
        audit["value"] = str(result.value)
    output_json(discrepancy_model(result), args.out)
    return 0
