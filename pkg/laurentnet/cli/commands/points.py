# laurentnet/cli/commands/points.py
import argparse
import logging
import sys

from laurentnet.cli.dependencies import add_lattice_source, projection_target, resolve_construction_args, summary
from laurentnet.core.algebra import get_context
from laurentnet.core.construction import explicit_net
from laurentnet.core.lattice import ShrinkFactor
from laurentnet.core.logging_config import log_stage
from laurentnet.core.pointgen import FORMATS, emit, point_set
from laurentnet.core.validation import validate_format
from laurentnet.storage.artifacts import read_lattice

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "points",
        help="enumerate the shrunken point set P_f",
        description="Point set f^-1 X in the digital unit cube, as digits, rationals or floats.",
    )
    add_lattice_source(parser)
    parser.add_argument("--shrink", required=True, help='shrinking factor, e.g. "x^3,x^3" or "x^3"')
    parser.add_argument("--depth", type=int, default=None, help="digits per coordinate (default m + guard)")
    parser.add_argument("--format", default="digits", help="digits | rational | float")
    parser.add_argument("--method", default="basis", choices=["basis", "enumerate"])
    parser.add_argument("--project-to", type=int, default=None, help="keep the first k coordinates")
    parser.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fmt = validate_format(args.format, FORMATS)
    with log_stage(logger, "points", shrink=args.shrink, depth=args.depth) as audit:
        if args.lattice:
            lattice = read_lattice(args.lattice)
            factor = ShrinkFactor.parse(lattice.ctx, args.shrink, lattice.d)
            points = point_set(lattice, factor, args.depth, args.method)
            audit["precision"] = lattice.precision
        else:
            b, n = resolve_construction_args(args)
            factor = ShrinkFactor.parse(get_context(b), args.shrink, b**n)
            construction, points = explicit_net(b, n, factor, args.depth, args.prec, args.method)
            audit["precision"] = construction.requested_prec
            audit["min_precision_reached"] = construction.lattice.precision
        project_to = projection_target(args, points.d)
        if project_to:
            points = points.project(project_to)
        audit.update({"m": points.m, "points": points.size, "depth": points.depth})

    text = emit(points, fmt, path=args.out)
    if args.out:
        summary(points=points.size, m=points.m, d=points.d, depth=points.depth, out=args.out)
    else:
        sys.stdout.write(text)
    return 0
