# laurentnet/cli/commands/scan.py
import argparse
import logging

from laurentnet.cli.dependencies import add_lattice_source, output_json, resolve_lattice
from laurentnet.core.lattice import ShrinkFactor, m_scan, shrink
from laurentnet.core.logging_config import log_stage
from laurentnet.storage.artifacts import admissibility_model

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "scan",
        help="bounded scan of the admissibility quantity M(X)",
        description="Minimum coordinate degree sum over dual vectors B'h with deg h_j <= D.",
    )
    add_lattice_source(parser)
    parser.add_argument("--degree", type=int, required=True, help="degree bound D on h")
    parser.add_argument("--shrink", default=None, help="scan the shrunken lattice f^-1 X instead")
    parser.add_argument("--certificate", type=int, default=None, help="known lower bound of M(X)")
    parser.add_argument("--budget", type=int, default=None, help="cap on the number of h vectors")
    parser.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    lattice, _ = resolve_lattice(args)
    if args.shrink:
        lattice = shrink(lattice, ShrinkFactor.parse(lattice.ctx, args.shrink, lattice.d))
    with log_stage(logger, "scan", degree_bound=args.degree, d=lattice.d) as audit:
        report = m_scan(lattice, args.degree, certificate=args.certificate, budget=args.budget)
        audit.update({"m_hat": str(report.m_hat), "precision_limited": report.precision_limited})
    output_json(admissibility_model(report), args.out)
    return 0
