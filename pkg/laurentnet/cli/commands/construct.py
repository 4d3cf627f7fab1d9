# laurentnet/cli/commands/construct.py
import argparse
import logging

from laurentnet.cli.dependencies import output_json, resolve_construction_args
from laurentnet.core import config
from laurentnet.core.construction import build_construction, deg_det_b_closed_form
from laurentnet.core.logging_config import log_stage
from laurentnet.storage.artifacts import construction_document

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "construct",
        help="build the lattice generator T = (B^-1)^T from the roots of p_d",
        description="Emit LatticeSpec JSON plus the root audit (residual precision) for d = b^n.",
    )
    parser.add_argument("--b", type=int, required=True, help="prime field size")
    level = parser.add_mutually_exclusive_group(required=True)
    level.add_argument("--n", type=int, help="construction level, d = b^n")
    level.add_argument("--d", type=int, help="target dimension; builds the smallest level with b^n >= d")
    parser.add_argument("--prec", type=int, default=None, help="absolute precision of T")
    parser.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    b, n = resolve_construction_args(args)
    prec = args.prec or config.working_precision(deg_det_b_closed_form(b, n), b**n)
    with log_stage(logger, "construct", b=b, n=n, precision=prec) as audit:
        construction = build_construction(b, n, prec)
        audit["min_precision_reached"] = construction.lattice.precision
    output_json(construction_document(construction), args.out)
    return 0
