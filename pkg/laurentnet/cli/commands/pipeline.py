# laurentnet/cli/commands/pipeline.py
import argparse
import logging
from typing import Any, Dict

from laurentnet.cli.dependencies import summary
from laurentnet.cli.pipeline import run_pipeline
from laurentnet.schemas.config import load_pipeline_config
from laurentnet.storage.artifacts import read_json

logger = logging.getLogger(__name__)

# flag -> config key; flags given on the command line win over the file
_OVERRIDES = {
    "b": "b",
    "n": "n",
    "d": "d",
    "lattice": "lattice_file",
    "shrink": "shrink",
    "depth": "depth",
    "precision": "precision",
    "out_dir": "output_dir",
    "project_to": "project_to",
    "integrand": "integrand",
    "scan_degree": "scan_degree",
    "method": "method",
}


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "pipeline",
        help="construct, generate, verify and measure in one run",
        description="Writes lattice.json, roots.json, points.csv, discrepancy.json and report.json.",
    )
    parser.add_argument("--config", default=None, help="pipeline config JSON")
    parser.add_argument("--b", type=int, default=None, help="prime field size")
    parser.add_argument("--n", type=int, default=None, help="construction level, d = b^n")
    parser.add_argument("--d", type=int, default=None, help="target dimension; picks n and projects")
    parser.add_argument("--lattice", default=None, help="use a lattice file instead of b and n")
    parser.add_argument("--shrink", default=None, help='shrinking factor, e.g. "x^3,x^3"')
    parser.add_argument("--depth", type=int, default=None, help="digits per coordinate")
    parser.add_argument("--precision", type=int, default=None, help="absolute precision of T")
    parser.add_argument("--out-dir", default=None, help="artifact directory")
    parser.add_argument("--project-to", type=int, default=None, help="keep the first k coordinates")
    parser.add_argument("--integrand", default=None, help="also integrate this test function")
    parser.add_argument("--scan-degree", type=int, default=None, help="also run the admissibility scan")
    parser.add_argument("--method", default=None, choices=["basis", "enumerate"])
    parser.add_argument("--no-verify", action="store_true", help="skip the t computation")
    parser.add_argument("--no-discrepancy", action="store_true", help="skip the exact discrepancy")
    parser.set_defaults(handler=run)


def merge_config(args: argparse.Namespace) -> Dict[str, Any]:
    data: Dict[str, Any] = dict(read_json(args.config)) if args.config else {}
    for flag, key in _OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    if args.lattice is not None:
        data.pop("n", None)
        data.pop("d", None)
    if args.no_verify:
        data["verify"] = False
    if args.no_discrepancy:
        data["discrepancy"] = False
    return data


def run(args: argparse.Namespace) -> int:
    cfg = load_pipeline_config(merge_config(args))
    report = run_pipeline(cfg)
    net = report.net
    summary(
        m=report.predicted.get("m"),
        t=net.exact_t if net else None,
        delta=net.delta if net else None,
        discrepancy=report.discrepancy.value if report.discrepancy else None,
        report=report.artifacts.get("report"),
    )
    return 0
