# laurentnet/cli/commands/integrate.py
import argparse
import logging
from pathlib import Path

from laurentnet.cli.dependencies import output_json, summary
from laurentnet.core.errors import ConfigError
from laurentnet.core.integrands import INTEGRANDS, get_integrand
from laurentnet.core.logging_config import log_stage
from laurentnet.core.quality import error_decay_experiment
from laurentnet.core.validation import parse_range, validate_format, validate_output_path, validate_prime
from laurentnet.storage.artifacts import integration_model

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "integrate",
        help="integration error of the equal-weight rule over growing shrinking factors",
        description="CSV of |Q_f(psi) - I(psi)| for f = (x^r, ..., x^r) and the fitted log-log slope.",
    )
    parser.add_argument("--construct", required=True, help='"b,n" of the explicit construction')
    parser.add_argument("--shrink-range", required=True, help='r range, e.g. "1..6"')
    parser.add_argument("--integrand", default="product", help=", ".join(sorted(INTEGRANDS)))
    parser.add_argument("--project-to", type=int, default=None, help="keep the first k coordinates")
    parser.add_argument("--format", default="csv", help="csv (one row per r) or json (rows and slope)")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.set_defaults(handler=run)


def _parse_construct(text: str):
    try:
        b, n = (int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f'--construct must look like "b,n", got {text!r}')
    return validate_prime(b), n


def run(args: argparse.Namespace) -> int:
    b, n = _parse_construct(args.construct)
    r_values = parse_range(args.shrink_range, "--shrink-range")
    fmt = validate_format(args.format, ("csv", "json"))
    integrand = get_integrand(args.integrand)
    with log_stage(logger, "integrate", b=b, n=n, integrand=integrand.name) as audit:
        run_result = error_decay_experiment(b, n, list(r_values), integrand, project_to=args.project_to)
        audit["slope"] = run_result.slope
    if fmt == "json":
        output_json(integration_model(run_result), args.out)
        return 0
    text = run_result.to_csv()
    if args.out:
        target = Path(validate_output_path(args.out))
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        summary(rows=len(run_result.rows), slope=run_result.slope, out=args.out)
    else:
        print(text, end="")
    return 0
