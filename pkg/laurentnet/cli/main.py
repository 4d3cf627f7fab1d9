# laurentnet/cli/main.py
import argparse
import json
import logging
import sys
from typing import List, Optional

from laurentnet import __version__
from laurentnet.cli.commands import construct, discrepancy, integrate, pipeline, points, scan, verify
from laurentnet.core import config
from laurentnet.core.error_handler import CliErrorHandler
from laurentnet.core.errors import USAGE_EXIT_CODE, exit_code_table
from laurentnet.core.logging_config import configure_logging
from laurentnet.core.validation import validate_positive
from laurentnet.core.workers import set_thread_count

logger = logging.getLogger(__name__)

COMMANDS = (construct, points, verify, scan, discrepancy, integrate, pipeline)


class CliArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 64 instead of argparse's 2, which belongs to ConfigError"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")


class VersionAction(argparse.Action):
    def __init__(self, option_strings, dest=argparse.SUPPRESS, default=argparse.SUPPRESS, help=None):
        super().__init__(option_strings=option_strings, dest=dest, default=default, nargs=0, help=help)

    def __call__(self, parser, namespace, values, option_string=None):
        sys.stdout.write(f"laurentnet {__version__}\n")
        sys.stdout.write(json.dumps(config.precision_policy(), sort_keys=True, indent=2) + "\n")
        parser.exit(0)


def _epilog() -> str:
    lines = ["exit codes:"]
    for code, name, text in exit_code_table():
        lines.append(f"  {code:>3}  {name:<26} {text}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="laurentnet",
        description="Polynomial lattice rules over F_b((x^-1)): construction, point sets and net quality.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action=VersionAction, help="print version and arithmetic defaults")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for counting and scans")
    parser.add_argument("--debug", action="store_true", help="include stack traces in error payloads")
    parser.add_argument("--plain-logs", action="store_true", help="human-readable logs instead of JSON lines")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=CliArgumentParser)
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_EXIT_CODE

    handler = CliErrorHandler(debug=args.debug)
    try:
        configure_logging(config.validate_log_level(args.log_level), json_lines=not args.plain_logs)
        if args.threads is not None:
            set_thread_count(validate_positive(args.threads, "--threads"))
        return args.handler(args)
    except Exception as exc:
        code, payload = handler.handle_exception(exc, getattr(exc, "stage", None) or args.command)
        sys.stdout.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
        return code
