# laurentnet/cli/dependencies.py
"""Argument groups and helpers shared by the subcommands."""
import argparse
import json
import logging
import sys
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import BaseModel

from laurentnet.core import config
from laurentnet.core.algebra import get_context
from laurentnet.core.construction import Construction, build_construction, dimension_for, predicted_quality
from laurentnet.core.errors import ConfigError
from laurentnet.core.lattice import LatticeSpec, ShrinkFactor
from laurentnet.core.validation import validate_output_path, validate_positive, validate_prime
from laurentnet.storage.artifacts import dumps, read_lattice, write_json

logger = logging.getLogger(__name__)


def add_lattice_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("lattice source (a lattice file, or b with n or d)")
    group.add_argument("--lattice", help="lattice JSON written by 'construct'")
    group.add_argument("--b", type=int, help="prime field size")
    group.add_argument("--n", type=int, help="construction level, d = b^n")
    group.add_argument("--d", type=int, help="target dimension; builds the smallest b^n >= d and projects")
    group.add_argument("--prec", type=int, help="absolute precision of the generator")


def resolve_construction_args(args: argparse.Namespace) -> Tuple[int, int]:
    n, d = args.n, getattr(args, "d", None)
    if args.b is None or (n is None and d is None):
        raise ConfigError("give --lattice, or --b with --n or --d")
    validate_prime(args.b)
    if d is not None:
        if n is not None:
            raise ConfigError("give only one of --n and --d")
        n = dimension_for(args.b, validate_positive(d, "--d"))
        logger.info(f"dimension {d} uses the construction of level n={n} (d'={args.b ** n})")
    if n < 1:
        raise ConfigError(f"--n must be at least 1, got {n}")
    return args.b, n


def projection_target(args: argparse.Namespace, d: int) -> Optional[int]:
    """--project-to, or --d when it is below the constructed dimension"""
    if getattr(args, "project_to", None):
        return args.project_to
    target = getattr(args, "d", None)
    return target if target is not None and target < d else None


def resolve_lattice(
    args: argparse.Namespace, shrink_text: Optional[str] = None, depth: Optional[int] = None
) -> Tuple[LatticeSpec, Optional[Construction]]:
    """The lattice named by --lattice, or the explicit construction for --b/--n"""
    if getattr(args, "lattice", None):
        return read_lattice(args.lattice), None
    b, n = resolve_construction_args(args)
    prec = args.prec
    if prec is None:
        degrees = [0] * b**n
        if shrink_text:
            degrees = list(ShrinkFactor.parse(get_context(b), shrink_text, b**n).degrees)
        m = predicted_quality(b, n, degrees).m
        prec = config.working_precision(m, b**n, depth)
    construction = build_construction(b, n, prec)
    return construction.lattice, construction


def output_json(data: Union[BaseModel, Dict[str, Any]], out: Optional[str] = None) -> None:
    """Write to ``out`` or print to stdout"""
    if out:
        write_json(validate_output_path(out), data)
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(dumps(data))


def summary(**fields: Any) -> None:
    sys.stdout.write(json.dumps(fields, sort_keys=True, default=str) + "\n")
