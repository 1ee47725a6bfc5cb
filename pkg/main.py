"""Command-line entry point: ``enlarge <command> ...``.

Exit codes: 0 when the check passes or a certificate is found, 1 when it fails
or nothing is found, 2 on malformed input.
"""

import argparse
import math
import re
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, Optional

import numpy as np

from bodies import vertices, zonotope_generators
from cache_system import ExperimentCache
from certificates import (
    Certificate,
    corollary_minimality_check,
    partition_property_check,
    prismify,
    theorem1_check,
    theorem2_conditions,
    verify_certificate,
)
from errors import EnlargementError, InputError, UnsupportedRepresentationError
from euclidean import (
    average_segment_radius,
    direct_sum,
    hadamard_certificate,
    hausdorff_to_circumscribed_cube,
    lambda_euclidean,
    min_volume_search,
    monte_carlo_average_support,
    orbit_zonotope,
    remark2_enlargement,
    smallness_check,
)
from groups import BUILTIN_GROUPS, OrthogonalGroupAction, named_group
from input_validator import (
    certificate_document,
    dumps,
    load_json,
    parse_body,
    parse_certificate,
    parse_coords,
    parse_frame,
    parse_group,
    parse_space,
    read_document,
)
from numerics import DEFAULT_TOLERANCE, TolerancePolicy
from render import write_svg
from search import default_pool, find_certificate, tighten_certificate
from utils import logger

Outcome = tuple[int, dict[str, Any]]

PASSED = 0
FAILED = 1
BAD_INPUT = 2


def _status(ok: bool) -> int:
    return PASSED if ok else FAILED


def _tolerance(args: argparse.Namespace) -> TolerancePolicy:
    return DEFAULT_TOLERANCE.with_overrides(eps_feas=args.eps_feas, eps_eq=args.eps_eq)


def _load_certificate(source: str) -> Certificate:
    return parse_certificate(read_document(source))


def _save_certificate(cert: Certificate, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(dumps(certificate_document(cert)), encoding="utf-8")
        logger.info("certificate written to %s", path)


def _group(source: str) -> OrthogonalGroupAction:
    if re.fullmatch(r"[dc]\d+", source.strip().lower()) or source in BUILTIN_GROUPS:
        return named_group(source)
    return parse_group(read_document(source))


# ========== CERTIFICATES ==========


def cmd_verify(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Verify a certificate document."""
    report = verify_certificate(_load_certificate(args.cert), tol)
    return _status(report.valid), report.to_dict()


def cmd_find(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Search for a certificate of the target over a default pool."""
    space = parse_space(read_document(args.space))
    target = parse_body(read_document(args.target))
    pool = default_pool(space, args.pool_budget)
    result = find_certificate(space, target, pool, args.gens, tol)
    report = result.to_dict()
    if result.certificate is not None:
        cert = result.certificate
        if args.tighten:
            cert = tighten_certificate(cert, tol=tol)
            report["generator_norm_sum"] = float(np.sum(np.linalg.norm(cert.vectors, axis=1)))
        _save_certificate(cert, args.out)
    return _status(result.found), report


def cmd_orbit(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Orbit certificate of a finite group; the report is the certificate document."""
    group = _group(args.group)
    cert = orbit_zonotope(group, parse_coords(args.y), args.allow_commutant, tol)
    _save_certificate(cert, args.out)
    return PASSED, certificate_document(cert)


def cmd_small_check(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Generator-norm-sum smallness verdict."""
    report = smallness_check(_load_certificate(args.cert), tol)
    return _status(report.verdict == "small"), report.to_dict()


def cmd_prismify(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Prism certificate inside a slab."""
    cert = _load_certificate(args.cert)
    report = prismify(cert, parse_coords(args.x1), parse_coords(args.h), tol=tol)
    _save_certificate(report.certificate, args.out)
    return _status(report.ok), report.to_dict()


def cmd_direct_sum(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Block-diagonal certificate of several l2 certificates."""
    cert = direct_sum(*[_load_certificate(source) for source in args.certs])
    verification = verify_certificate(cert, tol)
    smallness = smallness_check(cert, tol)
    _save_certificate(cert, args.out)
    return _status(verification.valid), {
        "verification": verification.to_dict(),
        "smallness": smallness.to_dict(),
    }


def cmd_hadamard(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Sign-vector certificate of the Euclidean ball over l1."""
    cert = hadamard_certificate(args.n)
    verification = verify_certificate(cert, tol)
    _save_certificate(cert, args.out)
    return _status(verification.valid), {
        "n": args.n,
        "pairs": cert.size,
        "verification": verification.to_dict(),
    }


def cmd_remark2(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Segment plus projected cube for a unit normal h."""
    report = remark2_enlargement(parse_coords(args.h), tol)
    return _status(report.verification.valid), report.to_dict()


# ========== THEOREM CHECKS ==========


def cmd_theorem1(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Shrunken-parallelepiped containment for a frame and a certificate."""
    space = parse_space(read_document(args.space))
    functionals, points = parse_frame(read_document(args.frame))
    report = theorem1_check(space, functionals, points, _load_certificate(args.cert), tol)
    return _status(report.holds), report.to_dict()


def cmd_c2(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """c2 of a frame and the minimality verdict it gives."""
    space = parse_space(read_document(args.space))
    functionals, points = parse_frame(read_document(args.frame))
    minimality = corollary_minimality_check(space, functionals, points, tol)
    return _status(minimality.minimal), minimality.to_dict()


def cmd_example(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Built-in worked examples."""
    conditions = theorem2_conditions(tol)
    partition = partition_property_check(args.eps, tol=tol)
    report = {"conditions": conditions.to_dict(), "partition": partition.to_dict()}
    return _status(partition.holds), report


# ========== EXPERIMENTS ==========


def _cached(
    args: argparse.Namespace, request: dict[str, Any], run: Callable[[], Outcome]
) -> tuple[int, str]:
    cache = ExperimentCache(enabled=not args.no_cache)
    text = cache.get(request)
    if text is not None:
        code, _, body = text.partition("\n")
        return int(code), body
    code, report = run()
    body = dumps(report)
    cache.set(request, f"{code}\n{body}")
    return code, body


def cmd_average(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Monte-Carlo Haar average of a support function."""
    body = parse_body(read_document(args.body))
    direction = parse_coords(args.dir)
    estimate = monte_carlo_average_support(body, direction, args.trials, args.seed, args.workers)
    report: dict[str, Any] = estimate.to_dict()
    n = body.dim
    report["lambda_n"] = lambda_euclidean(n)
    try:
        generators = zonotope_generators(body)
    except UnsupportedRepresentationError:
        generators = None
    if generators is not None:
        # E h(Z, Qᵀa) = Σ_j ‖y_j‖ ‖a‖ λ(n) / n
        prediction = sum(average_segment_radius(g) for g in generators)
        report["prediction"] = prediction * float(np.linalg.norm(direction))
    return PASSED, report


def cmd_minvol(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Multi-start minimal-volume certificate search."""
    space = parse_space(read_document(args.space))
    pool = default_pool(space, args.pool_budget)
    result = min_volume_search(
        space, pool.functionals, args.gens, args.restarts, args.seed, args.workers, tol
    )
    report = result.to_dict()
    if result.certificate is not None and space.dim == 2:  # noqa: PLR2004
        distance, angle = hausdorff_to_circumscribed_cube(result.certificate.zonotope)
        report["hausdorff_to_square"] = distance
        report["square_angle_degrees"] = angle
    if result.certificate is not None:
        _save_certificate(result.certificate, args.out)
    return _status(result.status == "found" and result.bounds_respected), report


# ========== GEOMETRY ==========


def cmd_render(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """SVG picture of a planar body."""
    body = parse_body(read_document(args.body))
    path = write_svg(args.output, [body], unit_circle=not args.no_circle)
    points = vertices(body, tol=tol)
    return PASSED, {
        "output": str(path),
        "vertices": None if points is None else int(points.shape[0]),
    }


def cmd_groups(args: argparse.Namespace, tol: TolerancePolicy) -> Outcome:
    """Built-in groups with order and commutant dimension."""
    listing = []
    for name in BUILTIN_GROUPS:
        group = named_group(name)
        listing.append(
            {
                "name": name,
                "dim": group.dim,
                "order": group.order,
                "commutant_dimension": group.commutant_dimension(tol),
            }
        )
    return PASSED, {"groups": listing}


# ========== PARSER ==========


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        error_message = f"expected a positive integer, got {text}"
        raise argparse.ArgumentTypeError(error_message)
    return value


def _eps(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value <= 0:
        error_message = f"tolerance must be positive, got {text}"
        raise argparse.ArgumentTypeError(error_message)
    return value


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool = False) -> None:
    """Options accepted before the command and, without defaults, after it."""

    def default(value: object) -> object:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--eps-feas", type=_eps, default=default(None), help="feasibility slack")
    parser.add_argument(
        "--eps-eq", type=_eps, default=default(None), help="equality residual slack"
    )
    parser.add_argument("--seed", type=int, default=default(0), help="random seed")
    parser.add_argument(
        "--workers", type=_positive_int, default=default(1), help="worker threads"
    )
    parser.add_argument(
        "--json", action="store_true", default=default(False), help="machine-readable report"
    )
    parser.add_argument(
        "--no-cache",
        action="store_true",
        default=default(False),
        help="ignore cached experiment reports",
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="enlarge", description="Certificates for sufficient enlargements of normed spaces."
    )
    _add_global_options(parser)
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="verify a certificate")
    verify.add_argument("cert", nargs="?", default="-")
    verify.set_defaults(handler=cmd_verify)

    find = commands.add_parser("find", help="search for a certificate")
    find.add_argument("--space", required=True)
    find.add_argument("--target", required=True)
    find.add_argument("--pool-budget", type=_positive_int, default=16)
    find.add_argument("--gens", type=_positive_int, default=None)
    find.add_argument("--tighten", action="store_true")
    find.add_argument("--out", default=None)
    find.set_defaults(handler=cmd_find)

    orbit = commands.add_parser("orbit", help="orbit certificate of a finite group")
    orbit.add_argument("--group", required=True)
    orbit.add_argument("--y", required=True)
    orbit.add_argument("--allow-commutant", action="store_true")
    orbit.add_argument("--out", default=None)
    orbit.set_defaults(handler=cmd_orbit)

    small = commands.add_parser("small-check", help="smallness verdict")
    small.add_argument("cert", nargs="?", default="-")
    small.set_defaults(handler=cmd_small_check)

    prism = commands.add_parser("prismify", help="prism certificate inside |h| <= 1")
    prism.add_argument("cert", nargs="?", default="-")
    prism.add_argument("--h", required=True)
    prism.add_argument("--x1", required=True)
    prism.add_argument("--out", default=None)
    prism.set_defaults(handler=cmd_prismify)

    summed = commands.add_parser("direct-sum", help="block sum of l2 certificates")
    summed.add_argument("certs", nargs="+")
    summed.add_argument("--out", default=None)
    summed.set_defaults(handler=cmd_direct_sum)

    average = commands.add_parser("average", help="Haar average of a support function")
    average.add_argument("--body", required=True)
    average.add_argument("--dir", required=True)
    average.add_argument("--trials", type=_positive_int, default=100_000)
    average.set_defaults(handler=cmd_average)

    minvol = commands.add_parser("minvol", help="minimal-volume certificate search")
    minvol.add_argument("--space", required=True)
    minvol.add_argument("--restarts", type=_positive_int, default=100)
    minvol.add_argument("--gens", type=_positive_int, default=4)
    minvol.add_argument("--pool-budget", type=_positive_int, default=16)
    minvol.add_argument("--out", default=None)
    minvol.set_defaults(handler=cmd_minvol)

    theorem1 = commands.add_parser("theorem1", help="shrunken parallelepiped containment")
    theorem1.add_argument("--space", required=True)
    theorem1.add_argument("--cert", required=True)
    theorem1.add_argument("--frame", required=True)
    theorem1.set_defaults(handler=cmd_theorem1)

    c2 = commands.add_parser("c2", help="c2 constant and minimality verdict of a frame")
    c2.add_argument("--space", required=True)
    c2.add_argument("--frame", required=True)
    c2.set_defaults(handler=cmd_c2)

    example = commands.add_parser("example", help="built-in worked examples")
    example.add_argument("name", choices=["theorem2"])
    example.add_argument("--eps", type=float, default=math.pi / 6)
    example.set_defaults(handler=cmd_example)

    render = commands.add_parser("render", help="SVG of a planar body")
    render.add_argument("body")
    render.add_argument("-o", "--output", required=True)
    render.add_argument("--no-circle", action="store_true")
    render.set_defaults(handler=cmd_render)

    groups = commands.add_parser("groups", help="list built-in groups")
    groups.set_defaults(handler=cmd_groups)

    hadamard = commands.add_parser("hadamard", help="sign-vector certificate over l1")
    hadamard.add_argument("--n", type=_positive_int, required=True)
    hadamard.add_argument("--out", default=None)
    hadamard.set_defaults(handler=cmd_hadamard)

    remark2 = commands.add_parser("remark2", help="segment plus projected cube")
    remark2.add_argument("--h", required=True)
    remark2.set_defaults(handler=cmd_remark2)

    for command in commands.choices.values():
        _add_global_options(command, suppress=True)
    return parser


def _summary(report: dict[str, Any], indent: str = "") -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_summary(value, indent + "  "))
        elif isinstance(value, float):
            lines.append(f"{indent}{key}: {value:.12g}")
        elif isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            lines.append(f"{indent}{key}: {len(value)} entries")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerance(args)
        sources = (getattr(args, "body", None), getattr(args, "space", None))
        if args.command in ("average", "minvol") and "-" not in sources:
            request = {
                key: value
                for key, value in sorted(vars(args).items())
                if key not in ("handler", "json", "no_cache", "workers", "out")
            }
            request["tolerance"] = [tol.eps_feas, tol.eps_eq, tol.eps_rank]
            for key in ("body", "space"):
                if key in request:
                    request[f"{key}_text"] = read_document(request[key])
            code, text = _cached(args, request, lambda: args.handler(args, tol))
            report_text = text
        else:
            code, report = args.handler(args, tol)
            report_text = dumps(report)
    except InputError as exc:
        logger.error("input error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except UnsupportedRepresentationError as exc:
        logger.error("unsupported: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except EnlargementError as exc:
        witness = getattr(exc, "witness", None)
        report = {"error": str(exc), "kind": type(exc).__name__}
        if witness is not None:
            report["witness"] = [float(v) for v in witness]
        code, report_text = FAILED, dumps(report)

    if args.json or args.command == "orbit":
        sys.stdout.write(report_text)
    else:
        print(_summary(load_json(report_text)))
    return code


if __name__ == "__main__":
    sys.exit(main())
