"""
Main module for the conecalc package.

This module provides the command-line entry point: ring computations on a
chosen space, the psi-maps between the secant bundle and X_n, cones of
catalog claims, closed-form formulas, and the verification harness.
"""

import sys
import argparse
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from conecalc import __version__, formulas
from conecalc.blowup import (
    Family,
    MixedClass,
    degree,
    make_space,
    numerical_basis,
    pairing_matrix,
    product,
)
from conecalc.catalog import (
    Limits,
    Params,
    VerificationReport,
    claim_cone,
    get_record,
    instances,
    list_cases,
    record_claims,
    to_json,
    verify_case,
)
from conecalc.config import Config, load_config, save_default_config
from conecalc.errors import (
    ConeError,
    DomainError,
    GradingError,
    InvariantError,
    ParseError,
    SingularPairingError,
    UnknownCaseError,
)
from conecalc.expression import Space, parse_class, parse_space
from conecalc.report import (
    dump_json,
    format_catalog,
    format_cone,
    format_matrix,
    format_reports,
)
from conecalc.ring import FormalSum
from conecalc.secant import SecantBundleRing, make_secant_ring, psi_maps

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

PARAM_NAMES = ("r", "n", "d", "k", "e", "g", "m", "a")

FORMULAS = ("berzolari", "nodes", "h0p3", "h0curve", "zslope", "zlimit")

Case = Tuple[str, Params]


class UsageError(Exception):
    """Command line is well-formed for argparse but incomplete for the command."""


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("parameters")
    for name in PARAM_NAMES:
        group.add_argument(f"--{name}", type=int, default=None, help=f"Integer parameter {name}")


def _params(args: argparse.Namespace) -> Params:
    return {name: getattr(args, name) for name in PARAM_NAMES if getattr(args, name) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conecalc",
        description="Exact intersection rings of blow-ups and secant bundles, and cone verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", "-c", help="Path to YAML configuration file")
    parser.add_argument(
        "--generate-config", "-g", metavar="PATH", help="Write the default configuration to PATH and exit"
    )
    parser.add_argument("--json", action="store_true", default=None, help="Emit JSON instead of text")
    parser.add_argument("--out", help="Write the output to this file instead of stdout")
    parser.add_argument("--num-workers", "-w", type=int, help="Number of worker processes for sweeps")
    parser.add_argument("--verbose", "-v", action="count", default=0, help="-v for info, -vv for debug logging")

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("mul", help="Normal-form product of two classes")
    p.add_argument("--space", required=True, help='Space such as "xr:5", "w:4", "y:3", "p3:2,3", "sec:5,2"')
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("deg", help="Degree of a top-codimension class")
    p.add_argument("--space", required=True)
    p.add_argument("expression")

    p = sub.add_parser("pairing", help="Pairing matrix of the codimension-k generators")
    p.add_argument("--space", required=True)
    p.add_argument("--codim", type=int, required=True)

    p = sub.add_parser("numbasis", help="Numerical basis and generator relations")
    p.add_argument("--space", required=True)
    p.add_argument("--codim", type=int, required=True)

    p = sub.add_parser("push", help="psi_* of a class on P(E_{n,2})")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("expression")

    p = sub.add_parser("pull", help="psi^* of a class on X_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("expression")

    p = sub.add_parser("cone", help="Rays and facets of a catalog claim")
    p.add_argument("--case", required=True)
    _add_param_flags(p)

    p = sub.add_parser("verify", help="Run catalog verifications")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--case", help="Catalog id")
    target.add_argument("--all", action="store_true", help="Every record over its declared range")
    p.add_argument(
        "--sample", action="store_true", help="Verify a seeded random sample of the sweep (see sweep.sample_*)"
    )
    _add_param_flags(p)

    p = sub.add_parser("formula", help="Closed-form numerics")
    p.add_argument("name", choices=FORMULAS)
    _add_param_flags(p)

    sub.add_parser("list", help="List catalog records")
    return parser


# -- space-generic helpers ---------------------------------------------------


def _components(space: Space, x: Union[MixedClass, FormalSum]) -> List[Tuple[int, str]]:
    if isinstance(space, SecantBundleRing):
        assert isinstance(x, FormalSum)
        return [(k, x.homogeneous_component(k).render()) for k in sorted(x.degrees())]
    assert isinstance(x, MixedClass)
    return [(k, x.component(k).render()) for k in x.codimensions()]


def _multiply(space: Space, x: Any, y: Any) -> Union[MixedClass, FormalSum]:
    if isinstance(space, SecantBundleRing):
        return space.mul(x, y)
    return product(x, y, space)


def _degree(space: Space, x: Any) -> Any:
    if isinstance(space, SecantBundleRing):
        return space.degree(x)
    return degree(x, space)


# -- commands ----------------------------------------------------------------


def cmd_mul(args: argparse.Namespace) -> Tuple[Any, str, int]:
    space = parse_space(args.space)
    result = _multiply(space, parse_class(args.left, space), parse_class(args.right, space))
    components = _components(space, result)
    payload = {
        "space": space.spec,
        "product": result.render(),
        "components": {str(k): text for k, text in components},
    }
    lines = [f"codim {k}: {text}" for k, text in components] or ["0"]
    return payload, "\n".join(lines), EXIT_OK


def cmd_deg(args: argparse.Namespace) -> Tuple[Any, str, int]:
    space = parse_space(args.space)
    value = _degree(space, parse_class(args.expression, space))
    return {"space": space.spec, "expression": args.expression, "degree": value}, str(value), EXIT_OK


def cmd_pairing(args: argparse.Namespace) -> Tuple[Any, str, int]:
    space = parse_space(args.space)
    if isinstance(space, SecantBundleRing):
        if not 0 <= args.codim <= space.dimension:
            raise DomainError(f"Codimension must satisfy 0 <= k <= {space.dimension}, got k={args.codim}")
        rows = [b.render() for b in space.numerical_basis(args.codim)]
        cols = [b.render() for b in space.numerical_basis(space.dimension - args.codim)]
        matrix = space.pairing_matrix(args.codim)
    else:
        data = pairing_matrix(space, args.codim)
        rows, cols, matrix = data.row_labels, data.col_labels, [list(row) for row in data.matrix]
    payload = {"space": space.spec, "codim": args.codim, "rows": rows, "cols": cols, "matrix": matrix}
    return payload, format_matrix(rows, cols, matrix), EXIT_OK


def cmd_numbasis(args: argparse.Namespace) -> Tuple[Any, str, int]:
    space = parse_space(args.space)
    if isinstance(space, SecantBundleRing):
        if not 0 <= args.codim <= space.dimension:
            raise DomainError(f"Codimension must satisfy 0 <= k <= {space.dimension}, got k={args.codim}")
        generators = [b.render() for b in space.numerical_basis(args.codim)]
        basis, relations = generators, []
    else:
        nb = numerical_basis(space, args.codim)
        generators = [g.render() for g in nb.generators]
        basis = [b.render() for b in nb.basis]
        relations = [c.render() for c in nb.relation_classes()]
    payload = {
        "space": space.spec,
        "codim": args.codim,
        "rank": len(basis),
        "generators": generators,
        "basis": basis,
        "relations": relations,
    }
    lines = [f"rank {len(basis)}", "basis:"] + [f"  {b}" for b in basis]
    if relations:
        lines += ["relations (numerically zero):"] + [f"  {r}" for r in relations]
    return payload, "\n".join(lines), EXIT_OK


def cmd_push(args: argparse.Namespace) -> Tuple[Any, str, int]:
    psi = psi_maps(args.n)
    gamma = parse_class(args.expression, make_secant_ring(args.n, 2))
    assert isinstance(gamma, FormalSum)
    result = psi.pushforward(gamma)
    payload = {"n": args.n, "input": args.expression, "output": result.render(), "codim": result.codim}
    return payload, result.render(), EXIT_OK


def cmd_pull(args: argparse.Namespace) -> Tuple[Any, str, int]:
    psi = psi_maps(args.n)
    x = parse_class(args.expression, make_space(Family.RNC, r=args.n))
    assert isinstance(x, MixedClass)
    result = psi.pullback(x)
    payload = {"n": args.n, "input": args.expression, "output": result.render()}
    return payload, result.render(), EXIT_OK


def cmd_cone(args: argparse.Namespace) -> Tuple[Any, str, int]:
    params = _params(args)
    claims = record_claims(args.case, params)
    entries, blocks = [], []
    for claim in claims:
        cone = claim_cone(claim)
        title = claim.title or f"{args.case} on {claim.space}, codim {claim.codim}"
        entries.append(
            {
                "title": title,
                "space": claim.space,
                "codim": claim.codim,
                "generators": list(claim.generators),
                "rays": [list(r) for r in cone.rays],
                "facets": [list(f) for f in cone.facets],
            }
        )
        blocks.append(format_cone(title, cone))
    return {"case": args.case, "params": params, "cones": entries}, "\n".join(blocks), EXIT_OK


def _formula_arg(args: argparse.Namespace, name: str, default: Optional[int] = None) -> int:
    value = getattr(args, name)
    if value is None:
        if default is None:
            raise UsageError(f"formula {args.name} requires --{name}")
        return default
    return value


def cmd_formula(args: argparse.Namespace) -> Tuple[Any, str, int]:
    name = args.name
    if name == "berzolari":
        used = {"d": _formula_arg(args, "d"), "g": _formula_arg(args, "g", 0)}
        value: Any = formulas.berzolari(used["d"], used["g"])
    elif name == "nodes":
        used = {"d": _formula_arg(args, "d")}
        value = formulas.projection_nodes(used["d"])
    elif name == "h0p3":
        used = {"k": _formula_arg(args, "k")}
        value = formulas.h0_p3(used["k"])
    elif name == "h0curve":
        used = {"d": _formula_arg(args, "d"), "k": _formula_arg(args, "k")}
        value = formulas.h0_curve(used["d"], used["k"])
    elif name == "zslope":
        used = {"d": _formula_arg(args, "d"), "e": _formula_arg(args, "e"), "m": _formula_arg(args, "m")}
        value = formulas.z_slope(used["d"], used["e"], used["m"])
    else:
        used = {"d": _formula_arg(args, "d"), "e": _formula_arg(args, "e")}
        value = formulas.z_slope_limit(used["d"], used["e"])
    return {"formula": name, "args": used, "value": value}, str(value), EXIT_OK


def cmd_list(args: argparse.Namespace) -> Tuple[Any, str, int]:
    return to_json(), format_catalog(list_cases()), EXIT_OK


# -- verification harness ----------------------------------------------------


def collect_cases(case_id: Optional[str], params: Params, limits: Limits) -> List[Case]:
    """Expand a verify request into (id, params) pairs in catalog order.

    Raises:
        UnknownCaseError: If case_id is not in the catalog
    """
    if case_id is None:
        return [(record.id, p) for record in list_cases() for p in instances(record, limits)]
    record = get_record(case_id)
    if params or not record.ranges:
        return [(case_id, params)]
    return [(case_id, p) for p in instances(record, limits)]


def sample_cases(cases: Sequence[Case], size: int, seed: int) -> List[Case]:
    """A seeded random subset of cases, kept in their original order."""
    if size >= len(cases):
        return list(cases)
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(len(cases), size=size, replace=False))
    return [cases[int(i)] for i in chosen]


def _verify_one(case: Case) -> VerificationReport:
    return verify_case(*case)


def run_cases(cases: Sequence[Case], num_workers: int = 1, progress: bool = True) -> List[VerificationReport]:
    """Verify cases, returning reports in submission order."""
    if num_workers > 1 and len(cases) > 1:
        logger.info(f"Verifying {len(cases)} case(s) with {num_workers} workers")
        with ProcessPoolExecutor(max_workers=num_workers) as executor:
            futures = [executor.submit(_verify_one, case) for case in cases]
            return [f.result() for f in tqdm(futures, desc="Verifying cases", disable=not progress)]
    logger.info(f"Verifying {len(cases)} case(s) sequentially")
    return [_verify_one(case) for case in tqdm(cases, desc="Verifying cases", disable=not progress)]


def cmd_verify(args: argparse.Namespace, config: Config) -> Tuple[Any, str, int]:
    limits = Limits(config.sweep.max_r, config.sweep.max_e)
    cases = collect_cases(None if args.all else args.case, _params(args), limits)
    if args.sample:
        cases = sample_cases(cases, config.sweep.sample_size, config.sweep.sample_seed)
    reports = run_cases(cases, config.processing.num_workers, config.output.progress)
    for report in reports:
        for check in report.failures():
            logger.error(
                f"{report.case} {report.params}: {check.name} expected {check.expected}, got {check.computed}"
            )
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED
    single = len(reports) == 1 and not args.all
    payload: Any = reports[0].to_dict() if single else [r.to_dict() for r in reports]
    return payload, format_reports(reports), code


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
        logger.info(f"Output written to {out}")
    else:
        print(text)


_COMMANDS = {
    "mul": cmd_mul,
    "deg": cmd_deg,
    "pairing": cmd_pairing,
    "numbasis": cmd_numbasis,
    "push": cmd_push,
    "pull": cmd_pull,
    "cone": cmd_cone,
    "formula": cmd_formula,
    "list": cmd_list,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for conecalc. Returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    logging.getLogger("conecalc").setLevel(level)

    if args.generate_config:
        save_default_config(args.generate_config)
        print(f"Default configuration saved to {args.generate_config}")
        return EXIT_OK

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    config = load_config(args.config)
    if args.json is not None:
        config.output.json = args.json
    if args.out:
        config.output.out = args.out
    if args.num_workers:
        config.processing.num_workers = args.num_workers

    try:
        if args.command == "verify":
            payload, text, code = cmd_verify(args, config)
        else:
            payload, text, code = _COMMANDS[args.command](args)
    except (ParseError, UnknownCaseError, UsageError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, GradingError, ConeError, SingularPairingError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except InvariantError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED

    _emit(dump_json(payload) if config.output.json else text, config.output.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
