"""Command-line front end.

Exit codes: 0 on success, 1 for invalid input (bad group data, unknown
catalog names, malformed options), 2 when a size cap is hit, 3 for an
internal inconsistency (always a bug).  Reports go to standard output as
JSON with sorted keys, or as short text with ``--format text``.
"""

from __future__ import annotations

import argparse
import sys

from . import cochains, groups, mapping, nerve, oracle
from .errors import DomainError, InternalInvariantViolation, ParseError, SizeLimitExceeded
from .io import dumps, load_finite_group, load_toral_group
from .toral import check_crossed_module, toral_catalog

COMMANDS = ("validate", "hom", "map-space", "fixed-points", "cohomology", "nerve-check", "retract-demo", "oracle")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors (exit 1), keeping exit 2 for size caps
        raise ParseError(message)


def build_parser():
    parser = _Parser(prog="toralmaps", description="Homomorphisms from finite groups into toral groups.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name, help_, source=False, target=False):
        p = sub.add_parser(name, help=help_)
        if source:
            p.add_argument("--source", required=True, help="finite group: catalog:NAME or a file")
        if target:
            p.add_argument("--target", required=True, help="toral group: catalog:NAME or a file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--size-cap", type=int, default=None, help="override the default size cap")
        return p

    p = add("validate", "check group axioms and the crossed-module identities")
    p.add_argument("--source", help="finite group to validate")
    p.add_argument("--target", help="toral group to validate")
    p.add_argument("--max-denominator", type=int, default=8, help="sample grid for the crossed-module check")

    add("hom", "conjugacy classes of homomorphisms", source=True, target=True)
    add("map-space", "components and homotopy groups of the mapping spaces", source=True, target=True)
    add("fixed-points", "one mapping-space report per subgroup class", source=True, target=True)

    p = add("cohomology", "integral cohomology of the bar complex", source=True)
    p.add_argument("--target", help="toral group whose action twists the coefficients")
    p.add_argument("--gamma", help="comma-separated images G -> components of the target")
    p.add_argument("--rank", type=int, default=1, help="rank of trivial coefficients when no target is given")
    p.add_argument("--max-degree", type=int, default=3)

    p = add("nerve-check", "nerve reconstruction, simplicial and matching properties", target=True)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--samples", type=int, default=nerve.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=nerve.DEFAULT_SEED)
    p.add_argument("--max-denominator", type=int, default=nerve.DEFAULT_MAX_DENOMINATOR)

    p = add("retract-demo", "run the deformation retraction on random cocycle pairs", source=True, target=True)
    p.add_argument("--samples", type=int, default=nerve.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=nerve.DEFAULT_SEED)
    p.add_argument("--max-denominator", type=int, default=nerve.DEFAULT_MAX_DENOMINATOR)

    p = add("oracle", "brute-force classification on a torsion grid", source=True, target=True)
    p.add_argument("--max-denominator", type=int, default=oracle.DEFAULT_DENOMINATOR)
    return parser


def _positive(name, value):
    if value is not None and value < 1:
        raise ParseError(f"--{name} must be positive")


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _cap(args, default):
    return args.size_cap if args.size_cap is not None else default


def run(args):
    """Execute a parsed command; returns ``(report_dict, text or None)``."""
    cmd = args.command
    _positive("size-cap", args.size_cap)
    if cmd == "validate":
        if not args.source and not args.target:
            raise ParseError("validate needs --source or --target")
        out = {}
        if args.source:
            G = load_finite_group(args.source)
            out["source"] = {"name": G.name, "order": G.order, "group_axioms": "pass",
                             "abelian": G.is_abelian(), "exponent": G.exponent}
        if args.target:
            _positive("max-denominator", args.max_denominator)
            H = load_toral_group(args.target)
            out["target"] = {"name": H.name, "rank": H.rank, "components": H.pi.order,
                             "extension_data": "pass",
                             "crossed_module": check_crossed_module(H, args.max_denominator).to_json()}
        return out, None
    if cmd == "cohomology":
        G = load_finite_group(args.source)
        if args.target:
            H = load_toral_group(args.target)
            if args.gamma is None:
                images = [0] * G.order
            else:
                try:
                    images = [int(x) for x in args.gamma.split(",")]
                except ValueError as exc:
                    raise ParseError(f"bad --gamma {args.gamma!r}") from exc
            gamma = groups.make_hom(G, H.pi, images)
            rep = cochains.representation_from_toral(H, gamma)
        else:
            if args.rank < 0:
                raise ParseError("--rank must be non-negative")
            rep = cochains.trivial_representation(G, args.rank)
        cap = _cap(args, cochains.DEFAULT_MATRIX_CAP)
        degrees = {}
        for n in range(args.max_degree + 1):
            A = cochains.cohomology_lattice(rep, n, max_degree=args.max_degree, cap=cap)
            degrees[str(n)] = {"group": str(A), **A.to_json()}
        return {"source": G.name, "rank": rep.rank, "cohomology": degrees}, None
    if cmd == "nerve-check":
        H = load_toral_group(args.target)
        for name in ("levels", "samples", "max-denominator"):
            _positive(name, getattr(args, name.replace("-", "_")))
        return nerve.nerve_check(H, args.levels, args.samples, args.seed, args.max_denominator), None

    G = load_finite_group(args.source)
    H = load_toral_group(args.target)
    if cmd in ("hom", "map-space"):
        report = mapping.mapping_space_report(G, H, _cap(args, groups.DEFAULT_HOM_CAP))
        return report.to_json(), mapping.report_text(report)
    if cmd == "fixed-points":
        fp = mapping.fixed_points_report(G, H, _cap(args, groups.DEFAULT_HOM_CAP))
        text = "".join(
            f"subgroup {list(e.elements)}:\n" + mapping.report_text(e.report) for e in fp.entries
        )
        return fp.to_json(), text
    if cmd == "retract-demo":
        for name in ("samples", "max-denominator"):
            _positive(name, getattr(args, name.replace("-", "_")))
        return nerve.retract_check(G, H, args.samples, args.seed, args.max_denominator), None
    if cmd == "oracle":
        _positive("max-denominator", args.max_denominator)
        rep = oracle.oracle_report(G, H, args.max_denominator, _cap(args, oracle.DEFAULT_HARD_CAP))
        return rep.to_json(), None
    raise ParseError(f"unknown command {cmd!r}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise ParseError(f"a command is required: {', '.join(COMMANDS)}")
        report, text = run(args)
    except SizeLimitExceeded as exc:
        print(f"toralmaps: size limit exceeded: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"toralmaps: error: {exc}", file=sys.stderr)
        return 1
    except InternalInvariantViolation as exc:
        print(f"toralmaps: internal error (please report): {exc}", file=sys.stderr)
        return 3
    if args.format == "text":
        sys.stdout.write(text if text is not None else _text(report) + "\n")
    else:
        sys.stdout.write(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
