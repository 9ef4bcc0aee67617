import argparse
import sys
from typing import List, Optional

from catalog_module import CatalogError, CatalogGroup, load_source
from config import DEFAULT_SEED, MAX_FIELD_DEGREE, BrauerForgeError, ResourceLimitError
from harness_module import (
    CounterexampleError,
    check_brauer_indecomposability,
    check_fusion_equal,
    check_ik1_consequence,
    check_lemma31,
    check_scott_module,
    check_theorem1,
    check_theorem2,
)
from linalg_module import field_spec
from logger import log_error, log_info, set_quiet
from perm_module import GroupParseError
from report_module import FAIL, PASS, Report
from semidihedral_module import MAX_N, MIN_N, structure_report
from summary_module import render_report

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# pipelines over these take minutes
EXTENDED_ONLY = {"m11"}


class UsageError(BrauerForgeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brauer-forge", description="Verify Brauer indecomposability of Scott modules.")
    parser.add_argument("--field-degree", type=int, default=1, help="work over GF(2^m), 1 <= m <= 8")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--json", dest="json_path", default=None, help="write the full report here")
    parser.add_argument("--extended", action="store_true", help="allow the long m11 runs")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("structure", help="semidihedral structure facts")
    p.add_argument("group", help="sd16, sd32, ...")
    p = sub.add_parser("scott", help="extract Sc(G, H)")
    p.add_argument("group")
    p.add_argument("subgroup")
    p = sub.add_parser("brauer", help="Brauer indecomposability of Sc(G, P)")
    p.add_argument("group")
    p.add_argument("subgroup")
    p = sub.add_parser("thm1", help="saturation and centralizer hypotheses, then the conclusion")
    p.add_argument("group")
    p.add_argument("subgroup", nargs="?", default="sylow")
    p = sub.add_parser("thm2", help="Sc(G x G', ΔP) for equal fusion")
    p.add_argument("group")
    p.add_argument("other")
    p = sub.add_parser("ik1", help="Br_Q(Sc(G, P)) against Sc(N_G(Q), N_P(Q))")
    p.add_argument("group")
    p.add_argument("subgroup")
    p.add_argument("q_spec", help="z, klein, y, c4a, c4b, P, words in x and y, or 'all'")
    p = sub.add_parser("lemma31", help="centralizers of subgroups of order >= 8")
    p.add_argument("group")
    p = sub.add_parser("fusion-eq", help="compare two fusion systems")
    p.add_argument("group")
    p.add_argument("other")
    return parser


def _load(name: str, extended: bool) -> CatalogGroup:
    if name in EXTENDED_ONLY and not extended:
        raise UsageError(f"{name} runs need --extended")
    return load_source(name)


def _structure_n(name: str) -> int:
    if not name.startswith("sd") or not name[2:].isdigit():
        raise UsageError(f"expected sdN, got {name!r}")
    order = int(name[2:])
    n = order.bit_length() - 1
    if order != 2 ** n or not MIN_N <= n <= MAX_N:
        raise UsageError(f"{name!r} is not SD of order 2^n with {MIN_N} <= n <= {MAX_N}")
    return n


def dispatch(args: argparse.Namespace) -> Report:
    if not 1 <= args.field_degree <= MAX_FIELD_DEGREE:
        raise UsageError(f"--field-degree must lie in 1..{MAX_FIELD_DEGREE}")
    fld = field_spec(args.field_degree)
    seed = args.seed
    command = args.command

    if command == "structure":
        return structure_report(_structure_n(args.group))
    cg = _load(args.group, args.extended)
    if command == "scott":
        return check_scott_module(cg.group, cg.subgroup(args.subgroup), fld, seed, instance=f"scott {cg.name} {args.subgroup}")
    if command == "brauer":
        P = cg.subgroup(args.subgroup)
        return check_brauer_indecomposability(cg.group, P, fld, seed, instance=f"brauer {cg.name} {args.subgroup}")
    if command == "thm1":
        return check_theorem1(cg.group, cg.subgroup(args.subgroup), fld, seed, instance=f"thm1 {cg.name} {args.subgroup}")
    if command == "thm2":
        return check_theorem2(cg, _load(args.other, args.extended), fld=fld, seed=seed)
    if command == "ik1":
        P = cg.subgroup(args.subgroup)
        Q = None if args.q_spec == "all" else cg.subgroup(args.q_spec)
        return check_ik1_consequence(cg.group, P, Q, fld, seed, instance=f"ik1 {cg.name} {args.subgroup} {args.q_spec}")
    if command == "lemma31":
        return check_lemma31(cg)
    if command == "fusion-eq":
        return check_fusion_equal(cg, _load(args.other, args.extended))
    raise UsageError(f"unknown command {command!r}")


def _emit(report: Report, args: argparse.Namespace) -> None:
    print(render_report(report))
    if args.json_path:
        report.to_json(args.json_path)


def run(argv: Optional[List[str]] = None) -> int:
    """Exit 0 when every verdict passes, 1 when one fails, 2 on usage or resource trouble."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    set_quiet(args.quiet)
    log_info("Command %s (seed %s, GF(2^%s))", args.command, args.seed, args.field_degree)
    try:
        report = dispatch(args)
    except CounterexampleError as exc:
        _emit(exc.report, args)
        print(f"counterexample bundle: {exc.path}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, CatalogError, GroupParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        log_error("Resource bound hit: %s", exc)
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrauerForgeError as exc:
        log_error("Run failed: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        # an engine crash is not a refuted instance
        log_error("Unexpected error in %s: %s", args.command, exc, exc_info=True)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args)
    if report.verdict == PASS:
        return EXIT_PASS
    if report.verdict == FAIL:
        return EXIT_FAIL
    return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
