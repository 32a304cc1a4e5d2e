#!/usr/bin/env python3
"""
rnacount - exact enumeration of RNA secondary structures.

Counts structures by partial stacks, helices and loops, enumerates them,
runs the structure/tree bijections and verifies every closed form against
brute force.

Usage:
    rnacount count --formula narayana --b 3 --k 4
    rnacount count --formula helices --b 2 --k 3 --s 3
    rnacount table 1
    rnacount enumerate --b 2 --k 3 --filter s=3
    rnacount bijection --which chen --input "(.)" --round-trip
    rnacount verify --max-size 12 --suites formulas,tables

Exit codes: 0 success, 1 verification or round-trip failure, 2 usage error.

Environment:
    RNACOUNT_MAX_SIZE   enumeration guard on 2b+k (default: 20)
    RNACOUNT_LOGLEVEL   logging level name (default: WARNING)
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from rnacount.bijection import (
    BijectionError,
    chen_forward,
    chen_inverse,
    composite_tree_map,
    composite_tree_map_inverse,
    sw_forward,
    sw_inverse,
)
from rnacount.counting import (
    CountingError,
    CountingResult,
    HelixDistribution,
    LoopDistribution,
    count_by_helix_distribution,
    count_by_loop_distribution,
    count_by_num_helices,
    count_by_partial_stacks,
    count_joint,
    count_joint_marginal,
    count_max_both,
    count_max_loop_size,
    count_max_partial_stack,
    expected_helices,
    expected_partial_stacks,
    format_result,
    helix_distribution_probability,
    helix_table,
    mean_helix_size,
    mean_partial_stack_length,
    narayana,
    parse_distribution,
)
from rnacount.forest import (
    ForestError,
    LabelledTree,
    SmallForest,
    forest_decode,
    forest_encode,
)
from rnacount.series import SeriesError
from rnacount.structure import (
    StructureError,
    StructureStats,
    compute_stats,
    enumerate_structures,
    parse_dot_bracket,
    to_dot_bracket,
)
from rnacount.tree import TreeError, parse_tree, serialize_tree
from rnacount.verify import VerifyError, run_suites

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_MAX_SIZE = 20

# errors that mean "bad input", reported with exit code 2
INPUT_ERRORS = (
    StructureError,
    TreeError,
    BijectionError,
    ForestError,
    SeriesError,
    CountingError,
    VerifyError,
    json.JSONDecodeError,
)


class UsageError(ValueError):
    """Invalid flag combination or environment setting."""


def _error(message: object) -> None:
    print(f"Error: {message}", file=sys.stderr)


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        name = os.environ.get("RNACOUNT_LOGLEVEL", "WARNING").upper()
        value = logging.getLevelName(name)
        if not isinstance(value, int):
            raise UsageError(f"RNACOUNT_LOGLEVEL={name!r} is not a logging level")
        level = value
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
    )


def max_size_limit() -> int:
    """Enumeration guard on ``2b + k`` (honors ``RNACOUNT_MAX_SIZE``)."""
    env = os.environ.get("RNACOUNT_MAX_SIZE")
    if not env:
        return DEFAULT_MAX_SIZE
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"RNACOUNT_MAX_SIZE={env!r} is not an integer") from None
    if value < 1:
        raise UsageError(f"RNACOUNT_MAX_SIZE must be positive, got {value}")
    return value


# -- count ------------------------------------------------------------- #


@dataclass(frozen=True)
class Formula:
    """A ``count --formula`` entry: required flags and how to evaluate."""

    params: tuple[str, ...]
    evaluate: Callable[[argparse.Namespace], CountingResult]
    help: str


def _hd(args: argparse.Namespace) -> HelixDistribution:
    return parse_distribution(args.helix_dist, HelixDistribution)


def _ld(args: argparse.Namespace) -> LoopDistribution:
    return parse_distribution(args.loop_dist, LoopDistribution)


FORMULAS: dict[str, Formula] = {
    "narayana": Formula(
        ("b", "k"), lambda a: narayana(a.b, a.k), "all structures"
    ),
    "partial-stacks": Formula(
        ("b", "k", "l"),
        lambda a: count_by_partial_stacks(a.b, a.k, a.l),
        "exactly l partial stacks",
    ),
    "max-stack": Formula(
        ("b", "k", "h"),
        lambda a: count_max_partial_stack(a.b, a.k, a.h),
        "partial stacks of length at most h",
    ),
    "max-loop": Formula(
        ("b", "k", "l"),
        lambda a: count_max_loop_size(a.b, a.k, a.l),
        "loops of size at most l",
    ),
    "max-both": Formula(
        ("b", "k", "h", "l"),
        lambda a: count_max_both(a.b, a.k, a.h, a.l),
        "both caps at once",
    ),
    "joint": Formula(
        ("b", "k", "helix_dist", "loop_dist", "le"),
        lambda a: count_joint(a.b, a.k, _hd(a), _ld(a), a.le),
        "helix and loop distributions with l_e partial stacks",
    ),
    "joint-marginal": Formula(
        ("b", "k", "helix_dist", "loop_dist"),
        lambda a: count_joint_marginal(a.b, a.k, _hd(a), _ld(a)),
        "helix and loop distributions",
    ),
    "helix-dist": Formula(
        ("b", "k", "helix_dist"),
        lambda a: count_by_helix_distribution(a.b, a.k, _hd(a)),
        "helix size distribution",
    ),
    "loop-dist": Formula(
        ("b", "k", "loop_dist"),
        lambda a: count_by_loop_distribution(a.b, a.k, _ld(a)),
        "loop size distribution",
    ),
    "helices": Formula(
        ("b", "k", "s"),
        lambda a: count_by_num_helices(a.b, a.k, a.s, a.sigma),
        "s helices of at least sigma base pairs",
    ),
    "probability": Formula(
        ("b", "k", "s", "helix_dist"),
        lambda a: helix_distribution_probability(a.b, a.k, a.s, a.sigma, _hd(a)),
        "probability of a helix distribution given s and sigma",
    ),
    "expected-stacks": Formula(
        ("b", "k"),
        lambda a: expected_partial_stacks(a.b, a.k),
        "mean number of partial stacks",
    ),
    "expected-helices": Formula(
        ("b", "k"),
        lambda a: expected_helices(a.b, a.k),
        "mean number of helices",
    ),
    "mean-helix-size": Formula(
        ("b", "k"),
        lambda a: mean_helix_size(a.b, a.k),
        "mean helix size",
    ),
    "mean-stack-length": Formula(
        ("b", "k"),
        lambda a: mean_partial_stack_length(a.b, a.k),
        "mean partial stack length",
    ),
}


def _flag(param: str) -> str:
    return "--" + param.replace("_", "-")


def cmd_count(args: argparse.Namespace) -> int:
    formula = FORMULAS[args.formula]
    missing = [_flag(p) for p in formula.params if getattr(args, p) is None]
    if missing:
        _error(f"formula {args.formula!r} needs {', '.join(missing)}")
        return EXIT_USAGE
    try:
        value = formula.evaluate(args)
    except INPUT_ERRORS as e:
        _error(e)
        return EXIT_USAGE

    if args.format == "json":
        params = {p: getattr(args, p) for p in formula.params}
        if args.formula in ("helices", "probability"):
            params["sigma"] = args.sigma
        doc = {"formula": args.formula, "params": params, "value": format_result(value)}
        print(json.dumps(doc))
    else:
        print(format_result(value))
    return EXIT_OK


# -- table ------------------------------------------------------------- #


def cmd_table(args: argparse.Namespace) -> int:
    try:
        rows = helix_table(args.id)
    except CountingError as e:
        _error(e)
        return EXIT_USAGE
    if args.format == "json":
        for c in rows:
            print(json.dumps({"s": c.s, "b": c.b, "k": c.k, "count": c.count}))
        return EXIT_OK
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["s", "b", "k", "count"])
    for c in rows:
        writer.writerow([c.s, c.b, c.k, c.count])
    return EXIT_OK


# -- enumerate --------------------------------------------------------- #

FILTER_KEYS = ("s", "l_e", "l_o", "helices", "loops")


def _parse_filters(items: Sequence[str]) -> list[Callable[[StructureStats], bool]]:
    tests: list[Callable[[StructureStats], bool]] = []
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in FILTER_KEYS:
            raise UsageError(
                f"bad filter {item!r}; use KEY=VALUE with KEY in "
                + ", ".join(FILTER_KEYS)
            )
        if key == "helices":
            hd = parse_distribution(value, HelixDistribution)
            tests.append(
                lambda st, hd=hd: HelixDistribution.from_sizes(st.helix_sizes) == hd
            )
        elif key == "loops":
            ld = parse_distribution(value, LoopDistribution)
            tests.append(
                lambda st, ld=ld: LoopDistribution.from_sizes(st.loop_sizes) == ld
            )
        else:
            try:
                wanted = int(value)
            except ValueError:
                raise UsageError(
                    f"filter {key} needs an integer, got {value!r}"
                ) from None
            tests.append(lambda st, key=key, wanted=wanted: getattr(st, key) == wanted)
    return tests


def _sizes(values: Sequence[int]) -> str:
    return " ".join(str(v) for v in values)


def cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        limit = max_size_limit()
        if args.b < 0 or args.k < 0:
            raise UsageError(
                f"b and k must be non-negative, got b={args.b}, k={args.k}"
            )
        size = 2 * args.b + args.k
        if size > limit and not args.unsafe_limit:
            raise UsageError(
                f"2b+k = {size} exceeds the enumeration limit {limit} "
                "(set RNACOUNT_MAX_SIZE or pass --unsafe-limit)"
            )
        tests = _parse_filters(args.filter or [])
    except (UsageError, CountingError) as e:
        _error(e)
        return EXIT_USAGE

    writer = None
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(
            ["structure", "l_e", "s", "l_o", "partial_stacks", "helices", "loops"]
        )
    for s in enumerate_structures(args.b, args.k):
        st = compute_stats(s)
        if not all(test(st) for test in tests):
            continue
        text = to_dot_bracket(s)
        if writer is not None:
            writer.writerow(
                [
                    text,
                    st.l_e,
                    st.s,
                    st.l_o,
                    _sizes(st.partial_stack_lengths),
                    _sizes(st.helix_sizes),
                    _sizes(st.loop_sizes),
                ]
            )
        elif args.format == "json":
            print(json.dumps({"structure": text, "stats": st.to_dict()}))
        else:
            print(text)
    return EXIT_OK


# -- bijection --------------------------------------------------------- #


def _structure_to_tree(fn: Callable[[Any], Any]) -> Callable[[str], str]:
    return lambda text: serialize_tree(fn(parse_dot_bracket(text)))


def _tree_to_structure(fn: Callable[[Any], Any]) -> Callable[[str], str]:
    return lambda text: to_dot_bracket(fn(parse_tree(text)))


def _tree_to_tree(fn: Callable[[Any], Any]) -> Callable[[str], str]:
    return lambda text: serialize_tree(fn(parse_tree(text)))


def _forest_forward(text: str) -> str:
    return json.dumps(forest_encode(LabelledTree.from_json(json.loads(text))).to_json())


def _forest_inverse(text: str) -> str:
    return json.dumps(forest_decode(SmallForest.from_json(json.loads(text))).to_json())


# which -> (forward, inverse), both text to text
BIJECTIONS: dict[str, tuple[Callable[[str], str], Callable[[str], str]]] = {
    "sw": (_structure_to_tree(sw_forward), _tree_to_structure(sw_inverse)),
    "chen": (_structure_to_tree(chen_forward), _tree_to_structure(chen_inverse)),
    "composite": (
        _tree_to_tree(composite_tree_map),
        _tree_to_tree(composite_tree_map_inverse),
    ),
    "forest": (_forest_forward, _forest_inverse),
}


def _canonical(which: str, direction: str, text: str) -> str:
    """Normalize an input so a round trip compares by value."""
    if which == "forest":
        if direction == "forward":
            return json.dumps(LabelledTree.from_json(json.loads(text)).to_json())
        return json.dumps(SmallForest.from_json(json.loads(text)).to_json())
    takes_structure = which in ("sw", "chen") and direction == "forward"
    if takes_structure:
        return to_dot_bracket(parse_dot_bracket(text))
    return serialize_tree(parse_tree(text))


def cmd_bijection(args: argparse.Namespace) -> int:
    forward, inverse = BIJECTIONS[args.which]
    there, back = forward, inverse
    if args.direction == "inverse":
        there, back = inverse, forward
    try:
        output = there(args.input)
        print(output)
        if not args.round_trip:
            return EXIT_OK
        restored = back(output)
        original = _canonical(args.which, args.direction, args.input)
    except INPUT_ERRORS as e:
        _error(e)
        return EXIT_USAGE
    if restored != original:
        _error(f"round trip mismatch: {original!r} -> {output!r} -> {restored!r}")
        return EXIT_FAILURE
    return EXIT_OK


# -- verify ------------------------------------------------------------ #


def cmd_verify(args: argparse.Namespace) -> int:
    names = None
    if args.suites:
        names = [n.strip() for n in args.suites.split(",") if n.strip()]
    try:
        reports = run_suites(names, max_size=args.max_size, jobs=args.jobs)
    except VerifyError as e:
        _error(e)
        return EXIT_USAGE
    for report in reports:
        print(report.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILURE


# -- parser ------------------------------------------------------------ #


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnacount",
        description="Exact enumeration of RNA secondary structures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  rnacount count --formula narayana --b 3 --k 4
  rnacount count --formula helices --b 2 --k 3 --s 3 --sigma 1
  rnacount count --formula probability --b 3 --k 4 --s 2 --helix-dist 2:2
  rnacount table 1
  rnacount enumerate --b 2 --k 3 --filter s=3
  rnacount bijection --which sw --input "(.)"
  rnacount verify --suites formulas,tables --max-size 10 --jobs 4
""",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-v info, -vv debug)",
    )
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # count
    count_p = subparsers.add_parser(
        "count",
        help="Evaluate a counting formula",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Formulas:\n"
        + "\n".join(
            f"  {name:<18} {f.help} ({', '.join(_flag(p) for p in f.params)})"
            for name, f in FORMULAS.items()
        ),
    )
    count_p.add_argument("--formula", required=True, choices=list(FORMULAS))
    count_p.add_argument("--b", type=int, help="Real arcs (auxiliary arc excluded)")
    count_p.add_argument("--k", type=int, help="Isolated bases")
    count_p.add_argument("--l", type=int, help="Partial stacks, or loop size cap")
    count_p.add_argument("--h", type=int, help="Partial stack length cap")
    count_p.add_argument("--s", type=int, help="Number of helices")
    count_p.add_argument(
        "--sigma", type=int, default=1, help="Minimum helix size (default: 1)"
    )
    count_p.add_argument(
        "--helix-dist", metavar="DIST", help='Helix sizes, e.g. "1:1,2:2"'
    )
    count_p.add_argument(
        "--loop-dist", metavar="DIST", help='Loop sizes, e.g. "1:1,2:2"'
    )
    count_p.add_argument("--le", type=int, help="Number of partial stacks")
    count_p.add_argument("--format", choices=["text", "json"], default="text")
    count_p.set_defaults(func=cmd_count)

    # table
    table_p = subparsers.add_parser(
        "table", help="Print a helix-count table (1: sigma=1, 2: sigma=2)"
    )
    table_p.add_argument("id", type=int, help="Table id (1 or 2)")
    table_p.add_argument("--format", choices=["csv", "json"], default="csv")
    table_p.set_defaults(func=cmd_table)

    # enumerate
    enum_p = subparsers.add_parser(
        "enumerate", help="List every structure with b arcs and k isolated bases"
    )
    enum_p.add_argument("--b", type=int, required=True, help="Real arcs")
    enum_p.add_argument("--k", type=int, required=True, help="Isolated bases")
    enum_p.add_argument(
        "--filter",
        action="append",
        metavar="KEY=VALUE",
        help="Keep matching structures: s, l_e, l_o (integers), "
        "helices, loops (distributions); repeatable",
    )
    enum_p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    enum_p.add_argument(
        "--unsafe-limit",
        action="store_true",
        help="Ignore the 2b+k enumeration guard",
    )
    enum_p.set_defaults(func=cmd_enumerate)

    # bijection
    bij_p = subparsers.add_parser("bijection", help="Apply a structure/tree bijection")
    bij_p.add_argument("--which", required=True, choices=list(BIJECTIONS))
    bij_p.add_argument(
        "--direction", choices=["forward", "inverse"], default="forward"
    )
    bij_p.add_argument(
        "--input",
        required=True,
        help="Dot-bracket structure, parentheses tree, or labelled-tree/forest JSON",
    )
    bij_p.add_argument(
        "--round-trip",
        action="store_true",
        help="Map the output back and fail (exit 1) unless it equals the input",
    )
    bij_p.set_defaults(func=cmd_bijection)

    # verify
    verify_p = subparsers.add_parser(
        "verify", help="Check formulas and bijections against brute force"
    )
    verify_p.add_argument(
        "--max-size", type=int, default=12, help="Size bound on 2b+k (default: 12)"
    )
    verify_p.add_argument(
        "--suites",
        metavar="LIST",
        help="Comma-separated suites (default: all): structures, trees, formulas, "
        "tables, bijections, series, probabilities, identities",
    )
    verify_p.add_argument(
        "-j", "--jobs", type=int, default=1, help="Suites run in parallel (default: 1)"
    )
    verify_p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _configure_logging(args.verbose)
    except UsageError as e:
        _error(e)
        return EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
