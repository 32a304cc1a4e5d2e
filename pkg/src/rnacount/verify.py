"""Exhaustive verification suites.

Each suite checks one family of claims against brute force at a size
bound ``max_size`` (applied to ``2b + k`` for structures, to the edge
count for trees) and returns a :class:`SuiteReport`. Cells are visited
smallest first, so the recorded counterexample is a minimal one.

The oracle behind the ``formulas`` suite enumerates every structure of a
``(b, k)`` cell once and tallies the statistics each closed form counts;
cells are cached and shared between suites.
"""

from __future__ import annotations

import concurrent.futures
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from rnacount.bijection import (
    chen_forward,
    chen_inverse,
    composite_tree_map,
    composite_tree_map_inverse,
    sw_forward,
    sw_inverse,
)
from rnacount.counting import (
    TABLE_COLUMNS,
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
    helix_distribution_probability,
    helix_distributions,
    helix_table,
    loop_distributions,
    mean_helix_size,
    mean_partial_stack_length,
    narayana,
    narayana_sum_identity_check,
)
from rnacount.forest import (
    FOREST_PREDICATES,
    enumerate_labelled_trees,
    forest_decode,
    forest_encode,
    forest_profile,
)
from rnacount.series import (
    max_loop_system,
    max_stack_system,
    partial_stack_system,
)
from rnacount.structure import (
    SecondaryStructure,
    compute_stats,
    enumerate_structures,
    parse_dot_bracket,
    to_dot_bracket,
)
from rnacount.tree import (
    enumerate_plane_trees,
    parse_tree,
    serialize_tree,
    tree_stats,
)

logger = logging.getLogger(__name__)

# Suites refuse bounds above this; brute force grows exponentially.
MAX_VERIFY_SIZE = 16

# (s, b, k) -> count, one dict per helix table
TABLE_1: dict[tuple[int, int, int], int] = {}
TABLE_2: dict[tuple[int, int, int], int] = {}


def _fill_table(
    target: dict[tuple[int, int, int], int], rows: Iterable[Iterable[int]]
) -> None:
    for s, row in enumerate(rows, 1):
        for (b, k), value in zip(TABLE_COLUMNS, row):
            target[(s, b, k)] = value


_fill_table(
    TABLE_1,
    [
        [1, 1, 1, 1, 1, 1, 1, 1, 1],
        [10, 18, 28, 15, 27, 42, 20, 36, 56],
        [9, 31, 76, 27, 93, 228, 54, 186, 456],
        [0, 0, 0, 7, 54, 219, 28, 216, 876],
        [0, 0, 0, 0, 0, 0, 2, 51, 375],
    ],
)
_fill_table(
    TABLE_2,
    [
        [1, 1, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 0, 5, 9, 14, 10, 18, 28],
    ],
)


class VerifyError(ValueError):
    """Unknown suite name or an out-of-range size bound."""


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: int = 0
    counterexample: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def check(self, ok: bool, describe: Callable[[], str]) -> bool:
        """Record one check; ``describe`` runs only for the first failure."""
        self.checks += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = describe()
        return ok

    def equal(self, got: object, want: object, what: str) -> bool:
        return self.check(got == want, lambda: f"{what}: got {got}, expected {want}")

    def summary(self) -> str:
        status = "ok" if self.passed else "FAIL"
        line = (
            f"{self.name}: {status} "
            f"({self.checks - self.failures}/{self.checks} checks passed)"
        )
        if self.counterexample:
            line += f"\n  counterexample: {self.counterexample}"
        return line


# -- oracle ------------------------------------------------------------ #


def cells(max_size: int) -> Iterator[tuple[int, int]]:
    """Every ``(b, k)`` with ``k >= 1`` and ``2b + k <= max_size``, by size."""
    for n in range(1, max_size + 1):
        for b in range(n // 2 + 1):
            k = n - 2 * b
            if k >= 1:
                yield b, k


@dataclass
class OracleCell:
    """Brute-force tallies of every structure with ``b`` arcs and ``k`` bases."""

    b: int
    k: int
    total: int = 0
    by_partial_stacks: Counter[int] = field(default_factory=Counter)
    by_max_stack: Counter[int] = field(default_factory=Counter)
    by_max_loop: Counter[int] = field(default_factory=Counter)
    by_max_both: Counter[tuple[int, int]] = field(default_factory=Counter)
    by_joint: Counter[tuple[HelixDistribution, LoopDistribution, int]] = field(
        default_factory=Counter
    )
    by_helix_dist: Counter[HelixDistribution] = field(default_factory=Counter)
    by_loop_dist: Counter[LoopDistribution] = field(default_factory=Counter)
    # (number of helices, smallest helix)
    by_helices: Counter[tuple[int, int]] = field(default_factory=Counter)
    sum_partial_stacks: int = 0
    sum_helices: int = 0

    def add(self, s: SecondaryStructure) -> None:
        st = compute_stats(s)
        hd = HelixDistribution.from_sizes(st.helix_sizes)
        ld = LoopDistribution.from_sizes(st.loop_sizes)
        max_stack = max(st.partial_stack_lengths)
        max_loop = max(st.loop_sizes)
        self.total += 1
        self.by_partial_stacks[st.l_e] += 1
        self.by_max_stack[max_stack] += 1
        self.by_max_loop[max_loop] += 1
        self.by_max_both[(max_stack, max_loop)] += 1
        self.by_joint[(hd, ld, st.l_e)] += 1
        self.by_helix_dist[hd] += 1
        self.by_loop_dist[ld] += 1
        self.by_helices[(st.s, min(st.helix_sizes))] += 1
        self.sum_partial_stacks += st.l_e
        self.sum_helices += st.s

    def at_most_stack(self, h: int) -> int:
        return sum(c for m, c in self.by_max_stack.items() if m <= h)

    def at_most_loop(self, l: int) -> int:
        return sum(c for m, c in self.by_max_loop.items() if m <= l)

    def at_most_both(self, h: int, l: int) -> int:
        return sum(c for (m, n), c in self.by_max_both.items() if m <= h and n <= l)

    def helices(self, s: int, sigma: int) -> int:
        return sum(
            c for (n, low), c in self.by_helices.items() if n == s and low >= sigma
        )


@lru_cache(maxsize=None)
def oracle_cell(b: int, k: int) -> OracleCell:
    started = time.perf_counter()
    cell = OracleCell(b, k)
    for s in enumerate_structures(b, k):
        cell.add(s)
    logger.debug(
        "oracle cell b=%d k=%d: %d structures in %.3fs",
        b,
        k,
        cell.total,
        time.perf_counter() - started,
    )
    return cell


# -- suites ------------------------------------------------------------ #


def _dot_bracket_key(text: str) -> str:
    return text.translate(str.maketrans(".()", "012"))


def _refines(stacks: Sequence[int], helices: Sequence[int]) -> bool:
    """Consecutive runs of ``helices`` sum exactly to each stack length."""
    it = iter(stacks)
    target = next(it, 0)
    acc = 0
    for h in helices:
        acc += h
        if acc > target:
            return False
        if acc == target:
            target = next(it, 0)
            acc = 0
    return acc == 0 and target == 0


def suite_structures(max_size: int) -> SuiteReport:
    r = SuiteReport("structures")
    for b, k in cells(min(max_size, 14)):
        listed = [to_dot_bracket(s) for s in enumerate_structures(b, k)]
        r.equal(len(listed), narayana(b, k), f"structure count b={b} k={k}")
        keys = [_dot_bracket_key(x) for x in listed]
        r.check(
            keys == sorted(set(keys)),
            lambda: f"enumeration b={b} k={k} is not strictly lexicographic",
        )
        for text in listed:
            s = parse_dot_bracket(text)
            r.equal(to_dot_bracket(s), text, "dot-bracket round trip")
            st = compute_stats(s)
            ok = (
                sum(st.partial_stack_lengths) == b + 1
                and sum(st.helix_sizes) == b + 1
                and len(st.loop_sizes) == b + 1
                and sum(st.loop_sizes) == b + k
                and st.s >= st.l_e
                and _refines(st.partial_stack_lengths, st.helix_sizes)
            )
            r.check(ok, lambda: f"statistics invariants fail for {text}: {st}")
        if k > 1:
            r.equal(
                oracle_cell(b, k).sum_helices,
                sum(s * count_by_num_helices(b, k, s) for s in range(1, b + 2)),
                f"total helices b={b} k={k}",
            )
    return r


def suite_trees(max_size: int) -> SuiteReport:
    r = SuiteReport("trees")
    for edges in range(min(max_size, 10) + 1):
        grouped: Counter[tuple[int, int]] = Counter()
        trees = list(enumerate_plane_trees(edges))
        r.equal(len(trees), math.comb(2 * edges, edges) // (edges + 1), "Catalan count")
        for t in trees:
            text = serialize_tree(t)
            r.equal(parse_tree(text), t, f"tree round trip {text!r}")
            st = tree_stats(t)
            ok = (
                st.even_vertices + st.odd_vertices == edges + 1
                and sum(st.eblock_sizes) == st.odd_vertices
                and len(st.eblock_sizes) == st.odd_internal + st.even_rightmost_leaf
            )
            r.check(ok, lambda: f"tree invariants fail for {text!r}: {st}")
            grouped[(st.even_vertices, st.even_internal)] += 1
        if edges == 0:
            continue
        for (k, l), count in sorted(grouped.items()):
            b = edges - k
            r.equal(
                count_by_partial_stacks(b, k, l),
                count,
                f"trees with {edges} edges, {k} even, {l} even internal",
            )
    return r


def _check_cell(r: SuiteReport, b: int, k: int) -> None:
    cell = oracle_cell(b, k)
    r.equal(narayana(b, k), cell.total, f"narayana({b}, {k})")
    for l in range(1, b + 2):
        r.equal(
            count_by_partial_stacks(b, k, l),
            cell.by_partial_stacks[l],
            f"count_by_partial_stacks({b}, {k}, {l})",
        )
    for h in range(1, b + 2):
        r.equal(
            count_max_partial_stack(b, k, h),
            cell.at_most_stack(h),
            f"count_max_partial_stack({b}, {k}, {h})",
        )
    for l in range(1, b + k + 1):
        r.equal(
            count_max_loop_size(b, k, l),
            cell.at_most_loop(l),
            f"count_max_loop_size({b}, {k}, {l})",
        )
        for h in range(1, b + 2):
            r.equal(
                count_max_both(b, k, h, l),
                cell.at_most_both(h, l),
                f"count_max_both({b}, {k}, {h}, {l})",
            )
    r.equal(
        expected_partial_stacks(b, k),
        Fraction(cell.sum_partial_stacks, cell.total),
        f"expected_partial_stacks({b}, {k})",
    )
    r.equal(
        mean_partial_stack_length(b, k),
        Fraction((b + 1) * cell.total, cell.sum_partial_stacks),
        f"mean_partial_stack_length({b}, {k})",
    )
    r.equal(
        expected_helices(b, k),
        Fraction(cell.sum_helices, cell.total),
        f"expected_helices({b}, {k})",
    )
    r.equal(
        mean_helix_size(b, k),
        Fraction((b + 1) * cell.total, cell.sum_helices),
        f"mean_helix_size({b}, {k})",
    )
    if k == 1:
        return

    hds = list(helix_distributions(b))
    lds = list(loop_distributions(b, k))
    for hd in hds:
        r.equal(
            count_by_helix_distribution(b, k, hd),
            cell.by_helix_dist[hd],
            f"count_by_helix_distribution({b}, {k}, {hd})",
        )
        for ld in lds:
            r.equal(
                count_joint_marginal(b, k, hd, ld),
                sum(cell.by_joint[(hd, ld, le)] for le in range(1, hd.s + 1)),
                f"count_joint_marginal({b}, {k}, {hd}, {ld})",
            )
            for le in range(1, hd.s + 1):
                r.equal(
                    count_joint(b, k, hd, ld, le),
                    cell.by_joint[(hd, ld, le)],
                    f"count_joint({b}, {k}, {hd}, {ld}, l_e={le})",
                )
    for ld in lds:
        r.equal(
            count_by_loop_distribution(b, k, ld),
            cell.by_loop_dist[ld],
            f"count_by_loop_distribution({b}, {k}, {ld})",
        )
    for sigma in (1, 2, 3):
        for s in range(1, b + 2):
            r.equal(
                count_by_num_helices(b, k, s, sigma),
                cell.helices(s, sigma),
                f"count_by_num_helices({b}, {k}, {s}, sigma={sigma})",
            )


def suite_formulas(max_size: int) -> SuiteReport:
    r = SuiteReport("formulas")
    for b, k in cells(max_size):
        _check_cell(r, b, k)
    return r


def suite_tables(max_size: int) -> SuiteReport:
    r = SuiteReport("tables")
    for table_id, golden in ((1, TABLE_1), (2, TABLE_2)):
        got = {(c.s, c.b, c.k): c.count for c in helix_table(table_id)}
        r.equal(sorted(got), sorted(golden), f"table {table_id} cells")
        for key, want in golden.items():
            r.equal(got.get(key), want, f"table {table_id} cell (s, b, k)={key}")
    return r


def suite_bijections(max_size: int) -> SuiteReport:
    r = SuiteReport("bijections")
    sw_images: set[str] = set()
    chen_images: set[str] = set()
    for b, k in cells(min(max_size, 12)):
        for s in enumerate_structures(b, k):
            text = to_dot_bracket(s)
            t = sw_forward(s)
            sw_images.add(serialize_tree(t))
            r.equal(sw_inverse(t), s, f"sw round trip on {text}")
            r.check(
                t.edges == b + k and t.leaves() == k,
                lambda: f"sw image of {text} has {t.edges} edges, {t.leaves()} leaves",
            )
            c = chen_forward(s)
            chen_images.add(serialize_tree(c))
            r.equal(chen_inverse(c), s, f"chen round trip on {text}")
            st, ts = compute_stats(s), tree_stats(c)
            r.equal(
                sorted(d for d in ts.even_outdegrees if d),
                sorted(st.partial_stack_lengths),
                f"partial stacks vs even outdegrees for {text}",
            )
            r.equal(
                sorted(d + 1 for d in ts.odd_outdegrees),
                sorted(st.loop_sizes),
                f"loop sizes vs odd outdegrees for {text}",
            )
            r.equal(
                sorted(ts.eblock_sizes),
                sorted(st.helix_sizes),
                f"helix sizes vs E-blocks for {text}",
            )
    total = sum(narayana(b, k) for b, k in cells(min(max_size, 12)))
    r.equal(len(sw_images), total, "sw_forward injective")
    r.equal(len(chen_images), total, "chen_forward injective")

    for edges in range(1, min(max_size, 9) + 1):
        for t in enumerate_plane_trees(edges):
            text = serialize_tree(t)
            r.equal(sw_forward(sw_inverse(t)), t, f"sw inverse round trip on {text!r}")
            r.equal(
                chen_forward(chen_inverse(t)), t, f"chen inverse round trip on {text!r}"
            )
            r.equal(
                composite_tree_map_inverse(composite_tree_map(t)),
                t,
                f"composite round trip on {text!r}",
            )

    for edges in range(1, min(max_size, 6) + 1):
        for lt in enumerate_labelled_trees(edges):
            f = forest_encode(lt)
            p = forest_profile(lt)
            r.equal(forest_decode(f), lt, f"g(h(t)) for {lt}")
            r.equal(forest_encode(forest_decode(f)), f, f"h(g(f)) for {f}")
            r.check(
                len(f.e_trees) == p.s and len(f.o_trees) == p.l_o,
                lambda: f"forest {f} of {lt} has the wrong number of small trees",
            )
            for name, predicate in FOREST_PREDICATES.items():
                r.check(
                    predicate(f, p),
                    lambda: f"predicate ({name}) fails on {f} from {lt}",
                )
    return r


def suite_series(max_size: int) -> SuiteReport:
    r = SuiteReport("series")
    top = min(max_size, 8)
    stacks = partial_stack_system()
    w1, _ = stacks.fixed_point(top, top)
    for p in range(1, top + 1):
        for q in range(1, top + 1):
            # at k = l the leaf-insertion factor is one
            want = count_by_partial_stacks(q - 1, p, p)
            r.equal(w1.coeff(p, q), want, f"partial-stack fixed point [{p}, {q}]")
            r.equal(
                stacks.coefficient(p, q), want, f"partial-stack Lagrange [{p}, {q}]"
            )

    for h in range(1, top + 1):
        system = max_stack_system(h)
        z1, _ = system.fixed_point(top, top)
        for p in range(1, top + 1):
            for q in range(1, top + 1):
                want = count_max_partial_stack(q - 1, p, h)
                r.equal(z1.coeff(p, q), want, f"H_{h} fixed point [{p}, {q}]")
                r.equal(system.coefficient(p, q), want, f"H_{h} Lagrange [{p}, {q}]")

    for l in range(1, top + 1):
        system = max_loop_system(l)
        x1, _ = system.fixed_point(top, top)
        for p in range(1, top + 1):
            for q in range(1, top + 1):
                want = count_max_loop_size(q - 1, p, l)
                r.equal(x1.coeff(p, q), want, f"L_{l} fixed point [{p}, {q}]")
                r.equal(system.coefficient(p, q), want, f"L_{l} Lagrange [{p}, {q}]")
    return r


def suite_probabilities(max_size: int) -> SuiteReport:
    r = SuiteReport("probabilities")
    for b in range(min(max_size, 10) + 1):
        for sigma in (1, 2, 3):
            for s in range(1, b + 2):
                hds = list(helix_distributions(b, s, sigma))
                if not hds:
                    continue
                probs = [
                    helix_distribution_probability(b, 2, s, sigma, hd) for hd in hds
                ]
                r.equal(
                    sum(probs), Fraction(1), f"probabilities b={b} s={s} sigma={sigma}"
                )
                r.check(
                    all(0 <= p <= 1 for p in probs),
                    lambda: f"probability outside [0, 1] for b={b} s={s} sigma={sigma}",
                )
    return r


def suite_identities(max_size: int) -> SuiteReport:
    r = SuiteReport("identities")
    for b in range(31):
        for k in range(1, 31):
            r.check(
                narayana_sum_identity_check(b, k),
                lambda: f"narayana sum identity fails at b={b} k={k}",
            )
    for b in range(min(max_size, 12) + 1):
        for k in range(1, min(max_size, 12) + 1):
            n = narayana(b, k)
            r.equal(count_max_partial_stack(b, k, b + 1), n, f"H_(b+1)({b}, {k})")
            r.equal(count_max_loop_size(b, k, b + k), n, f"L_(b+k)({b}, {k})")
            if b <= 8 and k <= 8:
                r.equal(count_max_both(b, k, b + 1, b + k), n, f"P({b}, {k}) unbounded")
    for b in range(min(max_size, 8) + 1):
        for k in range(1, min(max_size, 8) + 1):
            for h in range(1, b + 2):
                r.equal(
                    count_max_both(b, k, h, b + k),
                    count_max_partial_stack(b, k, h),
                    f"P marginal in h ({b}, {k}, h={h})",
                )
            for l in range(1, b + k + 1):
                r.equal(
                    count_max_both(b, k, b + 1, l),
                    count_max_loop_size(b, k, l),
                    f"P marginal in l ({b}, {k}, l={l})",
                )
    return r


SUITES: dict[str, Callable[[int], SuiteReport]] = {
    "structures": suite_structures,
    "trees": suite_trees,
    "formulas": suite_formulas,
    "tables": suite_tables,
    "bijections": suite_bijections,
    "series": suite_series,
    "probabilities": suite_probabilities,
    "identities": suite_identities,
}


def _timed(name: str, max_size: int) -> SuiteReport:
    started = time.perf_counter()
    report = SUITES[name](max_size)
    report.seconds = time.perf_counter() - started
    logger.info(
        "suite %s: %d checks, %d failures in %.2fs",
        name,
        report.checks,
        report.failures,
        report.seconds,
    )
    return report


def run_suites(
    names: Iterable[str] | None = None, max_size: int = 12, jobs: int = 1
) -> list[SuiteReport]:
    """Run suites and return their reports in the order requested.

    With ``jobs > 1`` suites run on a thread pool; report order does not
    depend on completion order.
    """
    selected = list(SUITES) if names is None else list(names)
    unknown = [n for n in selected if n not in SUITES]
    if unknown:
        raise VerifyError(
            f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}"
        )
    if not 1 <= max_size <= MAX_VERIFY_SIZE:
        raise VerifyError(f"max size must be in 1..{MAX_VERIFY_SIZE}, got {max_size}")
    if jobs < 1:
        raise VerifyError(f"jobs must be at least 1, got {jobs}")

    if jobs == 1:
        return [_timed(n, max_size) for n in selected]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_timed, n, max_size) for n in selected]
        return [f.result() for f in futures]
