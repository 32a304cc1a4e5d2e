"""Closed-form counts of RNA secondary structures.

Throughout, ``b`` is the number of real arcs, so a structure has ``b + 1``
base pairs once the auxiliary arc is adjoined, and ``k`` is the number of
isolated bases. Every count is an exact ``int``; expectations and
probabilities are exact :class:`fractions.Fraction` values. Divisions
inside a counting formula are carried out on fractions and the result is
checked to be integral, so a transcription error surfaces as a
:class:`CountingError` instead of a wrong number.

Size distributions use the ``size:count`` notation::

    >>> parse_distribution("1:1,2:2")
    HelixDistribution(parts=((1, 1), (2, 2)))
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, TypeVar, Union

from rnacount.series import max_both_system

logger = logging.getLogger(__name__)

CountingResult = Union[int, Fraction]


class CountingError(ValueError):
    """Invalid parameters or distributions, or a non-integral count."""


class UnsupportedParameterError(CountingError):
    """Parameters outside the hypothesis of a closed form (e.g. ``k = 1``)."""


# -- arithmetic -------------------------------------------------------- #


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, zero whenever ``k < 0``, ``k > n`` or ``n < 0``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _exact(value: Fraction, formula: str) -> int:
    if value.denominator != 1:
        raise CountingError(f"{formula} evaluated to the non-integer {value}")
    if value < 0:
        raise CountingError(f"{formula} evaluated to the negative {value}")
    return int(value)


def _require(b: int, k: int, *, min_k: int = 1) -> None:
    if b < 0:
        raise CountingError(f"b must be non-negative, got {b}")
    if k < min_k:
        raise CountingError(f"k must be at least {min_k}, got {k}")


def _require_joint(k: int, formula: str) -> None:
    if k <= 1:
        raise UnsupportedParameterError(
            f"{formula} needs k > 1, got k={k}; use the enumeration oracle"
        )


def format_result(value: CountingResult) -> str:
    """Decimal integer, or ``p/q`` for a non-integral fraction."""
    return str(value)


# -- distributions ----------------------------------------------------- #


D = TypeVar("D", bound="Distribution")


@dataclass(frozen=True)
class Distribution:
    """Multiset of sizes as ``(size, multiplicity)`` pairs.

    Pairs are canonical: sorted by size, merged, zero multiplicities
    dropped.
    """

    parts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Counter[int] = Counter()
        for size, count in self.parts:
            size, count = int(size), int(count)
            if size < 1:
                raise CountingError(f"sizes must be positive, got {size}")
            if count < 0:
                raise CountingError(f"multiplicity of size {size} is negative")
            merged[size] += count
        object.__setattr__(
            self, "parts", tuple(sorted((s, c) for s, c in merged.items() if c))
        )

    @classmethod
    def of(cls: type[D], mapping: Mapping[int, int]) -> D:
        return cls(tuple(mapping.items()))

    @classmethod
    def from_sizes(cls: type[D], sizes: Iterable[int]) -> D:
        return cls(tuple(Counter(sizes).items()))

    def multiplicity(self, size: int) -> int:
        return dict(self.parts).get(size, 0)

    @property
    def count(self) -> int:
        """Number of parts."""
        return sum(c for _, c in self.parts)

    @property
    def total(self) -> int:
        """Sum of all sizes."""
        return sum(s * c for s, c in self.parts)

    def denominator(self, min_size: int = 1) -> int:
        """Product of ``multiplicity!`` over sizes at least ``min_size``."""
        return math.prod(factorial(c) for s, c in self.parts if s >= min_size)

    def __str__(self) -> str:
        return ",".join(f"{s}:{c}" for s, c in self.parts)


class HelixDistribution(Distribution):
    @property
    def s(self) -> int:
        return self.count


class LoopDistribution(Distribution):
    @property
    def l_o(self) -> int:
        """Loops of size at least two."""
        return sum(c for s, c in self.parts if s >= 2)


def parse_distribution(
    text: str, cls: type[D] = HelixDistribution  # type: ignore[assignment]
) -> D:
    """Parse ``"size:count,size:count"``; a bare ``size`` counts once."""
    pairs: list[tuple[int, int]] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        size, _, count = item.partition(":")
        try:
            pairs.append((int(size), int(count) if count else 1))
        except ValueError:
            raise CountingError(f"malformed distribution entry {item!r}") from None
    if not pairs:
        raise CountingError(f"empty distribution {text!r}")
    return cls(tuple(pairs))


def _check_helix(b: int, hd: Distribution) -> None:
    if hd.total != b + 1:
        raise CountingError(
            f"helix sizes {hd} sum to {hd.total}, expected b+1 = {b + 1}"
        )


def _check_loop(b: int, k: int, ld: Distribution) -> None:
    if ld.count != b + 1:
        raise CountingError(
            f"loop distribution {ld} has {ld.count} loops, expected {b + 1}"
        )
    if ld.total != b + k:
        raise CountingError(
            f"loop sizes {ld} sum to {ld.total}, expected b+k = {b + k}"
        )


def _partitions(
    total: int, parts: int | None, minimum: int, maximum: int
) -> Iterator[list[int]]:
    """Non-increasing partitions of ``total`` into parts within bounds."""
    if total == 0:
        if parts in (None, 0):
            yield []
        return
    if parts == 0:
        return
    for first in range(min(total, maximum), minimum - 1, -1):
        rest = None if parts is None else parts - 1
        for tail in _partitions(total - first, rest, minimum, first):
            yield [first, *tail]


def helix_distributions(
    b: int, s: int | None = None, sigma: int = 1
) -> Iterator[HelixDistribution]:
    """Every helix size distribution of ``b + 1`` base pairs.

    Restricted to ``s`` helices when given, and to sizes at least ``sigma``.
    """
    for sizes in _partitions(b + 1, s, max(sigma, 1), b + 1):
        yield HelixDistribution.from_sizes(sizes)


def loop_distributions(b: int, k: int) -> Iterator[LoopDistribution]:
    """Every loop size distribution: ``b + 1`` loops of total size ``b + k``."""
    for sizes in _partitions(b + k, b + 1, 1, b + k):
        yield LoopDistribution.from_sizes(sizes)


# -- totals and partial stacks ----------------------------------------- #


def narayana(b: int, k: int) -> int:
    """Structures with ``b + 1`` base pairs and ``k`` isolated bases."""
    if b < 0 or k < 0:
        raise CountingError(f"b and k must be non-negative, got b={b}, k={k}")
    if b + k == 0:
        raise CountingError("narayana is undefined for b + k = 0")
    value = Fraction(binomial(b + k, k) * binomial(b + k, k - 1), b + k)
    return _exact(value, "narayana")


def count_by_partial_stacks(b: int, k: int, l: int) -> int:
    """Structures with exactly ``l`` partial stacks."""
    _require(b, k)
    if l < 1:
        return 0
    if l == 1:
        return binomial(b + k - 1, k - 1)
    value = Fraction(
        binomial(l + b - 1, l - 2) * binomial(b + 1, l) * binomial(b + k - 1, k - l),
        l - 1,
    )
    return _exact(value, "count_by_partial_stacks")


def count_max_partial_stack(b: int, k: int, h: int) -> int:
    """Structures whose partial stacks all have length at most ``h``."""
    _require(b, k)
    if h < 1:
        raise CountingError(f"h must be at least 1, got {h}")
    total = sum(
        (-1) ** i * binomial(k, i) * binomial(b + k - i * (h + 1), k - 1)
        for i in range((b + 1) // (h + 1) + 1)
    )
    value = Fraction(binomial(b + k, k) * total, b + k)
    return _exact(value, "count_max_partial_stack")


def count_max_loop_size(b: int, k: int, l: int) -> int:
    """Structures whose loops all have size at most ``l``."""
    _require(b, k)
    if l < 1:
        raise CountingError(f"l must be at least 1, got {l}")
    total = sum(
        (-1) ** i
        * binomial(b + 1, i)
        * binomial(b + k - 1 - i * l, k - 1 - i * l)
        for i in range((k - 1) // l + 1)
    )
    value = Fraction(binomial(b + k, b) * total, b + 1)
    return _exact(value, "count_max_loop_size")


def count_max_both(b: int, k: int, h: int, l: int) -> int:
    """Partial stacks of length at most ``h`` and loops of size at most ``l``.

    No closed form: the coefficient ``[t1^k t2^(b+1)]`` of the matching tree
    system is evaluated by Lagrange inversion.
    """
    _require(b, k)
    if h < 1 or l < 1:
        raise CountingError(f"h and l must be at least 1, got h={h}, l={l}")
    return max_both_system(h, l).coefficient(k, b + 1)


def expected_partial_stacks(b: int, k: int) -> Fraction:
    _require(b, k)
    weighted = sum(l * count_by_partial_stacks(b, k, l) for l in range(1, b + 2))
    return Fraction(weighted, narayana(b, k))


def mean_partial_stack_length(b: int, k: int) -> Fraction:
    """Total base pairs over total partial stacks, across all structures."""
    _require(b, k)
    stacks = sum(l * count_by_partial_stacks(b, k, l) for l in range(1, b + 2))
    return Fraction((b + 1) * narayana(b, k), stacks)


def narayana_sum_identity_check(b: int, k: int) -> bool:
    """Narayana number equals the sum of the partial-stack counts."""
    _require(b, k)
    rhs = binomial(b + k - 1, k - 1) + sum(
        count_by_partial_stacks(b, k, l) for l in range(2, b + 2)
    )
    return narayana(b, k) == rhs


# -- helices and loops ------------------------------------------------- #


def _loop_factor(ld: LoopDistribution) -> Fraction:
    return Fraction(factorial(ld.l_o - 1), ld.denominator(min_size=2))


def _helix_factor(hd: Distribution) -> Fraction:
    return Fraction(factorial(hd.count), hd.denominator())


def count_joint(
    b: int,
    k: int,
    hd: HelixDistribution,
    ld: LoopDistribution,
    l_e: int,
) -> int:
    """Structures with the given helix and loop size distributions and ``l_e``
    partial stacks."""
    _require(b, k)
    _require_joint(k, "count_joint")
    _check_helix(b, hd)
    _check_loop(b, k, ld)
    if l_e < 1:
        raise CountingError(f"l_e must be at least 1, got {l_e}")
    s, l_o = hd.count, ld.l_o
    value = (
        _helix_factor(hd)
        * _loop_factor(ld)
        * binomial(k - 1, l_e - 1)
        * binomial(s - 1, l_o - 1)
        * binomial(l_o, l_e + l_o - s)
    )
    return _exact(value, "count_joint")


def count_joint_marginal(
    b: int, k: int, hd: HelixDistribution, ld: LoopDistribution
) -> int:
    """:func:`count_joint` summed over the number of partial stacks."""
    _require(b, k)
    _require_joint(k, "count_joint_marginal")
    _check_helix(b, hd)
    _check_loop(b, k, ld)
    s, l_o = hd.count, ld.l_o
    value = (
        _helix_factor(hd)
        * _loop_factor(ld)
        * binomial(k - 1 + l_o, s - 1)
        * binomial(s - 1, l_o - 1)
    )
    return _exact(value, "count_joint_marginal")


def _helix_sum(k: int, s: int) -> Fraction:
    total = sum(
        binomial(k - 1, l_o) * binomial(s - 1, l_o - 1) * binomial(k - 1 + l_o, s - 1)
        for l_o in range(1, s + 1)
    )
    return Fraction(total, k - 1)


def count_by_helix_distribution(b: int, k: int, hd: HelixDistribution) -> int:
    _require(b, k)
    _require_joint(k, "count_by_helix_distribution")
    _check_helix(b, hd)
    value = _helix_factor(hd) * _helix_sum(k, hd.count)
    return _exact(value, "count_by_helix_distribution")


def count_by_num_helices(b: int, k: int, s: int, sigma: int = 1) -> int:
    """Structures with ``s`` helices, each of at least ``sigma`` base pairs."""
    _require(b, k)
    _require_joint(k, "count_by_num_helices")
    if s < 1 or sigma < 1:
        raise CountingError(f"s and sigma must be at least 1, got s={s}, sigma={sigma}")
    value = binomial(b - (sigma - 1) * s, s - 1) * _helix_sum(k, s)
    return _exact(value, "count_by_num_helices")


def count_by_loop_distribution(b: int, k: int, ld: LoopDistribution) -> int:
    """Structures with the given loop size distribution."""
    _require(b, k)
    _require_joint(k, "count_by_loop_distribution")
    _check_loop(b, k, ld)
    return sum(count_joint_marginal(b, k, hd, ld) for hd in helix_distributions(b))


def helix_distribution_probability(
    b: int, k: int, s: int, sigma: int, hd: HelixDistribution
) -> Fraction:
    """Probability of ``hd`` among structures with ``s`` helices of size at
    least ``sigma``. Independent of ``k``."""
    _require(b, k)
    _check_helix(b, hd)
    if hd.count != s:
        raise CountingError(f"distribution {hd} has {hd.count} helices, expected {s}")
    if sigma < 1 or any(size < sigma for size, _ in hd.parts):
        raise CountingError(f"distribution {hd} has a helix smaller than {sigma}")
    free = b - sigma * s
    return Fraction(
        factorial(s) * factorial(s - 1) * factorial(free + 1),
        hd.denominator() * factorial(free + s),
    )


def expected_helices(b: int, k: int) -> Fraction:
    """Mean number of helices, auxiliary helix included."""
    _require(b, k)
    if k == 1:
        # the fully nested chain is the only structure
        return Fraction(1)
    weighted = sum(s * count_by_num_helices(b, k, s) for s in range(1, b + 2))
    return Fraction(weighted, narayana(b, k))


def mean_helix_size(b: int, k: int) -> Fraction:
    """Total base pairs over total helices, across all structures."""
    _require(b, k)
    if k == 1:
        return Fraction(b + 1)
    helices = sum(s * count_by_num_helices(b, k, s) for s in range(1, b + 2))
    return Fraction((b + 1) * narayana(b, k), helices)


# -- helix tables ------------------------------------------------------ #

TABLE_COLUMNS: tuple[tuple[int, int], ...] = (
    (2, 3), (2, 4), (2, 5),
    (3, 3), (3, 4), (3, 5),
    (4, 3), (4, 4), (4, 5),
)  # fmt: skip

# table id -> (sigma, largest s)
TABLE_LAYOUT: dict[int, tuple[int, int]] = {1: (1, 5), 2: (2, 2)}


@dataclass(frozen=True)
class TableCell:
    s: int
    b: int
    k: int
    count: int


def helix_table(table_id: int) -> list[TableCell]:
    """Counts of structures by number of helices over the fixed (b, k) grid.

    Table 1 allows helices of any size, table 2 only helices of at least
    two base pairs. Rows run over ``s``, columns over :data:`TABLE_COLUMNS`.
    """
    try:
        sigma, top = TABLE_LAYOUT[table_id]
    except KeyError:
        raise CountingError(
            f"unknown table {table_id}; choose from {sorted(TABLE_LAYOUT)}"
        ) from None
    return [
        TableCell(s, b, k, count_by_num_helices(b, k, s, sigma))
        for s in range(1, top + 1)
        for b, k in TABLE_COLUMNS
    ]
