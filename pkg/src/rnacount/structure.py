"""RNA secondary structures: parsing, validation, enumeration, statistics.

A secondary structure of length ``n`` is a non-crossing set of arcs
``(i, j)`` on positions ``1..n`` with ``j - i >= 2`` where every position
is an endpoint of at most one arc. Positions that are not endpoints are
*isolated bases*.

All statistics are computed with the auxiliary arc ``(0, n + 1)``
adjoined. It is never stored on :class:`SecondaryStructure`; it only
appears in :class:`StructureStats` (one extra partial stack, helix and
loop). Counting formulas elsewhere in the package speak of ``b + 1`` base
pairs for the same reason.

Dot-bracket text is the exchange format::

    >>> s = parse_dot_bracket("..((..))")
    >>> s.arcs
    ((3, 8), (4, 7))
    >>> to_dot_bracket(s)
    '..((..))'

Enumeration order is lexicographic on the dot-bracket string with the
alphabet ordered ``'.' < '(' < ')'``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator

logger = logging.getLogger(__name__)

DOT = "."
OPEN = "("
CLOSE = ")"

# Minimal distance between the two ends of an arc.
MIN_SPAN = 2


class StructureError(ValueError):
    """Malformed dot-bracket text or an invalid arc set.

    ``position`` is the 1-based position the problem was detected at, or
    ``None`` when the error is not tied to a single position.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class LoopKind(str, Enum):
    """Classification of a loop by the degree of its arc."""

    HAIRPIN = "hairpin"
    INTERIOR = "interior"
    MULTI = "multi"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class SecondaryStructure:
    """Non-crossing arc diagram on positions ``1..n``.

    ``arcs`` is sorted by left end. Construction validates every
    invariant and raises :class:`StructureError` on violation.
    """

    n: int
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise StructureError(f"structure length must be positive, got {self.n}")
        object.__setattr__(
            self, "arcs", tuple((int(i), int(j)) for i, j in self.arcs)
        )
        used: set[int] = set()
        open_stack: list[tuple[int, int]] = []
        prev_left = 0
        for i, j in self.arcs:
            if not 1 <= i < j <= self.n:
                raise StructureError(f"arc ({i},{j}) out of range 1..{self.n}", i)
            if i <= prev_left:
                raise StructureError(
                    f"arcs must be strictly sorted by left end, ({i},{j}) follows "
                    f"left end {prev_left}",
                    i,
                )
            if j - i < MIN_SPAN:
                raise StructureError(f"span violation at pair ({i},{j})", i)
            for p in (i, j):
                if p in used:
                    raise StructureError(f"position {p} is in more than one arc", p)
                used.add(p)
            while open_stack and open_stack[-1][1] < i:
                open_stack.pop()
            if open_stack and open_stack[-1][1] < j:
                oi, oj = open_stack[-1]
                raise StructureError(f"arcs ({oi},{oj}) and ({i},{j}) cross", i)
            open_stack.append((i, j))
            prev_left = i

    @property
    def b(self) -> int:
        """Number of stored (real) arcs."""
        return len(self.arcs)

    @property
    def k(self) -> int:
        """Number of isolated bases."""
        return self.n - 2 * len(self.arcs)

    def partners(self) -> list[int]:
        """Partner table over ``0..n+1`` including the auxiliary arc.

        ``partners()[p]`` is the other end of the arc at ``p``, or ``-1``
        for an isolated base.
        """
        table = [-1] * (self.n + 2)
        table[0] = self.n + 1
        table[self.n + 1] = 0
        for i, j in self.arcs:
            table[i] = j
            table[j] = i
        return table

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "arcs": [[i, j] for i, j in self.arcs]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SecondaryStructure:
        try:
            n = int(data["n"])
            arcs = sorted((int(i), int(j)) for i, j in data["arcs"])
        except (KeyError, TypeError, ValueError) as e:
            raise StructureError(f"malformed structure document: {e}") from e
        return cls(n, tuple(arcs))

    def __str__(self) -> str:
        return to_dot_bracket(self)


@dataclass(frozen=True)
class StructureStats:
    """Statistics of a structure with the auxiliary arc adjoined.

    Sequences are in left-to-right order: partial stacks by their first
    left end, helices by their outermost arc, loops (and ``loop_kinds``)
    by the left end of the loop's arc, the auxiliary loop first.
    """

    b: int
    k: int
    partial_stack_lengths: tuple[int, ...]
    helix_sizes: tuple[int, ...]
    loop_sizes: tuple[int, ...]
    loop_kinds: tuple[LoopKind, ...]

    @property
    def l_e(self) -> int:
        """Number of partial stacks."""
        return len(self.partial_stack_lengths)

    @property
    def s(self) -> int:
        """Number of helices."""
        return len(self.helix_sizes)

    @property
    def l_o(self) -> int:
        """Number of loops of size at least two."""
        return sum(1 for size in self.loop_sizes if size >= 2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "b": self.b,
            "k": self.k,
            "partial_stacks": list(self.partial_stack_lengths),
            "helices": list(self.helix_sizes),
            "loops": list(self.loop_sizes),
            "l_e": self.l_e,
            "s": self.s,
            "l_o": self.l_o,
        }


# -- dot-bracket ------------------------------------------------------- #


def parse_dot_bracket(text: str) -> SecondaryStructure:
    """Parse dot-bracket notation into a :class:`SecondaryStructure`.

    Brackets are matched innermost-first. Errors carry the 1-based
    position of the offending character or pair.
    """
    if not text:
        raise StructureError("empty dot-bracket string")
    stack: list[int] = []
    arcs: list[tuple[int, int]] = []
    for pos, ch in enumerate(text, 1):
        if ch == DOT:
            continue
        if ch == OPEN:
            stack.append(pos)
        elif ch == CLOSE:
            if not stack:
                raise StructureError(f"unbalanced ')' at position {pos}", pos)
            left = stack.pop()
            if pos - left < MIN_SPAN:
                raise StructureError(
                    f"span violation at pair ({left},{pos})", left
                )
            arcs.append((left, pos))
        else:
            raise StructureError(f"illegal character {ch!r} at position {pos}", pos)
    if stack:
        raise StructureError(f"unbalanced '(' at position {stack[-1]}", stack[-1])
    arcs.sort()
    return SecondaryStructure(len(text), tuple(arcs))


def to_dot_bracket(s: SecondaryStructure) -> str:
    chars = [DOT] * s.n
    for i, j in s.arcs:
        chars[i - 1] = OPEN
        chars[j - 1] = CLOSE
    return "".join(chars)


# -- enumeration ------------------------------------------------------- #


def enumerate_structures(b: int, k: int) -> Iterator[SecondaryStructure]:
    """Yield every structure with ``b`` arcs and ``k`` isolated bases.

    Each structure appears once, in lexicographic dot-bracket order with
    ``'.' < '(' < ')'``. The stream is empty when no structure exists
    (``b = k = 0``, or arcs without any isolated base to cover).
    """
    if b < 0 or k < 0:
        raise StructureError(f"b and k must be non-negative, got b={b}, k={k}")
    if b + k == 0 or (b > 0 and k == 0):
        return
    n = 2 * b + k
    logger.debug("enumerating structures b=%d k=%d (n=%d)", b, k, n)

    stack: list[int] = []
    arcs: list[tuple[int, int]] = []

    def walk(pos: int, opens_left: int, dots_left: int) -> Iterator[SecondaryStructure]:
        if pos > n:
            yield SecondaryStructure(n, tuple(sorted(arcs)))
            return
        if dots_left:
            yield from walk(pos + 1, opens_left, dots_left - 1)
        # every new arc needs a base of its own underneath
        if opens_left and dots_left:
            stack.append(pos)
            yield from walk(pos + 1, opens_left - 1, dots_left)
            stack.pop()
        if stack and pos - stack[-1] >= MIN_SPAN:
            left = stack.pop()
            arcs.append((left, pos))
            yield from walk(pos + 1, opens_left, dots_left)
            arcs.pop()
            stack.append(left)

    yield from walk(1, b, k)


# -- statistics -------------------------------------------------------- #


def _full_arcs(s: SecondaryStructure) -> list[tuple[int, int]]:
    return [(0, s.n + 1), *s.arcs]


def _loop_contents(s: SecondaryStructure) -> list[tuple[int, int]]:
    """``(directly covered elements, directly covered arcs)`` per arc."""
    partner = s.partners()
    out: list[tuple[int, int]] = []
    for i, j in _full_arcs(s):
        elements = 0
        inner_arcs = 0
        p = i + 1
        while p < j:
            elements += 1
            if partner[p] > p:
                inner_arcs += 1
                p = partner[p] + 1
            else:
                p += 1
        out.append((elements, inner_arcs))
    return out


def classify_loops(s: SecondaryStructure) -> list[LoopKind]:
    """Tag each loop, the auxiliary (exterior) loop first.

    Degree one is a hairpin, degree two an interior loop, anything larger
    a multi-loop. Bulges are interior loops.
    """
    kinds: list[LoopKind] = []
    for idx, (_, inner_arcs) in enumerate(_loop_contents(s)):
        degree = inner_arcs + 1
        if idx == 0:
            kinds.append(LoopKind.EXTERIOR)
        elif degree == 1:
            kinds.append(LoopKind.HAIRPIN)
        elif degree == 2:
            kinds.append(LoopKind.INTERIOR)
        else:
            kinds.append(LoopKind.MULTI)
    return kinds


def loop_degrees(s: SecondaryStructure) -> list[int]:
    """Degree of every loop (auxiliary loop first)."""
    return [inner + 1 for _, inner in _loop_contents(s)]


def compute_stats(s: SecondaryStructure) -> StructureStats:
    full = _full_arcs(s)
    partner = s.partners()

    stacks: list[int] = []
    run = 0
    for p in range(s.n + 2):
        if partner[p] > p:
            run += 1
        elif run:
            stacks.append(run)
            run = 0
    if run:
        stacks.append(run)

    # (i, j) continues the helix of (i - 1, j + 1) when both are arcs
    helix_of: dict[int, int] = {}
    helices: list[int] = []
    for i, j in full:
        if i > 0 and partner[i - 1] == j + 1:
            idx = helix_of[i - 1]
            helices[idx] += 1
        else:
            idx = len(helices)
            helices.append(1)
        helix_of[i] = idx

    loops = [elements for elements, _ in _loop_contents(s)]
    return StructureStats(
        b=s.b,
        k=s.k,
        partial_stack_lengths=tuple(stacks),
        helix_sizes=tuple(helices),
        loop_sizes=tuple(loops),
        loop_kinds=tuple(classify_loops(s)),
    )
