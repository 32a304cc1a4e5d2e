"""Plane trees: encoding, level statistics, E-blocks, enumeration.

A plane tree is a rooted tree whose children are linearly ordered. The
root sits on level 0; a vertex is *even* or *odd* by the parity of its
level. Trees are encoded as balanced parentheses, each child wrapped in
one pair, so the single-node tree is the empty string::

    >>> serialize_tree(parse_tree("()()"))
    '()()'
    >>> parse_tree("(())").edges
    2

An *E-block* is a maximal run of consecutive odd-level leaves among the
children of one even-level vertex, together with the odd-level internal
vertex immediately following the run if there is one. An internal child
preceded by another internal child therefore forms a block on its own.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterator

logger = logging.getLogger(__name__)


class TreeError(ValueError):
    """Malformed balanced-parentheses or nested-array tree encoding."""


@dataclass(frozen=True)
class PlaneTree:
    """Immutable plane tree; ``children`` are ordered left to right."""

    children: tuple[PlaneTree, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def edges(self) -> int:
        return sum(1 + c.edges for c in self.children)

    def leaves(self) -> int:
        if not self.children:
            return 1
        return sum(c.leaves() for c in self.children)

    def to_json(self) -> list[Any]:
        """Nested-array form: a vertex is the list of its children."""
        return [c.to_json() for c in self.children]

    @classmethod
    def from_json(cls, data: Any) -> PlaneTree:
        if not isinstance(data, list):
            raise TreeError(f"tree node must be a list, got {type(data).__name__}")
        return cls(tuple(cls.from_json(c) for c in data))

    def __str__(self) -> str:
        return serialize_tree(self)


LEAF = PlaneTree()


def tree_of(*children: PlaneTree) -> PlaneTree:
    """Build a tree from its root's children (``tree_of()`` is a leaf)."""
    return PlaneTree(tuple(children))


# -- serialization ----------------------------------------------------- #


def serialize_tree(t: PlaneTree) -> str:
    return "".join("(" + serialize_tree(c) + ")" for c in t.children)


def parse_tree(text: str) -> PlaneTree:
    """Inverse of :func:`serialize_tree`."""
    stack: list[list[PlaneTree]] = [[]]
    for pos, ch in enumerate(text, 1):
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if len(stack) == 1:
                raise TreeError(f"unbalanced ')' at position {pos}")
            node = PlaneTree(tuple(stack.pop()))
            stack[-1].append(node)
        elif ch.isspace():
            continue
        else:
            raise TreeError(f"illegal character {ch!r} at position {pos}")
    if len(stack) != 1:
        raise TreeError(f"unbalanced input: {len(stack) - 1} unclosed '('")
    return PlaneTree(tuple(stack[0]))


# -- statistics -------------------------------------------------------- #


@dataclass(frozen=True)
class TreeStats:
    edges: int
    even_vertices: int
    odd_vertices: int
    even_internal: int
    odd_internal: int
    young: int
    # even-level internal vertices whose rightmost child is a leaf
    even_rightmost_leaf: int
    eblock_sizes: tuple[int, ...] = field(default=())
    even_outdegrees: tuple[int, ...] = field(default=())
    odd_outdegrees: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "edges": self.edges,
            "even_vertices": self.even_vertices,
            "odd_vertices": self.odd_vertices,
            "even_internal": self.even_internal,
            "odd_internal": self.odd_internal,
            "young": self.young,
            "eblocks": list(self.eblock_sizes),
            "even_outdegrees": list(self.even_outdegrees),
            "odd_outdegrees": list(self.odd_outdegrees),
        }


def eblocks(children: tuple[PlaneTree, ...]) -> list[list[int]]:
    """Split a child list into E-blocks, as lists of child indices."""
    blocks: list[list[int]] = []
    current: list[int] = []
    for idx, child in enumerate(children):
        current.append(idx)
        if not child.is_leaf:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    return blocks


def tree_stats(t: PlaneTree) -> TreeStats:
    even_out: list[int] = []
    odd_out: list[int] = []
    blocks: list[int] = []
    young = 0
    rightmost_leaf = 0

    # preorder, left to right
    todo: list[tuple[PlaneTree, int]] = [(t, 0)]
    while todo:
        node, level = todo.pop()
        degree = len(node.children)
        if level % 2 == 0:
            even_out.append(degree)
            if degree:
                blocks.extend(len(b) for b in eblocks(node.children))
                if all(c.is_leaf for c in node.children):
                    young += 1
                if node.children[-1].is_leaf:
                    rightmost_leaf += 1
        else:
            odd_out.append(degree)
        todo.extend((c, level + 1) for c in reversed(node.children))

    return TreeStats(
        edges=len(even_out) + len(odd_out) - 1,
        even_vertices=len(even_out),
        odd_vertices=len(odd_out),
        even_internal=sum(1 for d in even_out if d),
        odd_internal=sum(1 for d in odd_out if d),
        young=young,
        even_rightmost_leaf=rightmost_leaf,
        eblock_sizes=tuple(blocks),
        even_outdegrees=tuple(even_out),
        odd_outdegrees=tuple(odd_out),
    )


# -- enumeration ------------------------------------------------------- #


def _dyck_words(edges: int) -> Iterator[str]:
    chars: list[str] = []

    def walk(opened: int, depth: int) -> Iterator[str]:
        if opened == edges and depth == 0:
            yield "".join(chars)
            return
        if opened < edges:
            chars.append("(")
            yield from walk(opened + 1, depth + 1)
            chars.pop()
        if depth:
            chars.append(")")
            yield from walk(opened, depth - 1)
            chars.pop()

    yield from walk(0, 0)


def enumerate_plane_trees(edges: int) -> Iterator[PlaneTree]:
    """Yield all Catalan(edges) plane trees in balanced-parentheses order."""
    if edges < 0:
        raise TreeError(f"edge count must be non-negative, got {edges}")
    logger.debug("enumerating plane trees with %d edges", edges)
    for word in _dyck_words(edges):
        yield parse_tree(word)
