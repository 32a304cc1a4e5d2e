"""Bijections between secondary structures and plane trees.

Two maps are provided, both rooted at the auxiliary arc ``(0, n + 1)``:

* The Schmitt-Waterman map (:func:`sw_forward`) turns every arc and
  isolated base into a vertex; the children of an arc are the elements it
  directly covers, left to right. Isolated bases become the leaves.
* Chen's map (:func:`chen_forward`) roots the tree at the leftmost
  isolated base. Even-level vertices are isolated bases and odd-level
  vertices are arcs, so partial stacks show up as even-level outdegrees,
  loop sizes as one plus odd-level outdegrees, and helices as E-blocks.

Chen's construction, with bases ``b1..bk`` left to right and arcs
``e0..eb`` by left end (``e0`` auxiliary):

1. ``b1`` is the root; its children are the arcs covering it, outermost
   first.
2. For each later base ``bj``, ``bj`` becomes the new leftmost child of
   the innermost arc already in the tree that covers it, and receives as
   children the not-yet-placed arcs covering it, outermost first.

Labels are recoverable from the bare tree: a right-to-left depth-first
search lists the even-level vertices as ``b1..bk``, and reading the
children of ``b1..bk`` left to right lists ``e0..eb``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from rnacount.structure import (
    CLOSE,
    DOT,
    OPEN,
    SecondaryStructure,
    parse_dot_bracket,
)
from rnacount.tree import PlaneTree


class BijectionError(ValueError):
    """Input outside the domain of a structure/tree bijection."""


@dataclass
class _Vertex:
    """Mutable working vertex used while building or decoding trees."""

    children: list[_Vertex] = field(default_factory=list)

    def freeze(self) -> PlaneTree:
        return PlaneTree(tuple(c.freeze() for c in self.children))

    @classmethod
    def thaw(cls, t: PlaneTree) -> _Vertex:
        return cls([cls.thaw(c) for c in t.children])


# -- Schmitt-Waterman -------------------------------------------------- #


def sw_forward(s: SecondaryStructure) -> PlaneTree:
    partner = s.partners()

    def build(i: int, j: int) -> PlaneTree:
        children: list[PlaneTree] = []
        p = i + 1
        while p < j:
            if partner[p] > p:
                children.append(build(p, partner[p]))
                p = partner[p] + 1
            else:
                children.append(PlaneTree())
                p += 1
        return PlaneTree(tuple(children))

    return build(0, s.n + 1)


def sw_inverse(t: PlaneTree) -> SecondaryStructure:
    """Read a tree back as a structure: leaves are bases, the rest arcs."""
    if t.is_leaf:
        raise BijectionError("the single-node tree has no bases")

    def encode(v: PlaneTree) -> str:
        if v.is_leaf:
            return DOT
        return OPEN + "".join(encode(c) for c in v.children) + CLOSE

    return parse_dot_bracket("".join(encode(c) for c in t.children))


# -- Chen -------------------------------------------------------------- #


def chen_forward(s: SecondaryStructure) -> PlaneTree:
    if s.k == 0:
        raise BijectionError("Chen's bijection needs at least one isolated base")
    partner = s.partners()

    # arcs are keyed by left end; 0 is the auxiliary arc
    arc_vertex: dict[int, _Vertex] = {}
    root: _Vertex | None = None
    open_arcs = [0]
    for p in range(1, s.n + 1):
        if partner[p] > p:
            open_arcs.append(p)
            continue
        if partner[p] >= 0:
            open_arcs.pop()
            continue
        base = _Vertex()
        placed = [a for a in open_arcs if a in arc_vertex]
        if root is None:
            root = base
        else:
            arc_vertex[placed[-1]].children.insert(0, base)
        for a in open_arcs[len(placed):]:
            arc_vertex[a] = _Vertex()
            base.children.append(arc_vertex[a])

    assert root is not None
    return root.freeze()


def _right_to_left_evens(root: _Vertex) -> list[_Vertex]:
    """Even-level vertices in right-to-left depth-first order."""
    order: list[_Vertex] = []
    todo: list[tuple[_Vertex, int]] = [(root, 0)]
    while todo:
        v, level = todo.pop()
        if level % 2 == 0:
            order.append(v)
        # children pushed left to right so the rightmost pops first
        todo.extend((c, level + 1) for c in v.children)
    return order


def chen_inverse(t: PlaneTree) -> SecondaryStructure:
    """Recover the structure whose Chen image is ``t``.

    The single-node tree maps to ``"."``; it is the only tree that is not
    a Chen image, and ``"."`` is the structure with the fewest edges.
    """
    if t.is_leaf:
        return parse_dot_bracket(DOT)

    root = _Vertex.thaw(t)
    bases = _right_to_left_evens(root)
    base_index = {id(v): j for j, v in enumerate(bases, 1)}

    # largest base index inside each subtree
    submax: dict[int, int] = {}

    def fill(v: _Vertex) -> int:
        best = base_index.get(id(v), 0)
        for c in v.children:
            best = max(best, fill(c))
        submax[id(v)] = best
        return best

    fill(root)

    # an arc closes right after the last base it covers: its parent base,
    # its own subtree, and the subtrees of its right siblings (which are
    # arcs nested inside it)
    closers = [0] * (len(bases) + 1)
    for j, base in enumerate(bases, 1):
        tail = j
        last: list[int] = []
        for arc in reversed(base.children):
            tail = max(tail, submax[id(arc)])
            last.append(tail)
        last.reverse()
        first = 1 if j == 1 else 0  # skip the auxiliary arc
        for value in last[first:]:
            closers[value] += 1

    parts: list[str] = []
    for j, base in enumerate(bases, 1):
        opens = len(base.children) - (1 if j == 1 else 0)
        parts.append(CLOSE * closers[j - 1] + OPEN * opens + DOT)
    parts.append(CLOSE * closers[len(bases)])
    try:
        return parse_dot_bracket("".join(parts))
    except ValueError as e:
        raise BijectionError(f"tree {t} does not decode to a structure: {e}") from e


# -- composite --------------------------------------------------------- #


def composite_tree_map(t: PlaneTree) -> PlaneTree:
    """Tree-to-tree bijection ``sw_forward . chen_inverse``."""
    if t.is_leaf:
        raise BijectionError("the composite map needs a tree with at least one edge")
    return sw_forward(chen_inverse(t))


def composite_tree_map_inverse(t: PlaneTree) -> PlaneTree:
    return chen_forward(sw_inverse(t))
