"""Labelled set-alternating trees and their forests of small trees.

Even-level vertices carry E-labels ``1..k`` and odd-level vertices carry
O-labels ``1..b+1``. Every E-label sorts before every O-label; within a
class labels sort numerically. :func:`forest_encode` (the map h)
decomposes such a tree into small two-level trees, introducing *starred*
labels ``(k+1)*..(k+s-1)*`` and ``(b+2)*..(b+1+l_o)*`` to remember where
the pieces were cut; :func:`forest_decode` (the map g) glues them back.

Encoding works on *blocks* fixed once from the input tree: the E-blocks
of every even-level internal vertex and, for every odd-level internal
vertex, the single O-block made of all its children. Each round removes
the leftmost remaining block of the smallest vertex (by original label)
whose leftmost block consists of leaves only. The removed vertex is
relabelled with the next starred label of its class: an even-level
vertex keeps its place and remaining blocks, an odd-level vertex stays
behind as a starred leaf. When one block is left it is emitted as is.

Decoding repeatedly takes the starless tree with the smallest root and
merges that root into the smallest starred label of the same class,
placing the found tree's children first when the starred label is a
root.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Iterator

from rnacount.tree import PlaneTree, enumerate_plane_trees, eblocks, tree_stats


class ForestError(ValueError):
    """Malformed labelled tree or a forest that g cannot merge."""


class LabelClass(str, Enum):
    E = "E"
    O = "O"


@dataclass(frozen=True)
class Label:
    cls: LabelClass
    value: int
    starred: bool = False

    @property
    def key(self) -> tuple[int, int]:
        """Sort key: E before O, numeric within a class."""
        return (0 if self.cls is LabelClass.E else 1, self.value)

    def __str__(self) -> str:
        prefix = "e" if self.cls is LabelClass.E else "o"
        return f"{prefix}{self.value}{'*' if self.starred else ''}"

    @classmethod
    def parse(cls, text: str, starred: bool | None = None) -> Label:
        body = text.strip()
        star = body.endswith("*")
        body = body.rstrip("*")
        if len(body) < 2 or body[0] not in "eo" or not body[1:].isdigit():
            raise ForestError(f"malformed label {text!r}")
        kind = LabelClass.E if body[0] == "e" else LabelClass.O
        return cls(kind, int(body[1:]), star if starred is None else starred)


def E(value: int, starred: bool = False) -> Label:
    return Label(LabelClass.E, value, starred)


def O(value: int, starred: bool = False) -> Label:
    return Label(LabelClass.O, value, starred)


def _label_json(label: Label, children: list[Any]) -> dict[str, Any]:
    return {
        "label": f"{'e' if label.cls is LabelClass.E else 'o'}{label.value}",
        "starred": label.starred,
        "children": children,
    }


def _label_from_json(data: Any) -> Label:
    if not isinstance(data, dict) or "label" not in data:
        raise ForestError(f"labelled node must be an object with 'label': {data!r}")
    return Label.parse(str(data["label"]), bool(data.get("starred", False)))


@dataclass(frozen=True)
class LabelledTree:
    label: Label
    children: tuple[LabelledTree, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def shape(self) -> PlaneTree:
        return PlaneTree(tuple(c.shape() for c in self.children))

    def labels_by_level(self) -> tuple[list[Label], list[Label]]:
        """(even-level labels, odd-level labels) in preorder."""
        even: list[Label] = []
        odd: list[Label] = []

        def walk(node: LabelledTree, level: int) -> None:
            (even if level % 2 == 0 else odd).append(node.label)
            for c in node.children:
                walk(c, level + 1)

        walk(self, 0)
        return even, odd

    def to_json(self) -> dict[str, Any]:
        return _label_json(self.label, [c.to_json() for c in self.children])

    @classmethod
    def from_json(cls, data: Any) -> LabelledTree:
        label = _label_from_json(data)
        children = data.get("children", [])
        if not isinstance(children, list):
            raise ForestError("'children' must be a list")
        return cls(label, tuple(cls.from_json(c) for c in children))

    def __str__(self) -> str:
        if not self.children:
            return str(self.label)
        return f"{self.label}[{' '.join(str(c) for c in self.children)}]"


@dataclass(frozen=True)
class SmallTree:
    """Two-level tree: a root and an ordered list of leaves."""

    root: Label
    leaves: tuple[Label, ...] = ()

    @property
    def is_e_tree(self) -> bool:
        return self.root.cls is LabelClass.E

    def labels(self) -> Iterator[Label]:
        yield self.root
        yield from self.leaves

    def has_star(self) -> bool:
        return any(label.starred for label in self.labels())

    def to_json(self) -> dict[str, Any]:
        return _label_json(self.root, [_label_json(x, []) for x in self.leaves])

    @classmethod
    def from_json(cls, data: Any) -> SmallTree:
        tree = LabelledTree.from_json(data)
        if any(c.children for c in tree.children):
            raise ForestError(f"small tree {tree} has more than two levels")
        return cls(tree.label, tuple(c.label for c in tree.children))

    def __str__(self) -> str:
        return f"{self.root}[{' '.join(str(x) for x in self.leaves)}]"


@dataclass(frozen=True)
class SmallForest:
    """Unordered collection of small trees, stored sorted by root."""

    trees: tuple[SmallTree, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "trees", tuple(sorted(self.trees, key=lambda t: t.root.key))
        )

    @property
    def e_trees(self) -> list[SmallTree]:
        return [t for t in self.trees if t.is_e_tree]

    @property
    def o_trees(self) -> list[SmallTree]:
        return [t for t in self.trees if not t.is_e_tree]

    def to_json(self) -> list[dict[str, Any]]:
        return [t.to_json() for t in self.trees]

    @classmethod
    def from_json(cls, data: Any) -> SmallForest:
        if not isinstance(data, list):
            raise ForestError("a forest must be a JSON array of small trees")
        return cls(tuple(SmallTree.from_json(t) for t in data))

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.trees)


@dataclass(frozen=True)
class ForestProfile:
    """Parameters of a labelled tree that its forest must reflect."""

    k: int
    b: int
    s: int
    l_e: int
    l_o: int
    y: int


def forest_profile(t: LabelledTree) -> ForestProfile:
    st = tree_stats(t.shape())
    return ForestProfile(
        k=st.even_vertices,
        b=st.odd_vertices - 1,
        s=len(st.eblock_sizes),
        l_e=st.even_internal,
        l_o=st.odd_internal,
        y=st.young,
    )


def validate_labelled_tree(t: LabelledTree) -> None:
    """Raise :class:`ForestError` unless ``t`` is a labelled E-tree.

    Even levels must carry exactly the unstarred E-labels ``1..k`` and odd
    levels exactly the unstarred O-labels ``1..b+1``.
    """
    even, odd = t.labels_by_level()
    if not odd:
        raise ForestError("a labelled tree needs at least one edge")
    for level_labels, cls in ((even, LabelClass.E), (odd, LabelClass.O)):
        wrong = [x for x in level_labels if x.cls is not cls or x.starred]
        if wrong:
            raise ForestError(
                f"{cls.value}-levels carry foreign or starred labels: "
                + ", ".join(str(x) for x in wrong)
            )
        values = sorted(x.value for x in level_labels)
        if values != list(range(1, len(values) + 1)):
            raise ForestError(
                f"{cls.value}-labels must be exactly 1..{len(values)}, got {values}"
            )


# -- h: tree -> forest ------------------------------------------------- #


@dataclass(eq=False)
class _Piece:
    label: Label
    origin: Label
    children: list[_Piece] = field(default_factory=list)
    blocks: deque[list[_Piece]] = field(default_factory=deque)


def forest_encode(t: LabelledTree) -> SmallForest:
    """The map h: decompose a labelled E-tree into small trees."""
    validate_labelled_tree(t)
    profile = forest_profile(t)
    pieces: list[_Piece] = []

    def build(node: LabelledTree, level: int) -> _Piece:
        piece = _Piece(node.label, node.label)
        piece.children = [build(c, level + 1) for c in node.children]
        if piece.children:
            if level % 2 == 0:
                for block in eblocks(node.children):
                    piece.blocks.append([piece.children[i] for i in block])
            else:
                piece.blocks.append(list(piece.children))
        pieces.append(piece)
        return piece

    root = build(t, 0)
    remaining = sum(len(p.blocks) for p in pieces)
    next_star = {
        LabelClass.E: profile.k + 1,
        LabelClass.O: profile.b + 2,
    }
    out: list[SmallTree] = []

    while remaining > 1:
        ready = [
            p for p in pieces if p.blocks and all(not c.children for c in p.blocks[0])
        ]
        if not ready:
            raise ForestError(f"no removable block left while encoding {t}")
        v = min(ready, key=lambda p: p.origin.key)
        block = v.blocks.popleft()
        out.append(SmallTree(v.label, tuple(c.label for c in block)))
        del v.children[: len(block)]
        cls = v.origin.cls
        v.label = Label(cls, next_star[cls], True)
        next_star[cls] += 1
        remaining -= 1

    last = root.blocks.popleft()
    out.append(SmallTree(root.label, tuple(c.label for c in last)))
    return SmallForest(tuple(out))


# -- g: forest -> tree ------------------------------------------------- #


@dataclass(eq=False)
class _Joint:
    label: Label
    children: list[_Joint] = field(default_factory=list)

    def walk(self) -> Iterator[_Joint]:
        yield self
        for c in self.children:
            yield from c.walk()

    def freeze(self) -> LabelledTree:
        return LabelledTree(self.label, tuple(c.freeze() for c in self.children))


def forest_decode(f: SmallForest) -> LabelledTree:
    """The map g: merge a forest of small trees into one labelled tree."""
    if not f.trees:
        raise ForestError("cannot decode an empty forest")
    trees = [_Joint(t.root, [_Joint(x) for x in t.leaves]) for t in f.trees]

    while len(trees) > 1:
        starless = [
            tr for tr in trees if not any(j.label.starred for j in tr.walk())
        ]
        if not starless:
            raise ForestError(f"every tree carries a starred label in {f}")
        found = min(starless, key=lambda tr: tr.label.key)
        cls = found.label.cls
        targets = [
            j
            for tr in trees
            for j in tr.walk()
            if j.label.starred and j.label.cls is cls
        ]
        if not targets:
            raise ForestError(
                f"no starred {cls.value}-label left to merge {found.label} into"
            )
        target = min(targets, key=lambda j: j.label.value)
        trees.remove(found)
        # a starred root merges horizontally, a starred leaf is replaced
        target.label = found.label
        target.children = found.children + target.children

    (tree,) = trees
    if any(j.label.starred for j in tree.walk()):
        raise ForestError(f"starred labels survive decoding of {f}")
    return tree.freeze()


# -- predicates (a*)-(d*) ---------------------------------------------- #


def _starred_leaves(t: SmallTree) -> list[int]:
    return [i for i, x in enumerate(t.leaves) if x.starred]


def _o_tree_leaves(f: SmallForest) -> set[Label]:
    return {x for t in f.o_trees for x in t.leaves}


def check_labels(f: SmallForest, p: ForestProfile) -> bool:
    """Labels of ``f`` are exactly E* and O* for the profile ``p``."""
    seen = [x for t in f.trees for x in t.labels()]
    expected = (
        [E(i) for i in range(1, p.k + 1)]
        + [E(i, True) for i in range(p.k + 1, p.k + p.s)]
        + [O(i) for i in range(1, p.b + 2)]
        + [O(i, True) for i in range(p.b + 2, p.b + 2 + p.l_o)]
    )
    return len(seen) == len(set(seen)) and set(seen) == set(expected)


def check_a_star(f: SmallForest, p: ForestProfile) -> bool:
    e_trees = f.e_trees
    unstarred = [t for t in e_trees if not t.root.starred]
    starred = [t for t in e_trees if t.root.starred]
    return (
        len(e_trees) == p.s
        and len(unstarred) == p.l_e
        and len(starred) == p.s - p.l_e
        and all(p.k < t.root.value < p.k + p.s for t in starred)
    )


def check_b_star(f: SmallForest, p: ForestProfile) -> bool:
    o_trees = f.o_trees
    if len(o_trees) != p.l_o or any(t.root.starred for t in o_trees):
        return False
    with_star = [t for t in f.e_trees if _starred_leaves(t)]
    return len(with_star) == p.l_o and all(
        _starred_leaves(t) == [len(t.leaves) - 1] for t in with_star
    )


def check_c_star(f: SmallForest, p: ForestProfile) -> bool:
    plain = [t for t in f.e_trees if not t.has_star()]
    if len(plain) != p.y:
        return False
    o_leaves = _o_tree_leaves(f)
    # a young root is the whole tree and is emitted without a starred label
    return all(
        E(p.k + i, True) in o_leaves for i in range(1, min(p.y, p.s - 1) + 1)
    )


def check_d_star(f: SmallForest, p: ForestProfile) -> bool:
    roots = [
        t for t in f.e_trees if t.root.starred and not _starred_leaves(t)
    ]
    if len(roots) != p.s - p.y - p.l_o:
        return False
    o_leaves = _o_tree_leaves(f)
    for t in roots:
        m = t.root.value - p.k
        if m != p.s - 1 and E(p.k + m + 1, True) not in o_leaves:
            return False
    return True


FOREST_PREDICATES = {
    "labels": check_labels,
    "a*": check_a_star,
    "b*": check_b_star,
    "c*": check_c_star,
    "d*": check_d_star,
}


def failed_predicates(f: SmallForest, p: ForestProfile) -> list[str]:
    return [name for name, check in FOREST_PREDICATES.items() if not check(f, p)]


# -- enumeration ------------------------------------------------------- #


def label_shape(
    shape: PlaneTree, even: Iterable[Label], odd: Iterable[Label]
) -> LabelledTree:
    """Attach labels to ``shape`` in preorder, level by level parity."""
    even_it = iter(even)
    odd_it = iter(odd)

    def walk(node: PlaneTree, level: int) -> LabelledTree:
        label = next(even_it) if level % 2 == 0 else next(odd_it)
        return LabelledTree(label, tuple(walk(c, level + 1) for c in node.children))

    return walk(shape, 0)


def enumerate_labelled_trees(edges: int) -> Iterator[LabelledTree]:
    """Every set-alternating labelling of every plane tree with ``edges``."""
    if edges < 1:
        return
    for shape in enumerate_plane_trees(edges):
        st = tree_stats(shape)
        e_labels = [E(i) for i in range(1, st.even_vertices + 1)]
        o_labels = [O(i) for i in range(1, st.odd_vertices + 1)]
        for even in itertools.permutations(e_labels):
            for odd in itertools.permutations(o_labels):
                yield label_shape(shape, even, odd)
