"""Schmitt-Waterman and Chen bijections, and the composite tree map."""

from __future__ import annotations

import pytest

from rnacount.bijection import (
    BijectionError,
    chen_forward,
    chen_inverse,
    composite_tree_map,
    composite_tree_map_inverse,
    sw_forward,
    sw_inverse,
)
from rnacount.structure import (
    compute_stats,
    enumerate_structures,
    parse_dot_bracket,
    to_dot_bracket,
)
from rnacount.tree import (
    LEAF,
    enumerate_plane_trees,
    parse_tree,
    serialize_tree,
    tree_stats,
)


def _sw(text: str) -> str:
    return serialize_tree(sw_forward(parse_dot_bracket(text)))


def _chen(text: str) -> str:
    return serialize_tree(chen_forward(parse_dot_bracket(text)))


def _structures(limit: int):
    for n in range(1, limit + 1):
        for b in range((n - 1) // 2 + 1):
            yield from enumerate_structures(b, n - 2 * b)


class TestSchmittWaterman:
    @pytest.mark.parametrize(
        "text,tree",
        [
            ("(.)", "(())"),
            ("...", "()()()"),
            ("((...))", "((()()()))"),
            (".(.).", "()(())()"),
        ],
    )
    def test_forward(self, text, tree):
        assert _sw(text) == tree

    def test_inverse(self):
        assert to_dot_bracket(sw_inverse(parse_tree("(())"))) == "(.)"

    def test_inverse_rejects_single_node(self):
        with pytest.raises(BijectionError):
            sw_inverse(LEAF)

    def test_leaves_are_bases(self):
        t = sw_forward(parse_dot_bracket("(.).(..)"))
        assert t.leaves() == 4
        assert t.edges == 6


class TestChen:
    @pytest.mark.parametrize(
        "text,tree",
        [
            ("(.)", "()()"),
            ("...", "(()())"),
            ("((.))", "()()()"),
            ("((...))", "()()(()())"),
        ],
    )
    def test_forward(self, text, tree):
        assert _chen(text) == tree

    @pytest.mark.parametrize(
        "tree,text",
        [
            ("()()", "(.)"),
            ("()()()()", "(((.)))"),
            ("(()())", "..."),
            ("()()(()())", "((...))"),
        ],
    )
    def test_inverse(self, tree, text):
        assert to_dot_bracket(chen_inverse(parse_tree(tree))) == text

    def test_single_node_maps_to_single_base(self):
        assert to_dot_bracket(chen_inverse(LEAF)) == "."

    def test_statistics_carried_to_tree(self):
        s = parse_dot_bracket("((.).)")
        st, ts = compute_stats(s), tree_stats(chen_forward(s))
        assert sorted(ts.eblock_sizes) == sorted(st.helix_sizes) == [1, 2]
        assert ts.even_vertices == s.k
        assert ts.odd_vertices == s.b + 1


class TestComposite:
    def test_rejects_single_node(self):
        with pytest.raises(BijectionError):
            composite_tree_map(LEAF)

    def test_example(self):
        t = parse_tree("()()")
        assert serialize_tree(composite_tree_map(t)) == "(())"
        assert composite_tree_map_inverse(parse_tree("(())")) == t


def _check_structures(limit: int) -> None:
    sw_images: set[str] = set()
    chen_images: set[str] = set()
    total = 0
    for s in _structures(limit):
        total += 1
        t = sw_forward(s)
        c = chen_forward(s)
        assert sw_inverse(t) == s
        assert chen_inverse(c) == s
        assert t.edges == c.edges == s.b + s.k
        sw_images.add(serialize_tree(t))
        chen_images.add(serialize_tree(c))

        st, ts = compute_stats(s), tree_stats(c)
        assert sorted(d for d in ts.even_outdegrees if d) == sorted(
            st.partial_stack_lengths
        )
        assert sorted(d + 1 for d in ts.odd_outdegrees) == sorted(st.loop_sizes)
        assert sorted(ts.eblock_sizes) == sorted(st.helix_sizes)
    assert len(sw_images) == len(chen_images) == total


def _check_trees(limit: int) -> None:
    for edges in range(1, limit + 1):
        for t in enumerate_plane_trees(edges):
            assert sw_forward(sw_inverse(t)) == t
            assert chen_forward(chen_inverse(t)) == t
            image = composite_tree_map(t)
            assert image.edges == edges
            assert composite_tree_map_inverse(image) == t


def test_round_trips_small():
    _check_structures(9)
    _check_trees(7)


@pytest.mark.slow
def test_round_trips_exhaustive():
    _check_structures(12)
    _check_trees(9)
