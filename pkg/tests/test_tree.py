"""Plane trees: balanced-parentheses encoding, level statistics, E-blocks."""

from __future__ import annotations

import math
from collections import Counter

import pytest

from rnacount.counting import count_by_partial_stacks
from rnacount.tree import (
    LEAF,
    PlaneTree,
    TreeError,
    eblocks,
    enumerate_plane_trees,
    parse_tree,
    serialize_tree,
    tree_of,
    tree_stats,
)


class TestEncoding:
    def test_single_node_is_empty_string(self):
        assert serialize_tree(LEAF) == ""
        assert parse_tree("") == LEAF

    def test_star_and_path(self):
        assert serialize_tree(tree_of(LEAF, LEAF)) == "()()"
        assert serialize_tree(tree_of(tree_of(LEAF))) == "(())"

    def test_parse_ignores_whitespace(self):
        assert parse_tree("( ) (( ))") == tree_of(LEAF, tree_of(LEAF))

    @pytest.mark.parametrize("text", [")", "((", "(a)", "())("])
    def test_malformed(self, text):
        with pytest.raises(TreeError):
            parse_tree(text)

    def test_json(self):
        t = tree_of(LEAF, tree_of(LEAF))
        assert t.to_json() == [[], [[]]]
        assert PlaneTree.from_json([[], [[]]]) == t

    def test_json_rejects_non_lists(self):
        with pytest.raises(TreeError, match="must be a list"):
            PlaneTree.from_json([[], 3])

    def test_sizes(self):
        t = parse_tree("()(()())")
        assert t.edges == 4
        assert t.leaves() == 3
        assert str(t) == "()(()())"


class TestEblocks:
    def test_leaves_then_internal(self):
        children = parse_tree("()()(())()").children
        assert eblocks(children) == [[0, 1, 2], [3]]

    def test_adjacent_internal_children(self):
        children = parse_tree("(())(())").children
        assert eblocks(children) == [[0], [1]]

    def test_only_leaves(self):
        assert eblocks(parse_tree("()()()").children) == [[0, 1, 2]]

    def test_empty(self):
        assert eblocks(()) == []


class TestTreeStats:
    def test_single_node(self):
        st = tree_stats(LEAF)
        assert st.edges == 0
        assert st.even_vertices == 1
        assert st.odd_vertices == 0
        assert st.eblock_sizes == ()
        assert st.young == 0

    def test_young_root(self):
        st = tree_stats(parse_tree("()()"))
        assert st.eblock_sizes == (2,)
        assert st.young == 1
        assert st.even_rightmost_leaf == 1

    def test_mixed_root(self):
        st = tree_stats(parse_tree("()(())"))
        assert st.even_vertices == 2
        assert st.odd_vertices == 2
        assert st.eblock_sizes == (2,)
        assert st.odd_internal == 1
        assert st.even_internal == 1
        assert st.young == 0
        assert st.even_rightmost_leaf == 0

    def test_outdegrees_in_preorder(self):
        st = tree_stats(parse_tree("(()())()"))
        assert st.even_outdegrees == (2, 0, 0)
        assert st.odd_outdegrees == (2, 0)

    def test_to_dict(self):
        d = tree_stats(parse_tree("()()")).to_dict()
        assert d["eblocks"] == [2]
        assert d["edges"] == 2


class TestEnumerate:
    @pytest.mark.parametrize("edges", range(8))
    def test_catalan_counts(self, edges):
        trees = [serialize_tree(t) for t in enumerate_plane_trees(edges)]
        assert len(trees) == math.comb(2 * edges, edges) // (edges + 1)
        assert len(set(trees)) == len(trees)

    def test_order(self):
        assert [str(t) for t in enumerate_plane_trees(2)] == ["(())", "()()"]

    def test_negative(self):
        with pytest.raises(TreeError):
            list(enumerate_plane_trees(-1))

    def test_level_split_counts(self):
        # 5 edges, 3 even and 3 odd vertices
        count = sum(
            1
            for t in enumerate_plane_trees(5)
            if tree_stats(t).even_vertices == 3
        )
        assert count == 20


def _check_trees(limit: int) -> None:
    for edges in range(1, limit + 1):
        grouped: Counter[tuple[int, int]] = Counter()
        for t in enumerate_plane_trees(edges):
            st = tree_stats(t)
            assert parse_tree(serialize_tree(t)) == t
            assert st.even_vertices + st.odd_vertices == edges + 1
            assert sum(st.eblock_sizes) == st.odd_vertices
            assert len(st.eblock_sizes) == st.odd_internal + st.even_rightmost_leaf
            grouped[(st.even_vertices, st.even_internal)] += 1
        for (k, l), count in grouped.items():
            assert count_by_partial_stacks(edges - k, k, l) == count


def test_tree_statistics_small():
    _check_trees(7)


@pytest.mark.slow
def test_tree_statistics_exhaustive():
    _check_trees(10)
