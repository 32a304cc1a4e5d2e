"""Labelled E-trees, the forest maps h and g, and the forest predicates."""

from __future__ import annotations

import pytest

from rnacount.forest import (
    E,
    FOREST_PREDICATES,
    O,
    ForestError,
    ForestProfile,
    Label,
    LabelClass,
    LabelledTree,
    SmallForest,
    SmallTree,
    enumerate_labelled_trees,
    failed_predicates,
    forest_decode,
    forest_encode,
    forest_profile,
    validate_labelled_tree,
)
from rnacount.tree import parse_tree


def node(label: Label, *children: LabelledTree) -> LabelledTree:
    return LabelledTree(label, tuple(children))


@pytest.fixture
def sample_tree() -> LabelledTree:
    """e1[o1[e2[o3]] o2]"""
    return node(E(1), node(O(1), node(E(2), node(O(3)))), node(O(2)))


@pytest.fixture
def sample_forest() -> SmallForest:
    return SmallForest(
        (
            SmallTree(E(2), (O(3),)),
            SmallTree(O(1), (E(3, True),)),
            SmallTree(E(1), (O(4, True),)),
            SmallTree(E(4, True), (O(2),)),
        )
    )


# -- labels ----------------------------------------------------------------- #


class TestLabel:
    def test_order(self):
        assert E(9).key < O(1).key
        assert O(2).key < O(10).key

    def test_str_and_parse(self):
        assert str(E(3, True)) == "e3*"
        assert str(O(2)) == "o2"
        assert Label.parse("o4*") == O(4, True)
        assert Label.parse("e1") == E(1)
        assert Label.parse("e1", starred=True).starred

    @pytest.mark.parametrize("text", ["x1", "e", "o-1", "e1a"])
    def test_parse_malformed(self, text):
        with pytest.raises(ForestError, match="malformed label"):
            Label.parse(text)

    def test_class(self):
        assert E(1).cls is LabelClass.E
        assert O(1).cls is LabelClass.O


# -- labelled trees --------------------------------------------------------- #


class TestLabelledTree:
    def test_shape_and_str(self, sample_tree):
        assert sample_tree.shape() == parse_tree("((()))()")
        assert str(sample_tree) == "e1[o1[e2[o3]] o2]"

    def test_json_round_trip(self, sample_tree):
        data = sample_tree.to_json()
        assert data["label"] == "e1"
        assert data["starred"] is False
        assert LabelledTree.from_json(data) == sample_tree

    def test_from_json_requires_label(self):
        with pytest.raises(ForestError):
            LabelledTree.from_json({"children": []})

    def test_profile(self, sample_tree):
        assert forest_profile(sample_tree) == ForestProfile(
            k=2, b=2, s=3, l_e=2, l_o=1, y=1
        )

    def test_validate_accepts(self, sample_tree):
        validate_labelled_tree(sample_tree)

    def test_validate_needs_an_edge(self):
        with pytest.raises(ForestError, match="at least one edge"):
            validate_labelled_tree(node(E(1)))

    def test_validate_level_classes(self):
        with pytest.raises(ForestError, match="foreign or starred"):
            validate_labelled_tree(node(O(1), node(E(1))))

    def test_validate_starred(self):
        with pytest.raises(ForestError, match="foreign or starred"):
            validate_labelled_tree(node(E(1), node(O(1, True))))

    def test_validate_label_range(self):
        with pytest.raises(ForestError, match="exactly 1..2"):
            validate_labelled_tree(node(E(1), node(O(1)), node(O(1))))


class TestSmallForest:
    def test_canonical_order(self, sample_forest):
        shuffled = SmallForest(tuple(reversed(sample_forest.trees)))
        assert shuffled == sample_forest
        assert [str(t.root) for t in sample_forest.trees] == ["e1", "e2", "e4*", "o1"]

    def test_split_by_class(self, sample_forest):
        assert len(sample_forest.e_trees) == 3
        assert len(sample_forest.o_trees) == 1

    def test_json_round_trip(self, sample_forest):
        assert SmallForest.from_json(sample_forest.to_json()) == sample_forest

    def test_rejects_deep_trees(self):
        deep = node(E(1), node(O(1), node(E(2)))).to_json()
        with pytest.raises(ForestError, match="more than two levels"):
            SmallForest.from_json([deep])

    def test_rejects_non_array(self):
        with pytest.raises(ForestError):
            SmallForest.from_json({"label": "e1"})


# -- h and g ---------------------------------------------------------------- #


class TestEncode:
    def test_example(self, sample_tree, sample_forest):
        assert forest_encode(sample_tree) == sample_forest

    def test_single_edge(self):
        t = node(E(1), node(O(1)))
        assert forest_encode(t) == SmallForest((SmallTree(E(1), (O(1),)),))

    def test_young_root_is_one_small_tree(self):
        t = node(E(1), node(O(2)), node(O(1)), node(O(3)))
        f = forest_encode(t)
        assert f.trees == (SmallTree(E(1), (O(2), O(1), O(3))),)

    def test_predicates_hold(self, sample_tree, sample_forest):
        profile = forest_profile(sample_tree)
        assert failed_predicates(sample_forest, profile) == []

    def test_rejects_invalid_tree(self):
        with pytest.raises(ForestError):
            forest_encode(node(E(1)))


class TestDecode:
    def test_example(self, sample_tree, sample_forest):
        assert forest_decode(sample_forest) == sample_tree

    def test_empty(self):
        with pytest.raises(ForestError, match="empty forest"):
            forest_decode(SmallForest())

    def test_every_tree_starred(self):
        f = SmallForest(
            (
                SmallTree(E(2, True), (O(1),)),
                SmallTree(O(1), (E(2, True),)),
            )
        )
        with pytest.raises(ForestError, match="starred label"):
            forest_decode(f)

    def test_no_matching_star(self):
        f = SmallForest((SmallTree(E(1), (O(1),)), SmallTree(E(2), (O(2),))))
        with pytest.raises(ForestError, match="no starred E-label"):
            forest_decode(f)


class TestPredicates:
    def test_broken_forest_is_reported(self, sample_tree, sample_forest):
        profile = forest_profile(sample_tree)
        # swap the starred leaf of e1 for a plain one
        broken = SmallForest(
            tuple(
                SmallTree(E(1), (O(4),)) if t.root == E(1) else t
                for t in sample_forest.trees
            )
        )
        failed = failed_predicates(broken, profile)
        assert "labels" in failed
        assert "b*" in failed

    @pytest.mark.parametrize(
        "t",
        [
            node(E(1), node(O(1))),
            node(E(1), node(O(2)), node(O(1)), node(O(3))),
        ],
        ids=["e1[o1]", "e1[o2 o1 o3]"],
    )
    def test_young_root_passes(self, t):
        profile = forest_profile(t)
        assert (profile.s, profile.y) == (1, 1)
        assert failed_predicates(forest_encode(t), profile) == []

    def test_names(self):
        assert list(FOREST_PREDICATES) == ["labels", "a*", "b*", "c*", "d*"]


# -- exhaustive ------------------------------------------------------------- #


class TestEnumerateLabelled:
    @pytest.mark.parametrize("edges,count", [(0, 0), (1, 1), (2, 4), (3, 24)])
    def test_counts(self, edges, count):
        assert sum(1 for _ in enumerate_labelled_trees(edges)) == count


def _check_forests(limit: int) -> None:
    for edges in range(1, limit + 1):
        for t in enumerate_labelled_trees(edges):
            f = forest_encode(t)
            p = forest_profile(t)
            assert forest_decode(f) == t
            assert forest_encode(forest_decode(f)) == f
            assert len(f.e_trees) == p.s
            assert len(f.o_trees) == p.l_o
            assert failed_predicates(f, p) == [], f"{t} -> {f}"


def test_forest_round_trip_small():
    _check_forests(4)


@pytest.mark.slow
def test_forest_round_trip_exhaustive():
    _check_forests(6)
