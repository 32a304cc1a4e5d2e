"""Closed-form counts, distributions, probabilities and the helix tables."""

from __future__ import annotations

from fractions import Fraction

import pytest

from rnacount.counting import (
    TABLE_COLUMNS,
    CountingError,
    HelixDistribution,
    LoopDistribution,
    UnsupportedParameterError,
    binomial,
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
    helix_distributions,
    helix_table,
    loop_distributions,
    mean_helix_size,
    mean_partial_stack_length,
    narayana,
    narayana_sum_identity_check,
    parse_distribution,
)
from rnacount.verify import TABLE_1, TABLE_2, cells, oracle_cell


def hd(text: str) -> HelixDistribution:
    return parse_distribution(text, HelixDistribution)


def ld(text: str) -> LoopDistribution:
    return parse_distribution(text, LoopDistribution)


# -- arithmetic and distributions ------------------------------------------- #


class TestBinomial:
    @pytest.mark.parametrize(
        "n,k,want", [(5, 2, 10), (3, 5, 0), (-1, 0, 0), (4, -1, 0), (0, 0, 1)]
    )
    def test_values(self, n, k, want):
        assert binomial(n, k) == want


class TestDistribution:
    def test_canonical(self):
        d = hd("2:2,1:1,3:0")
        assert d.parts == ((1, 1), (2, 2))
        assert str(d) == "1:1,2:2"

    def test_bare_sizes_count_once(self):
        assert hd("2,2,1") == hd("1:1,2:2")

    def test_properties(self):
        d = hd("1:1,2:2")
        assert d.s == d.count == 3
        assert d.total == 5
        assert d.multiplicity(2) == 2
        assert d.multiplicity(7) == 0
        assert d.denominator() == 2

    def test_loop_l_o(self):
        assert ld("1:2,3:1").l_o == 1

    @pytest.mark.parametrize("text", ["", "a:1", "2:x", "0:1", "2:-1"])
    def test_malformed(self, text):
        with pytest.raises(CountingError):
            hd(text)

    def test_helix_distributions(self):
        assert [str(d) for d in helix_distributions(2)] == ["3:1", "1:1,2:1", "1:3"]
        assert list(helix_distributions(2, s=2)) == [hd("1:1,2:1")]
        assert list(helix_distributions(2, sigma=2)) == [hd("3:1")]

    def test_loop_distributions(self):
        assert sorted(str(d) for d in loop_distributions(2, 3)) == [
            "1:1,2:2",
            "1:2,3:1",
        ]


class TestFormatResult:
    def test_int_and_fraction(self):
        assert format_result(175) == "175"
        assert format_result(Fraction(1, 3)) == "1/3"
        assert format_result(Fraction(4, 2)) == "2"


# -- totals and partial stacks ---------------------------------------------- #


class TestNarayana:
    @pytest.mark.parametrize(
        "b,k,want", [(0, 1, 1), (0, 5, 1), (1, 1, 1), (2, 3, 20), (3, 4, 175)]
    )
    def test_values(self, b, k, want):
        assert narayana(b, k) == want

    def test_undefined(self):
        with pytest.raises(CountingError):
            narayana(0, 0)
        with pytest.raises(CountingError):
            narayana(-1, 2)

    def test_sum_identity(self):
        assert all(
            narayana_sum_identity_check(b, k) for b in range(12) for k in range(1, 12)
        )


class TestPartialStacks:
    @pytest.mark.parametrize("l,want", [(1, 6), (2, 12), (3, 2), (4, 0), (0, 0)])
    def test_two_arcs_three_bases(self, l, want):
        assert count_by_partial_stacks(2, 3, l) == want

    def test_expected(self):
        assert expected_partial_stacks(2, 3) == Fraction(9, 5)
        assert expected_partial_stacks(0, 4) == 1

    def test_mean_length(self):
        assert mean_partial_stack_length(2, 3) == Fraction(5, 3)

    def test_k_zero_rejected(self):
        with pytest.raises(CountingError):
            count_by_partial_stacks(2, 0, 1)


class TestMaxima:
    @pytest.mark.parametrize(
        "b,k,h,want", [(1, 2, 1, 1), (2, 3, 1, 2), (2, 3, 2, 14), (2, 3, 3, 20)]
    )
    def test_max_partial_stack(self, b, k, h, want):
        assert count_max_partial_stack(b, k, h) == want

    @pytest.mark.parametrize(
        "b,k,l,want", [(2, 3, 2, 10), (2, 3, 3, 20), (2, 3, 5, 20), (4, 1, 1, 1)]
    )
    def test_max_loop_size(self, b, k, l, want):
        assert count_max_loop_size(b, k, l) == want

    @pytest.mark.parametrize(
        "b,k,h,l,want",
        [(2, 3, 3, 5, 20), (2, 3, 1, 5, 2), (2, 3, 3, 2, 10), (0, 3, 1, 3, 1)],
    )
    def test_max_both(self, b, k, h, l, want):
        assert count_max_both(b, k, h, l) == want

    def test_invalid_caps(self):
        with pytest.raises(CountingError):
            count_max_partial_stack(2, 3, 0)
        with pytest.raises(CountingError):
            count_max_loop_size(2, 3, 0)
        with pytest.raises(CountingError):
            count_max_both(2, 3, 1, 0)


# -- helices and loops ------------------------------------------------------ #


class TestJoint:
    @pytest.mark.parametrize("l_e,want", [(1, 1), (2, 4), (3, 1)])
    def test_count_joint(self, l_e, want):
        assert count_joint(2, 3, hd("1:3"), ld("1:1,2:2"), l_e) == want

    def test_marginal(self):
        assert count_joint_marginal(2, 3, hd("1:3"), ld("1:1,2:2")) == 6
        assert count_joint_marginal(2, 3, hd("1:3"), ld("1:2,3:1")) == 3

    def test_k_one_is_unsupported(self):
        with pytest.raises(UnsupportedParameterError, match="k > 1"):
            count_joint(2, 1, hd("1:3"), ld("1:3"), 1)
        with pytest.raises(UnsupportedParameterError):
            count_by_num_helices(2, 1, 1)

    def test_distribution_must_fit(self):
        with pytest.raises(CountingError, match="expected b\\+1"):
            count_joint_marginal(2, 3, hd("1:2"), ld("1:1,2:2"))
        with pytest.raises(CountingError, match="loops"):
            count_joint_marginal(2, 3, hd("1:3"), ld("1:1,2:1"))

    def test_l_e_positive(self):
        with pytest.raises(CountingError):
            count_joint(2, 3, hd("1:3"), ld("1:1,2:2"), 0)


class TestHelices:
    @pytest.mark.parametrize("text,want", [("1:3", 9), ("1:1,2:1", 10), ("3:1", 1)])
    def test_by_distribution(self, text, want):
        assert count_by_helix_distribution(2, 3, hd(text)) == want

    @pytest.mark.parametrize(
        "b,k,s,sigma,want",
        [(2, 3, 3, 1, 9), (3, 4, 3, 1, 93), (3, 3, 2, 2, 5), (4, 5, 5, 1, 375)],
    )
    def test_by_number(self, b, k, s, sigma, want):
        assert count_by_num_helices(b, k, s, sigma) == want

    def test_by_loop_distribution(self):
        assert count_by_loop_distribution(2, 3, ld("1:1,2:2")) == 10
        assert count_by_loop_distribution(2, 3, ld("1:2,3:1")) == 10

    def test_expected_and_mean(self):
        assert expected_helices(2, 3) == Fraction(12, 5)
        assert mean_helix_size(2, 3) == Fraction(5, 4)

    def test_single_base_is_one_helix(self):
        assert expected_helices(4, 1) == 1
        assert mean_helix_size(4, 1) == 5


class TestProbability:
    @pytest.mark.parametrize(
        "b,k,s,sigma,text,want",
        [
            (2, 3, 3, 1, "1:3", Fraction(1)),
            (3, 4, 2, 1, "2:2", Fraction(1, 3)),
            (3, 4, 2, 1, "1:1,3:1", Fraction(2, 3)),
        ],
    )
    def test_values(self, b, k, s, sigma, text, want):
        assert helix_distribution_probability(b, k, s, sigma, hd(text)) == want

    def test_independent_of_k(self):
        values = {
            helix_distribution_probability(3, k, 2, 1, hd("2:2")) for k in range(2, 9)
        }
        assert values == {Fraction(1, 3)}

    def test_sums_to_one(self):
        for sigma in (1, 2):
            for s in range(1, 5):
                dists = list(helix_distributions(6, s, sigma))
                if dists:
                    total = sum(
                        helix_distribution_probability(6, 3, s, sigma, d) for d in dists
                    )
                    assert total == 1

    def test_wrong_helix_count(self):
        with pytest.raises(CountingError, match="expected 3"):
            helix_distribution_probability(3, 4, 3, 1, hd("2:2"))

    def test_helix_below_sigma(self):
        with pytest.raises(CountingError, match="smaller than 2"):
            helix_distribution_probability(3, 4, 2, 2, hd("1:1,3:1"))


# -- tables ----------------------------------------------------------------- #


class TestHelixTable:
    @pytest.mark.parametrize("table_id,golden", [(1, TABLE_1), (2, TABLE_2)])
    def test_matches_published_values(self, table_id, golden):
        got = {(c.s, c.b, c.k): c.count for c in helix_table(table_id)}
        assert got == golden

    def test_layout(self):
        cells_ = helix_table(2)
        assert len(cells_) == 2 * len(TABLE_COLUMNS)
        assert (cells_[0].s, cells_[0].b, cells_[0].k) == (1, 2, 3)

    def test_spot_values(self):
        assert TABLE_1[(4, 3, 5)] == 219
        assert TABLE_2[(2, 4, 3)] == 10

    def test_unknown_table(self):
        with pytest.raises(CountingError, match="unknown table"):
            helix_table(3)


# -- against brute force ---------------------------------------------------- #


def _check_against_oracle(max_size: int) -> None:
    for b, k in cells(max_size):
        cell = oracle_cell(b, k)
        assert narayana(b, k) == cell.total
        for l in range(1, b + 2):
            assert count_by_partial_stacks(b, k, l) == cell.by_partial_stacks[l]
            assert count_max_partial_stack(b, k, l) == cell.at_most_stack(l)
        for l in range(1, b + k + 1):
            assert count_max_loop_size(b, k, l) == cell.at_most_loop(l)
        if k == 1:
            continue
        for d in helix_distributions(b):
            assert count_by_helix_distribution(b, k, d) == cell.by_helix_dist[d]
        for d in loop_distributions(b, k):
            assert count_by_loop_distribution(b, k, d) == cell.by_loop_dist[d]
        for sigma in (1, 2):
            for s in range(1, b + 2):
                assert count_by_num_helices(b, k, s, sigma) == cell.helices(s, sigma)


def test_formulas_match_enumeration_small():
    _check_against_oracle(9)


@pytest.mark.slow
def test_formulas_match_enumeration_exhaustive():
    _check_against_oracle(14)
