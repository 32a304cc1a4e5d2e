"""Verification suites, reports and the brute-force oracle."""

from __future__ import annotations

import pytest

from rnacount.counting import HelixDistribution
from rnacount.verify import (
    MAX_VERIFY_SIZE,
    SUITES,
    SuiteReport,
    VerifyError,
    _refines,
    cells,
    oracle_cell,
    run_suites,
)


class TestSuiteReport:
    def test_records_first_counterexample(self):
        r = SuiteReport("demo")
        r.equal(1, 1, "one")
        r.equal(2, 3, "first")
        r.equal(4, 5, "second")
        assert r.checks == 3
        assert r.failures == 2
        assert not r.passed
        assert r.counterexample == "first: got 2, expected 3"

    def test_describe_is_lazy(self):
        r = SuiteReport("demo")

        def boom() -> str:
            raise AssertionError("describe called for a passing check")

        assert r.check(True, boom)
        assert r.passed

    def test_summary(self):
        r = SuiteReport("demo")
        r.equal(1, 1, "one")
        assert r.summary() == "demo: ok (1/1 checks passed)"
        r.equal(1, 2, "two")
        assert r.summary() == (
            "demo: FAIL (1/2 checks passed)\n  counterexample: two: got 1, expected 2"
        )


class TestOracle:
    def test_cells_are_ordered_by_size(self):
        assert list(cells(3)) == [(0, 1), (0, 2), (0, 3), (1, 1)]

    def test_two_arcs_three_bases(self):
        cell = oracle_cell(2, 3)
        assert cell.total == 20
        assert cell.helices(3, 1) == 9
        assert cell.helices(1, 2) == 1
        assert cell.at_most_stack(1) == 2
        assert cell.at_most_loop(2) == 10
        assert cell.by_helix_dist[HelixDistribution.of({1: 3})] == 9
        assert cell.sum_helices == 48


@pytest.mark.parametrize(
    "stacks,helices,ok",
    [
        ((3,), (2, 1), True),
        ((3, 1), (2, 1, 1), True),
        ((1, 1, 1), (1, 1, 1), True),
        ((3, 1), (1, 2, 1), True),
        ((3, 1), (2, 2), False),
        ((2, 2), (1, 3), False),
        ((3,), (2,), False),
        ((2,), (2, 1), False),
    ],
)
def test_helices_refine_stacks(stacks, helices, ok):
    assert _refines(stacks, helices) is ok


class TestRunSuites:
    def test_tables(self):
        (report,) = run_suites(["tables"])
        assert report.name == "tables"
        assert report.passed, report.summary()
        assert report.checks == 2 + 45 + 18

    @pytest.mark.parametrize("name", list(SUITES))
    def test_each_suite_passes_small(self, name):
        (report,) = run_suites([name], max_size=5)
        assert report.passed, report.summary()
        assert report.checks > 0

    def test_parallel_keeps_requested_order(self):
        names = ["tables", "trees", "structures", "probabilities"]
        reports = run_suites(names, max_size=4, jobs=3)
        assert [r.name for r in reports] == names
        assert all(r.passed for r in reports)

    def test_unknown_suite(self):
        with pytest.raises(VerifyError, match="unknown suite"):
            run_suites(["tables", "nope"])

    @pytest.mark.parametrize("size", [0, MAX_VERIFY_SIZE + 1])
    def test_size_bounds(self, size):
        with pytest.raises(VerifyError, match="max size"):
            run_suites(["tables"], max_size=size)

    def test_jobs_positive(self):
        with pytest.raises(VerifyError, match="jobs"):
            run_suites(["tables"], jobs=0)


@pytest.mark.slow
def test_all_suites_pass_at_default_bound():
    reports = run_suites(max_size=12, jobs=4)
    failed = [r.summary() for r in reports if not r.passed]
    assert failed == []
