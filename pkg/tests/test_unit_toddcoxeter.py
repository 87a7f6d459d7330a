"""
Unit Tests for coset enumeration.
"""

import pytest

from src.ac_census.error_handling import PreconditionError
from src.ac_census.presentation import parse_presentation
from src.ac_census.toddcoxeter import (
    CosetTable,
    EnumerationOutcome,
    enumerate_cosets,
    run_enumeration,
)


def p(line):
    return parse_presentation(line)


class TestEnumerateCosets:
    """Group orders of small presentations."""

    def test_order_120(self, order_120):
        result = enumerate_cosets(order_120, 10_000)
        assert result.is_finite
        assert result.order == 120
        assert str(result) == "120"

    def test_standard(self, standard):
        assert enumerate_cosets(standard).order == 1

    @pytest.mark.parametrize("line,order", [
        ("xxx y", 3),
        ("xx yyy", 6),
        ("xx yy", 4),
        ("x yyyyy", 5),
    ])
    def test_cyclic_and_abelian(self, line, order):
        assert enumerate_cosets(p(line)).order == order

    def test_trivial_groups(self, ak3, ak2):
        assert enumerate_cosets(ak3).order == 1
        assert enumerate_cosets(ak2).order == 1

    def test_infinite_group_exceeds(self):
        result = enumerate_cosets(p("xx 1"), 100)
        assert result.outcome == EnumerationOutcome.EXCEEDED
        assert result.order is None
        assert str(result) == "exceeded(100)"

    def test_budget_smaller_than_order(self, order_120):
        result = enumerate_cosets(order_120, 50)
        assert not result.is_finite
        assert result.budget == 50

    def test_budget_must_be_positive(self, standard):
        with pytest.raises(PreconditionError):
            enumerate_cosets(standard, 0)

    def test_result_records_work(self, order_120):
        result = enumerate_cosets(order_120, 10_000)
        assert result.cosets_defined >= 120
        assert result.wall_time >= 0.0


class TestCosetTable:
    """The closed table itself."""

    def test_closed_table_is_a_permutation_representation(self, order_120):
        table = run_enumeration(order_120, 10_000)
        assert table is not None
        assert table.live == 120
        assert table.is_complete()
        assert table.columns_are_permutations()
        assert len(table.compressed()) == 120

    def test_trivial_table(self, standard):
        table = run_enumeration(standard)
        assert table.live == 1
        assert table.compressed() == [[0, 0, 0, 0]]

    def test_exceeded_returns_none(self):
        assert run_enumeration(p("1 1"), 20) is None

    def test_fresh_table(self):
        table = CosetTable(2, 10)
        assert table.live == 1
        assert table.size == 1
        assert table.live_cosets() == [1]
        assert not table.is_complete()

    def test_zero_budget(self):
        with pytest.raises(PreconditionError):
            CosetTable(2, 0)
