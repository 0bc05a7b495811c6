"""Tests for exact linear algebra and graded quotients."""

import pytest
from hypothesis import given, strategies as st

from app.services.linalg import (
    GradedQuotient,
    GroupSummand,
    graded_quotient,
    matmul,
    smith_normal_form,
    solve_leftmost,
)
from app.services.polynomials import graded_ring


@pytest.fixture
def x_ring():
    """Integral polynomial ring on one degree-2 class."""
    return graded_ring(("x",), (2,))


class TestSmithNormalForm:
    """Tests for the Smith normal form."""

    def test_diagonal_chain(self):
        """Test the invariant factors of a small matrix."""
        assert smith_normal_form([[2, 4], [6, 8]]).diagonal == [2, 4]

    def test_transforms(self):
        """Test that left * m * right is the diagonal."""
        matrix = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        result = smith_normal_form(matrix)
        product = matmul(matmul(result.left, matrix), result.right)
        for i, row in enumerate(product):
            for j, value in enumerate(row):
                assert value == (result.diagonal[i] if i == j else 0)

    def test_coprime_entries_merge(self):
        """Test diag(2, 3) becomes diag(1, 6) through the extended gcd."""
        matrix = [[2, 0], [0, 3]]
        result = smith_normal_form(matrix)
        assert result.diagonal == [1, 6]
        product = matmul(matmul(result.left, matrix), result.right)
        assert product == [[1, 0], [0, 6]]

    def test_empty_matrix(self):
        """Test a matrix without rows."""
        assert smith_normal_form([], cols=3).diagonal == []

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
    def test_divisibility_chain(self, matrix):
        """Test that nonzero factors divide each other and zeros come last."""
        diagonal = smith_normal_form(matrix).diagonal
        nonzero = [d for d in diagonal if d]
        assert diagonal[:len(nonzero)] == nonzero
        assert all(d > 0 for d in nonzero)
        for a, b in zip(nonzero, nonzero[1:]):
            assert b % a == 0


class TestGradedQuotient:
    """Tests for degreewise quotient groups."""

    def test_torsion_quotient(self, x_ring):
        """Test Z[x]/(3x) has Z/3 in positive degrees."""
        x = x_ring.gen("x")
        quotient = GradedQuotient(x_ring, [3 * x], max_degree=4)
        assert quotient.graded_group().to_dict() == {0: [1, []], 2: [0, [3]], 4: [0, [3]]}

    def test_orders(self, x_ring):
        """Test additive orders and p-local vanishing."""
        x = x_ring.gen("x")
        quotient = GradedQuotient(x_ring, [3 * x], max_degree=4)
        assert quotient.order(x) == 3
        assert quotient.order(x_ring.one) == 0
        assert quotient.is_zero_p_local(x, 2)
        assert not quotient.is_zero_p_local(x, 3)

    def test_truncated_field_quotient(self):
        """Test F_2[x]/(x^3) and its normal forms."""
        ring = graded_ring(("x",), (2,), 2)
        x = ring.gen("x")
        quotient = GradedQuotient(ring, [x**3], max_degree=8)
        assert quotient.graded_group().to_dict() == {0: [1, []], 2: [1, []], 4: [1, []]}
        assert quotient.normal_form(x**2) == x**2
        assert quotient.normal_form(x**3).is_zero
        assert quotient.is_zero(x**4)

    def test_graded_quotient_helper(self):
        """Test the one-call helper on Z[x, y]/(x^2 - 2y)."""
        ring = graded_ring(("x", "y"), (2, 4))
        relation = ring.gen("x") ** 2 - 2 * ring.gen("y")
        group = graded_quotient([("x", 2), ("y", 4)], [relation], max_degree=4)
        assert group[4] == GroupSummand(rank=1)
        assert not group.has_torsion()


class TestSolveLeftmost:
    """Tests for leftmost-pivot solving over F_p."""

    def test_leftmost_solution(self):
        """Test that later dependent columns get zero coefficients."""
        columns = [{0: 1}, {1: 1}, {0: 1, 1: 1}]
        assert solve_leftmost(columns, {0: 1, 1: 1}, 2) == [1, 1, 0]

    def test_inconsistent(self):
        """Test that an unreachable target returns None."""
        assert solve_leftmost([{0: 1}], {1: 1}, 3) is None
