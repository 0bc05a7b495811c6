"""Tests for graded polynomial arithmetic."""

import pytest
from hypothesis import given, strategies as st

from app.services.polynomials import (
    ArithmeticOp,
    PolynomialError,
    elementary_symmetric,
    exact_divide,
    graded_ring,
    poly_arithmetic,
    substitute,
)


@pytest.fixture
def ring():
    """Integral ring on x (degree 2) and y (degree 4)."""
    return graded_ring(("x", "y"), (2, 4))


@pytest.fixture
def linear_ring():
    """Integral ring on three degree-2 variables."""
    return graded_ring(("a", "b", "c"), (2, 2, 2))


coefficients = st.integers(min_value=-20, max_value=20)


class TestGradedRing:
    """Tests for ring construction and monomial bookkeeping."""

    def test_rings_are_cached(self):
        """Test that equal signatures give the same ring object."""
        assert graded_ring(("x",), (2,)) is graded_ring(("x",), (2,))

    def test_duplicate_names_rejected(self):
        """Test that repeated variable names raise."""
        with pytest.raises(PolynomialError):
            graded_ring(("x", "x"), (2, 2))

    def test_nonpositive_degree_rejected(self):
        """Test that degree zero variables raise."""
        with pytest.raises(PolynomialError):
            graded_ring(("x",), (0,))

    def test_monomials_by_weighted_degree(self, ring):
        """Test monomial enumeration respects variable weights."""
        assert ring.monomials(4) == [(2, 0), (0, 1)]
        assert ring.monomials(6) == [(3, 0), (1, 1)]
        assert ring.monomials(3) == []

    def test_unknown_variable(self, ring):
        """Test that an unknown name raises."""
        with pytest.raises(PolynomialError):
            ring.gen("z")


class TestPolynomial:
    """Tests for arithmetic, degrees and rendering."""

    def test_text_order(self, ring):
        """Test that terms render largest monomial first."""
        x, y = ring.gen("x"), ring.gen("y")
        assert (y + x**2).to_text() == "x^2 + y"
        assert (2 * x * y - 3 * x**3).to_text() == "-3*x^3 + 2*x*y"

    def test_zero_text(self, ring):
        """Test the zero polynomial renders as 0."""
        assert ring.zero.to_text() == "0"

    def test_degree(self, ring):
        """Test homogeneous degree computation."""
        x, y = ring.gen("x"), ring.gen("y")
        assert (x**2 + y).degree() == 4
        assert ring.zero.degree() is None

    def test_inhomogeneous_degree_raises(self, ring):
        """Test that mixed degrees raise."""
        x, y = ring.gen("x"), ring.gen("y")
        with pytest.raises(PolynomialError):
            (x + y).degree()

    def test_homogeneous_part(self, ring):
        """Test extracting one degree."""
        x, y = ring.gen("x"), ring.gen("y")
        assert (x + x**2 + y).homogeneous_part(4) == x**2 + y

    def test_modular_reduction(self, ring):
        """Test coefficients wrap in a prime field."""
        x, y = ring.gen("x"), ring.gen("y")
        reduced = ((x + y) ** 3).reduce(3)
        mod3 = ring.with_modulus(3)
        assert reduced == mod3.gen("x") ** 3 + mod3.gen("y") ** 3

    def test_ring_mismatch(self, ring, linear_ring):
        """Test that mixing rings raises."""
        with pytest.raises(PolynomialError):
            ring.gen("x") + linear_ring.gen("a")

    def test_convert_by_name(self, ring):
        """Test moving a polynomial into a larger ring."""
        small = graded_ring(("y",), (4,))
        assert ring.convert(small.gen("y") * 2) == 2 * ring.gen("y")

    def test_variables(self, ring):
        """Test the list of variables in use."""
        assert (ring.gen("y") ** 2).variables() == ["y"]

    def test_poly_arithmetic(self, ring):
        """Test the dispatching helper."""
        x = ring.gen("x")
        assert poly_arithmetic(x, x, ArithmeticOp.MUL) == x**2
        assert poly_arithmetic(x, x, "sub").is_zero

    @given(coefficients, coefficients, coefficients)
    def test_distributive(self, a, b, c):
        """Test distributivity on random linear forms."""
        ring = graded_ring(("a", "b", "c"), (2, 2, 2))
        u = a * ring.gen("a") + b * ring.gen("b")
        v = c * ring.gen("c") + ring.gen("a")
        w = ring.gen("b") - c * ring.gen("a")
        assert u * (v + w) == u * v + u * w


class TestHelpers:
    """Tests for substitution, division and symmetric functions."""

    def test_substitute(self, ring):
        """Test the ring map extending an assignment."""
        x, y = ring.gen("x"), ring.gen("y")
        assert substitute(y * x, {"y": x**2}) == x**3

    def test_substitute_integer(self, ring):
        """Test integer images."""
        x, y = ring.gen("x"), ring.gen("y")
        assert substitute(x**2 + y, {"x": 0}) == y

    def test_exact_divide(self, ring):
        """Test dividing by a variable power."""
        x, y = ring.gen("x"), ring.gen("y")
        assert exact_divide(x**3 * y + x**2, "x", 2) == x * y + 1

    def test_inexact_divide(self, ring):
        """Test that a non-divisible term raises."""
        x, y = ring.gen("x"), ring.gen("y")
        with pytest.raises(PolynomialError):
            exact_divide(x + y, "x")

    def test_elementary_symmetric(self, linear_ring):
        """Test e_2 of three variables."""
        a, b, c = (linear_ring.gen(n) for n in ("a", "b", "c"))
        assert elementary_symmetric([a, b, c], 2) == a * b + a * c + b * c

    def test_elementary_symmetric_range(self, linear_ring):
        """Test that r beyond the number of forms raises."""
        with pytest.raises(PolynomialError):
            elementary_symmetric([linear_ring.gen("a")], 2)
