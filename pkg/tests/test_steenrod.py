"""Tests for Steenrod squares on chern classes and on the classes zeta."""

import pytest
from hypothesis import given, strategies as st

from app.services.flag import symbol_ring
from app.services.root_data import GroupSpec
from app.services.steenrod import (
    SteenrodError,
    check_squares,
    square_degree,
    stated_squares,
    steenrod_square,
    wu_square,
)


class TestWuFormula:
    """Tests for Sq^{2k} c_m."""

    def test_sq2_c2(self):
        """Test Sq^2 c2 = c1*c2 + c3."""
        assert wu_square(2, 1).to_text() == "c1*c2 + c3"

    def test_beyond_degree(self):
        """Test Sq^{2k} c_m = 0 for k > m."""
        assert wu_square(2, 3).is_zero

    @given(st.integers(min_value=1, max_value=6))
    def test_top_square(self, m):
        """Test Sq^{2m} c_m = c_m^2."""
        result = wu_square(m, m)
        assert result == result.ring.gen(f"c{m}") ** 2

    def test_invalid_index(self):
        """Test c_0 has no squares."""
        with pytest.raises(SteenrodError):
            wu_square(0, 1)


class TestSquareOnPolynomials:
    """Tests for the Cartan formula on the symbol ring."""

    def test_weight_square(self):
        """Test Sq^2 w = w^2 on a degree-2 class."""
        spec = GroupSpec.parse("PSU", 4)
        ring = symbol_ring(spec, 2)
        assert steenrod_square(ring.gen("w1"), 2, spec) == ring.gen("w1") ** 2

    def test_odd_square_rejected(self):
        """Test Sq^1 is not an even square."""
        spec = GroupSpec.parse("PSU", 4)
        with pytest.raises(SteenrodError):
            steenrod_square(symbol_ring(spec, 2).gen("c2"), 1, spec)

    def test_integral_rejected(self):
        """Test squares need mod 2 coefficients."""
        spec = GroupSpec.parse("PSU", 4)
        with pytest.raises(SteenrodError):
            steenrod_square(symbol_ring(spec).gen("c2"), 2, spec)


class TestStatedSquares:
    """Tests for the known squares of zeta classes."""

    def test_su8(self):
        """Test Sq^2 zeta3 = zeta5 is the only square for PSU(8)."""
        assert stated_squares(GroupSpec.parse("PSU", 8)) == {2: 3}

    def test_su_odd_part(self):
        """Test no squares when h(G) = 2."""
        assert stated_squares(GroupSpec.parse("PSU", 6)) == {}
        assert check_squares(GroupSpec.parse("PSU", 6)) == []

    def test_sp4(self):
        """Test Sq^4 zeta7 = zeta11 for PSp(4)."""
        assert stated_squares(GroupSpec.parse("PSp", 4)) == {4: 6}
        assert square_degree(GroupSpec.parse("PSp", 4), 4) == 4

    def test_e7_table(self):
        """Test the E7 entries include the vanishing squares."""
        squares = stated_squares(GroupSpec.parse("PE7"))
        assert squares[3] == 5
        assert squares[8] is None

    @pytest.mark.slow
    def test_su8_recomputed(self):
        """Test the recomputed square on PSU(8)."""
        checks = check_squares(GroupSpec.parse("PSU", 8))
        assert [c.expected for c in checks] == ["zeta5"]
        assert all(c.matches for c in checks)

    @pytest.mark.slow
    def test_sp4_recomputed(self):
        """Test the recomputed square on PSp(4)."""
        checks = check_squares(GroupSpec.parse("PSp", 4))
        assert all(c.matches for c in checks)
