"""Tests for group specifications, Cartan matrices and transgressions."""

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix

from app.services.root_data import (
    Family,
    GroupSpec,
    Lattice,
    RootDataError,
    cartan_matrix,
    exponents,
    positive_roots,
    transgression,
    transition_matrix,
)


class TestGroupSpec:
    """Tests for parsing and derived properties."""

    def test_parse_adjoint(self):
        """Test a projective unitary group."""
        spec = GroupSpec.parse("psu", 4)
        assert spec.family is Family.SU
        assert spec.lattice is Lattice.ADJOINT
        assert spec.rank == 3
        assert spec.dimension == 15
        assert spec.label == "PSU(4)"
        assert spec.base_label == "SU(4)"

    def test_parse_exceptional_ignores_n(self):
        """Test the exceptional groups fix their own rank parameter."""
        spec = GroupSpec.parse("PE7")
        assert spec.n == 7
        assert spec.dimension == 133
        assert spec.center_order == 2
        assert spec.varpi == "w2"
        assert spec.label == "PE7"

    def test_quotient_order(self):
        """Test q is the center order only for adjoint groups."""
        assert GroupSpec.parse("PSp", 3).quotient_order == 2
        assert GroupSpec.parse("Sp", 3).quotient_order == 1
        assert GroupSpec.parse("PE6").quotient_order == 3

    def test_lattice_switch(self):
        """Test moving between the two ends of the isogeny class."""
        spec = GroupSpec.parse("SU", 5)
        assert spec.adjoint().label == "PSU(5)"
        assert spec.adjoint().simply_connected() == spec

    def test_unknown_group(self):
        """Test an unsupported family raises."""
        with pytest.raises(RootDataError):
            GroupSpec.parse("G2")

    def test_missing_n(self):
        """Test classical groups need n."""
        with pytest.raises(RootDataError):
            GroupSpec.parse("PSU")

    def test_small_n(self):
        """Test SU(1) is rejected."""
        with pytest.raises(RootDataError):
            GroupSpec.parse("SU", 1)


class TestCartan:
    """Tests for Cartan and transition matrices."""

    def test_su3(self):
        """Test the A2 matrix."""
        assert cartan_matrix(GroupSpec.parse("SU", 3)) == [[2, -1], [-1, 2]]

    def test_sp2(self):
        """Test the C2 matrix with the long root last."""
        assert cartan_matrix(GroupSpec.parse("Sp", 2)) == [[2, -1], [-2, 2]]

    @given(st.integers(min_value=2, max_value=9))
    def test_su_determinant(self, n):
        """Test det of the A_{n-1} matrix is n."""
        assert Matrix(cartan_matrix(GroupSpec.parse("SU", n))).det() == n

    @given(st.integers(min_value=1, max_value=7))
    def test_sp_determinant(self, n):
        """Test det of the C_n matrix is 2."""
        assert Matrix(cartan_matrix(GroupSpec.parse("Sp", n))).det() == 2

    @pytest.mark.parametrize("name,det", [("E6", 3), ("E7", 2)])
    def test_exceptional_determinant(self, name, det):
        """Test the determinant equals the center order."""
        matrix = cartan_matrix(GroupSpec.parse(name))
        assert Matrix(matrix).det() == det
        assert Matrix(matrix) == Matrix(matrix).T

    @pytest.mark.parametrize("name,rank", [("E6", 6), ("PE6", 6), ("E7", 7), ("PE7", 7)])
    def test_exceptional_shape(self, name, rank):
        """Test the exceptional matrices are rank x rank."""
        spec = GroupSpec.parse(name)
        assert len(cartan_matrix(spec)) == rank
        assert all(len(row) == rank for row in transition_matrix(spec))

    def test_e6_branch_node(self):
        """Test node 2 of E6 meets only node 4, and nodes 1 and 6 are the ends."""
        matrix = cartan_matrix(GroupSpec.parse("E6"))
        assert [j for j, v in enumerate(matrix[1]) if v < 0] == [3]
        assert [j for j, v in enumerate(matrix[0]) if v < 0] == [2]
        assert [j for j, v in enumerate(matrix[5]) if v < 0] == [4]

    def test_transition(self):
        """Test the identity for SU and the transpose for PSU."""
        assert transition_matrix(GroupSpec.parse("SU", 3)) == [[1, 0], [0, 1]]
        assert transition_matrix(GroupSpec.parse("PSp", 2)) == [[2, -2], [-1, 2]]


class TestExponents:
    """Tests for positive roots and Weyl exponents."""

    @pytest.mark.parametrize("name,n,count", [("SU", 4, 6), ("Sp", 3, 9), ("E6", None, 36), ("E7", None, 63)])
    def test_root_count(self, name, n, count):
        """Test the number of positive roots."""
        assert len(positive_roots(GroupSpec.parse(name, n))) == count

    @pytest.mark.parametrize("name,n,expected", [
        ("SU", 5, [1, 2, 3, 4]),
        ("Sp", 3, [1, 3, 5]),
        ("E6", None, [1, 4, 5, 7, 8, 11]),
        ("E7", None, [1, 5, 7, 9, 11, 13, 17]),
    ])
    def test_exponents(self, name, n, expected):
        """Test the exponents read off the root heights."""
        assert exponents(GroupSpec.parse(name, n)) == expected

    @given(st.integers(min_value=2, max_value=8))
    def test_dimension(self, n):
        """Test rank + 2 * #roots = dim G for SU(n)."""
        spec = GroupSpec.parse("SU", n)
        assert spec.rank + 2 * len(positive_roots(spec)) == spec.dimension


class TestTransgression:
    """Tests for the images tau(t_i)."""

    def test_psu3(self):
        """Test the adjoint images are the Cartan rows."""
        tau = transgression(GroupSpec.parse("PSU", 3))
        assert [image.to_text() for image in tau.images] == ["2*w1 - w2", "-w1 + 2*w2"]
        assert tau.fiber_names == ["t1", "t2"]

    def test_simply_connected(self):
        """Test tau(t_i) = w_i for the simply connected group."""
        tau = transgression(GroupSpec.parse("SU", 4))
        assert [image.to_text() for image in tau.images] == ["w1", "w2", "w3"]

    def test_psp2(self):
        """Test the images for PSp(2)."""
        tau = transgression(GroupSpec.parse("PSp", 2))
        assert [image.to_text() for image in tau.images] == ["2*w1 - w2", "-2*w1 + 2*w2"]

    def test_circle(self):
        """Test the extra generator t0 maps to varpi."""
        tau = transgression(GroupSpec.parse("PE7"), with_circle=True)
        assert tau.rank == 8
        assert tau.fiber_names[-1] == "t0"
        assert tau.images[-1].to_text() == "w2"

    def test_circle_needs_quotient(self):
        """Test the circle extension is refused for SU(n)."""
        with pytest.raises(RootDataError):
            transgression(GroupSpec.parse("SU", 3), with_circle=True)

    @given(st.integers(min_value=3, max_value=10))
    def test_su_closed_form(self, n):
        """Test tau(t_i) = 2w_i - w_{i-1} - w_{i+1} for PSU(n)."""
        tau = transgression(GroupSpec.parse("PSU", n))
        ring = tau.ring
        for i in range(1, n - 1):
            expected = 2 * ring.gen(f"w{i + 1}") - ring.gen(f"w{i}")
            if i + 2 <= n - 1:
                expected = expected - ring.gen(f"w{i + 2}")
            assert tau.images[i] == expected
