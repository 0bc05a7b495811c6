"""Tests for the text and LaTeX emitters."""

import pytest

from app.services.flag import e3_base
from app.services.linalg import GradedAbelianGroup, GroupSummand
from app.services.polynomials import graded_ring
from app.services.render import (
    group_text,
    latex_name,
    polynomial_latex,
    presentation_latex,
    presentation_text,
    ring_latex,
    summand_text,
    text_to_latex,
)
from app.services.rings import mod_p_ring
from app.services.root_data import GroupSpec


@pytest.fixture
def weights():
    """Integral ring on two weights."""
    return graded_ring(("w1", "w2"), (2, 2))


class TestNames:
    """Tests for generator names in LaTeX."""

    @pytest.mark.parametrize("name,expected", [
        ("w1", r"\omega_1"),
        ("c12", "c_{12}"),
        ("rho23", r"\rho_{23}"),
        ("zeta5", r"\zeta_5"),
        ("iota", r"\iota"),
        ("c_1_7", r"\mathcal{C}_{\{1,7\}}"),
        ("unknown", "unknown"),
    ])
    def test_latex_name(self, name, expected):
        """Test indexed names get subscripts."""
        assert latex_name(name) == expected

    def test_relation_text(self):
        """Test a relation in ring names."""
        assert text_to_latex("w1^8*x4^2 = 0") == r"\omega_1^{8}x_4^{2} = 0"


class TestPolynomials:
    """Tests for polynomial rendering."""

    def test_polynomial_latex(self, weights):
        """Test coefficients, powers and signs."""
        w1, w2 = weights.gen("w1"), weights.gen("w2")
        assert polynomial_latex(2 * w1**2 - w1 * w2) == r"2\omega_1^{2} - \omega_1\omega_2"

    def test_zero(self, weights):
        """Test the zero polynomial."""
        assert polynomial_latex(weights.zero) == "0"


class TestGroups:
    """Tests for abelian group text."""

    def test_summand_text(self):
        """Test free and torsion parts."""
        assert summand_text(GroupSummand(rank=2, torsion=(2, 4))) == "Z^2 + Z/2 + Z/4"
        assert summand_text(GroupSummand()) == "0"

    def test_field_group(self):
        """Test dimensions over F_p."""
        group = GradedAbelianGroup(groups={0: GroupSummand(rank=1), 2: GroupSummand(rank=2)}, modulus=2)
        assert group_text(group) == "0: F2^1\n2: F2^2"


class TestPresentations:
    """Tests for presentations and rings."""

    def test_presentation_text(self):
        """Test the label, generators and extra ideal generator."""
        text = presentation_text(e3_base(GroupSpec.parse("PSU", 4)))
        assert text.startswith("E3^(*,0)(PSU(4))")
        assert "generators: w1 (2)" in text
        assert "extra: 4*w1" in text

    def test_presentation_latex(self):
        """Test the aligned block over Z."""
        latex = presentation_latex(e3_base(GroupSpec.parse("PSU", 4)))
        assert latex.startswith(r"\begin{aligned}")
        assert r"\mathbb{Z}[\omega_1] / I" in latex
        assert latex.endswith(r"\end{aligned}")

    def test_isomorphism_latex(self):
        """Test the isomorphism marker is emitted as text."""
        latex = ring_latex(mod_p_ring(GroupSpec.parse("PSU", 4), 3))
        assert r"\text{" in latex
