"""Tests for flag presentations, the restriction map and E3^{*,0}."""

from math import factorial

import pytest

from app.services.flag import (
    FlagError,
    e3_base,
    e3_from_flag,
    e3_quotient,
    flag_presentation,
    mod_p_presentation,
    restriction_map,
)
from app.services.root_data import GroupSpec


@pytest.fixture
def psu4():
    """PSU(4), the smallest case with two distinct torsion orders."""
    return GroupSpec.parse("PSU", 4)


class TestFlagPresentation:
    """Tests for H*(G/T)."""

    def test_su3_betti(self):
        """Test H*(SU(3)/T) has ranks 1, 2, 2, 1."""
        group = flag_presentation(GroupSpec.parse("SU", 3)).graded_group(6)
        assert group.to_dict() == {0: [1, []], 2: [2, []], 4: [2, []], 6: [1, []]}

    @pytest.mark.parametrize("name,n,order", [("SU", 4, 24), ("Sp", 2, 8), ("Sp", 3, 48)])
    def test_total_rank_is_weyl_order(self, name, n, order):
        """Test the total rank equals the Weyl group order and there is no torsion."""
        spec = GroupSpec.parse(name, n)
        group = flag_presentation(spec).graded_group(spec.dimension - spec.rank)
        assert group.total_rank() == order
        assert not group.has_torsion()

    def test_relation_names_match(self):
        """Test every relation carries a name and is homogeneous."""
        presentation = flag_presentation(GroupSpec.parse("Sp", 3))
        assert len(presentation.relation_names) == len(presentation.relations)
        assert all(r.is_homogeneous() for r in presentation.relations)

    def test_mod_p_dimensions(self):
        """Test the mod 2 presentation has the same Poincare polynomial."""
        spec = GroupSpec.parse("SU", 4)
        group = mod_p_presentation(spec, 2).graded_group(12)
        assert group.total_rank() == factorial(4)


class TestRestrictionMap:
    """Tests for weights as multiples of varpi."""

    def test_psu4(self, psu4):
        """Test w_k goes to k * varpi modulo 4."""
        mapping = restriction_map(psu4)
        assert mapping.assignment == {"w1": 1, "w2": 2, "w3": 3}
        assert mapping.relation_text == "4*w1 = 0"

    def test_psp2(self):
        """Test the long-root weight dies modulo 2."""
        mapping = restriction_map(GroupSpec.parse("PSp", 2))
        assert mapping.assignment == {"w1": 1, "w2": 0}

    @pytest.mark.parametrize("name,order", [("PE6", 3), ("PE7", 2)])
    def test_exceptional_orders(self, name, order):
        """Test the exceptional quotients are cyclic of the center order."""
        mapping = restriction_map(GroupSpec.parse(name))
        assert mapping.order == order
        assert mapping.assignment[mapping.varpi] == 1

    def test_simply_connected_rejected(self):
        """Test the restriction map needs an adjoint group."""
        with pytest.raises(FlagError):
            restriction_map(GroupSpec.parse("SU", 4))


class TestE3Base:
    """Tests for E3^{*,0}(PG)."""

    def test_psu4_orders(self, psu4):
        """Test Z/4, Z/2, Z/2 in degrees 2, 4, 6."""
        group = e3_base(psu4).graded_group(10)
        assert group.to_dict() == {0: [1, []], 2: [0, [4]], 4: [0, [2]], 6: [0, [2]]}

    def test_psu6_orders(self):
        """Test the gcd sequence 6, 3, 1 of n = 6."""
        group = e3_quotient(GroupSpec.parse("PSU", 6)).graded_group(14)
        assert group.to_dict() == {0: [1, []], 2: [0, [6]], 4: [0, [3]]}

    def test_pso3(self):
        """Test PSp(1) = SO(3) has a single Z/2."""
        group = e3_quotient(GroupSpec.parse("PSp", 1)).graded_group(8)
        assert group.to_dict() == {0: [1, []], 2: [0, [2]]}

    def test_flag_path_agrees(self, psu4):
        """Test adjoining the transgression images in the flag ring gives the same groups."""
        assert e3_from_flag(psu4, 8).to_dict() == e3_base(psu4).graded_group(8).to_dict()

    def test_simply_connected_rejected(self):
        """Test the base presentation needs an adjoint group."""
        with pytest.raises(FlagError):
            e3_base(GroupSpec.parse("SU", 4))
