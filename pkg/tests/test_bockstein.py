"""Tests for Bocksteins of the classes zeta and the PE6/PE7 complexes."""

import pytest

from app.services.bockstein import (
    BocksteinError,
    action_relations,
    bockstein_cohomology,
    bockstein_complex,
    check_bockstein,
    delta_consistency,
    expected_bockstein,
    integral_lift,
    stated_bockstein,
)
from app.services.charpolys import degree_sets
from app.services.root_data import GroupSpec


@pytest.fixture
def psu4():
    """PSU(4), p = 2."""
    return GroupSpec.parse("PSU", 4)


class TestClassicalBockstein:
    """Tests for beta_p(zeta_{2s-1}) on PSU(n) and PSp(n)."""

    def test_closed_form(self, psu4):
        """Test -(C(4,s)/2) varpi^s below h."""
        assert expected_bockstein(psu4, 2, 2).to_text() == "-3*w1^2"
        assert expected_bockstein(psu4, 2, 3).to_text() == "-2*w1^3"

    def test_prime_power_form(self, psu4):
        """Test the p-local form -p^(r-t-1) varpi^(p^t)."""
        assert stated_bockstein(psu4, 2, 2).to_text() == "-w1^2"
        assert stated_bockstein(psu4, 2, 3).is_zero

    @pytest.mark.parametrize("name,n,p", [("PSU", 4, 2), ("PSU", 6, 2), ("PSU", 6, 3), ("PSp", 2, 2)])
    def test_values_match(self, name, n, p):
        """Test every computed Bockstein agrees with its closed form p-locally."""
        spec = GroupSpec.parse(name, n)
        for s in degree_sets(spec, p).quotient:
            value = check_bockstein(spec, p, s)
            assert value.matches, value.value.to_text()

    def test_no_class_at_h(self, psu4):
        """Test there is no zeta at s = h(G)."""
        with pytest.raises(BocksteinError):
            integral_lift(psu4, 2, 4)

    def test_lift_reduces_to_class(self, psu4):
        """Test the integral lift of zeta3 is c2 corrected by a varpi multiple."""
        lift = integral_lift(psu4, 2, 2)
        assert lift.to_text() == "-6*w1^2 + c2"


@pytest.mark.slow
class TestComplexes:
    """Tests for the Bockstein complexes of PE6 and PE7."""

    @pytest.mark.parametrize("group,dimension", [("PE6", 64), ("PE7", 128)])
    def test_cohomology_dimension(self, group, dimension):
        """Test the Bockstein cohomology dimension and the image presentation."""
        result = bockstein_cohomology(bockstein_complex(group))
        assert result.cohomology.total_rank() == dimension
        assert result.presentation_matches
        assert result.relations_hold

    def test_pe6_strict_relations(self):
        """Test the strict action relations of PE6 hold in the complex."""
        relations = action_relations(bockstein_complex("PE6"))
        assert relations
        assert all(r.holds for r in relations if r.strict)

    def test_pe6_delta_is_reduced_bockstein(self):
        """Test delta_3 agrees with the reduction of beta_3 up to a unit."""
        checks = delta_consistency(bockstein_complex("PE6"), GroupSpec.parse("PE6"))
        assert all(check.matches for check in checks)
