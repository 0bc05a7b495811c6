"""Tests for assembled cohomology rings and their series."""

from dataclasses import replace

import pytest

from app.services.rings import (
    Flavor,
    OddClass,
    exactness_audit,
    free_rank_audit,
    integral_ring,
    j_omega,
    mod_p_ring,
    poincare_series,
    rational_series,
    theta_text,
    truncated_series,
)
from app.services.binomial import theta_gamma
from app.services.root_data import GroupSpec


class TestSeries:
    """Tests for Poincare series helpers."""

    def test_truncated_series(self):
        """Test (1 + t^2 + t^4)(1 + t) through degree 5."""
        assert truncated_series([(2, 3), (1, 2)], 5) == [1, 1, 1, 1, 1, 1]

    def test_truncation(self):
        """Test terms beyond the bound are dropped."""
        assert truncated_series([(3, 2)], 2) == [1, 0, 0]

    def test_group_series(self):
        """Test rank plus torsion count per degree."""
        group = j_omega(GroupSpec.parse("PSU", 4)).graded_group(8)
        assert poincare_series(group, 8) == [1, 0, 1, 0, 1, 0, 1, 0, 0]


class TestModPRing:
    """Tests for H*(PG; F_p)."""

    def test_psp2_total(self):
        """Test H*(PSp(2); F2) has total dimension 16."""
        ring = mod_p_ring(GroupSpec.parse("PSp", 2), 2)
        assert ring.total_dimension == 16
        assert ring.verified

    def test_psu4_total(self):
        """Test H*(PSU(4); F2) has total dimension 32."""
        ring = mod_p_ring(GroupSpec.parse("PSU", 4), 2)
        assert ring.total_dimension == 32
        assert ring.heights == {"w1": 4}
        assert [g.name for g in ring.odd_generators] == ["iota", "zeta3", "zeta5"]

    def test_so3_is_truncated_polynomial(self):
        """Test iota^2 = w1 for PSU(2) = SO(3)."""
        ring = mod_p_ring(GroupSpec.parse("PSU", 2), 2)
        iota = ring.odd_generators[0]
        assert iota.flavor is Flavor.DELTA
        assert iota.square.to_text() == "w1"
        assert ring.poincare() == [1, 1, 1, 1]

    def test_odd_prime_iota_exterior(self):
        """Test iota is exterior for p odd."""
        ring = mod_p_ring(GroupSpec.parse("PSU", 3), 3)
        assert ring.odd_generators[0].flavor is Flavor.EXTERIOR

    def test_coprime_prime_is_isomorphism(self):
        """Test p prime to the center order reports the covering isomorphism."""
        ring = mod_p_ring(GroupSpec.parse("PSU", 4), 3)
        assert ring.isomorphism is not None
        assert "SU(4)" in ring.to_text()

    @pytest.mark.parametrize("name,n,p", [("PSU", 2, 2), ("PSU", 3, 3), ("PSp", 1, 2)])
    def test_exactness(self, name, n, p):
        """Test the ring series matches the Koszul homology of E2."""
        audit = exactness_audit(GroupSpec.parse(name, n), p)
        assert audit.matches


class TestIntegralRing:
    """Tests for H*(PSU(n)) and H*(PSp(n))."""

    def test_psu4(self):
        """Test the free part, the 2-torsion ideal and the self-checks."""
        ring = integral_ring(GroupSpec.parse("PSU", 4))
        assert [g.name for g in ring.odd_generators] == ["rho3", "rho5", "rho7"]
        assert sum(ring.poincare()) == 8
        assert sorted(ring.torsion_ideals) == [2]
        assert ring.torsion_ideals[2].relations[:3] == ["4*w1", "2*w1^2", "w1^4"]
        assert ring.verified

    def test_psu6_two_primes(self):
        """Test n = 6 has torsion at 2 and at 3."""
        ring = integral_ring(GroupSpec.parse("PSU", 6))
        assert sorted(ring.torsion_ideals) == [2, 3]
        assert ring.verified

    def test_psp2(self):
        """Test sigma_2 for PSp(2)."""
        ring = integral_ring(GroupSpec.parse("PSp", 2))
        assert ring.torsion_ideals[2].relations == ["2*w1", "w1^4", "w1*rho7"]
        assert ring.verified

    def test_free_rank_checks(self):
        """Test the free part is checked against the exponents and the Koszul ranks."""
        ring = integral_ring(GroupSpec.parse("PSU", 4))
        assert ring.checks["free part matches the Weyl exponents"]
        assert ring.checks["free ranks match Koszul homology"]

    def test_wrong_generators_detected(self):
        """Test a free part missing rho5 fails both free rank checks."""
        spec = GroupSpec.parse("PSU", 4)
        ring = integral_ring(spec)
        wrong = replace(ring, odd_generators=[OddClass("rho3", 3), OddClass("rho7", 7)], checks={})
        assert wrong.poincare() != rational_series(spec, wrong.top_degree())
        audit = free_rank_audit(wrong, spec)
        assert not audit.matches
        assert audit.koszul_series[5] == 1
        assert audit.ring_series[5] == 0

    def test_j_omega(self):
        """Test J(omega) of PSU(4) has orders 4, 2, 2."""
        group = j_omega(GroupSpec.parse("PSU", 4)).graded_group(8)
        assert group.to_dict() == {0: [1, []], 2: [0, [4]], 4: [0, [2]], 6: [0, [2]]}


class TestThetaText:
    """Tests for theta values written in ring names."""

    def test_ring_names(self):
        """Test omega becomes the varpi name and rho keeps its degree."""
        assert theta_text(theta_gamma(8, [1, 2, 8]), "w1") == "2*rho3*rho15 + w1^4*rho3*rho7"


@pytest.mark.slow
class TestExceptionalRings:
    """Tests for H*(PE6) and H*(PE7)."""

    def test_pe6(self):
        """Test the PE6 ring passes its recomputed checks."""
        ring = integral_ring(GroupSpec.parse("PE6"))
        assert ring.verified
        assert 3 in ring.torsion_ideals

    def test_pe7(self):
        """Test the PE7 ring passes its recomputed checks."""
        ring = integral_ring(GroupSpec.parse("PE7"))
        assert ring.verified
        assert 2 in ring.torsion_ideals
