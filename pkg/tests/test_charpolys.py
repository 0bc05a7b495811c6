"""Tests for characteristic polynomials, the varpi-derivative and theta-bar."""

from math import comb

import pytest

from app.services.charpolys import (
    CharPolyError,
    PolyKind,
    a_orders,
    char_polys,
    check_prime,
    degree_sets,
    derivatives,
    expected_a_orders,
    h_degree,
    theta_bar_values,
)
from app.services.flag import e3_quotient, symbol_ring
from app.services.forms import derivative_wrt_varpi, form_label, theta_bar_xi1
from app.services.root_data import GroupSpec
from app.tables.char_polys import get_derivatives
from app.tables.symbols import Symbols


@pytest.fixture
def psu4():
    """PSU(4) with torsion prime 2."""
    return GroupSpec.parse("PSU", 4)


class TestDegreeSets:
    """Tests for D(G, p), D(PG, p) and h(G)."""

    def test_psu4(self, psu4):
        """Test h = 4 drops from the quotient set."""
        sets = degree_sets(psu4, 2)
        assert sets.mod_p == [2, 3, 4]
        assert sets.h == 4
        assert sets.quotient == [2, 3]
        assert sets.integral == [2, 3, 4]

    @pytest.mark.parametrize("n,h", [(1, 2), (2, 4), (3, 2), (4, 8), (6, 4)])
    def test_sp_h(self, n, h):
        """Test h(Sp(n)) = 2^{nu_2(n) + 1}."""
        assert h_degree(GroupSpec.parse("PSp", n), 2) == h

    def test_exceptional_h(self):
        """Test the tabulated h for E6 and E7."""
        assert h_degree(GroupSpec.parse("PE6"), 3) == 9
        assert h_degree(GroupSpec.parse("PE7"), 2) == 2

    def test_prime_outside_center(self, psu4):
        """Test primes not dividing the center order are refused."""
        with pytest.raises(CharPolyError):
            check_prime(psu4, 3)
        with pytest.raises(CharPolyError):
            check_prime(GroupSpec.parse("PE6"), 2)


class TestClassicalSets:
    """Tests for the chern-class sets of SU(n) and Sp(n)."""

    def test_integral_labels(self, psu4):
        """Test gamma_{2s-1} labels and degrees."""
        result = char_polys(psu4, PolyKind.INTEGRAL)
        assert [form.label for form in result.entries] == ["gamma3", "gamma5", "gamma7"]
        assert [form.degree for form in result.entries] == [3, 5, 7]

    def test_quotient_set_drops_h(self, psu4):
        """Test the quotient set has no entry at h(G)."""
        result = char_polys(psu4, PolyKind.QUOTIENT, 2)
        assert [form.s for form in result.entries] == [2, 3]
        assert result.entries[0].label == form_label("zeta", 2)

    def test_mod_p_needs_prime(self, psu4):
        """Test a mod p set without a prime raises."""
        with pytest.raises(CharPolyError):
            char_polys(psu4, PolyKind.MOD_P)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_su_derivatives(self, n):
        """Test d c_k / d varpi = C(n, k) varpi^{k-1}."""
        spec = GroupSpec.parse("PSU", n)
        ring = symbol_ring(spec)
        for k in range(2, n + 1):
            derivative = derivative_wrt_varpi(ring.gen(f"c{k}"), spec)
            varpi = derivative.ring.gen(spec.varpi)
            assert derivative == comb(n, k) * varpi ** (k - 1)

    def test_sp_derivatives(self):
        """Test d c_{2k} / d varpi = C(n, k) varpi^{2k-1} for PSp(3)."""
        spec = GroupSpec.parse("PSp", 3)
        result = char_polys(spec, PolyKind.INTEGRAL)
        for form, derivative in zip(result.entries, derivatives(result)):
            varpi = derivative.ring.gen(spec.varpi)
            assert derivative == comb(3, form.s // 2) * varpi ** (form.s - 1)

    def test_theta_bar_mod_2(self, psu4):
        """Test theta-bar vanishes off h(G) and is varpi^{h-1} at h(G)."""
        values = theta_bar_values(psu4, 2)
        assert values[2].is_zero
        assert values[3].is_zero
        assert values[4].to_text() == "w1^3"

    def test_a_orders(self, psu4):
        """Test the orders of theta-bar(gamma_{2s-1}) in the integral E3."""
        assert a_orders(psu4) == {2: 2, 3: 1, 4: 2}
        assert a_orders(psu4) == expected_a_orders(psu4)

    def test_xi1(self):
        """Test theta-bar of the degree-one class is the covering order."""
        assert theta_bar_xi1(GroupSpec.parse("SU", 6)) == 6


@pytest.mark.slow
class TestExceptionalSets:
    """Tests for the tabulated E6 and E7 sets."""

    def test_pe6_mod_3_certified(self):
        """Test the mod 3 set of E6 is certified and carries theta-bar."""
        spec = GroupSpec.parse("PE6")
        result = char_polys(spec, PolyKind.MOD_P, 3)
        assert result.degree_set == degree_sets(spec, 3).mod_p
        assert all(form.theta is not None for form in result.entries)

    def test_pe6_a_orders(self):
        """Test a_9 = 3 and every other order is trivial."""
        spec = GroupSpec.parse("PE6")
        assert a_orders(spec) == expected_a_orders(spec)

    def test_pe6_stored_derivatives(self):
        """Test the stored derivatives of E6 agree with the computed ones as classes of E3 mod 3."""
        spec = GroupSpec.parse("PE6")
        e3 = e3_quotient(spec, 3)
        for integral in (False, True):
            kind = PolyKind.INTEGRAL if integral else PolyKind.MOD_P
            result = char_polys(spec, kind, None if integral else 3)
            for computed, stored in zip(derivatives(result), get_derivatives("E6", integral)):
                assert e3.equal(computed, stored(Symbols(computed.ring)))

    def test_pe6_varpi_has_order_3(self):
        """Test -15*varpi vanishes in the integral E3 while varpi has order 3."""
        spec = GroupSpec.parse("PE6")
        e3 = e3_quotient(spec)
        varpi = e3.ring.gen(spec.varpi)
        assert e3.is_zero(-15 * varpi)
        assert e3.order(varpi) == 3
