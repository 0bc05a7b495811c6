"""Tests for the Koszul complex H*(G/T) (x) Lambda(t) and its homology."""

import pytest
from hypothesis import given, strategies as st

from app.services.flag import flag_presentation, mod_p_presentation
from app.services.koszul import KoszulComplex, KoszulElement, KoszulError, koszul_d2, koszul_homology
from app.services.root_data import GroupSpec, transgression


@pytest.fixture(scope="module")
def psu3_complex():
    """Integral Koszul complex of PSU(3) through total degree 8."""
    spec = GroupSpec.parse("PSU", 3)
    return KoszulComplex(flag_presentation(spec), transgression(spec), 8)


class TestKoszulElement:
    """Tests for exterior bookkeeping."""

    def test_sign_on_reorder(self, psu3_complex):
        """Test t2*t1 = -t1*t2."""
        one = psu3_complex.ring.one
        x = psu3_complex.element({(1, 0): one})
        assert x == psu3_complex.element({(0, 1): -one})

    def test_repeated_index_vanishes(self, psu3_complex):
        """Test t1*t1 = 0."""
        assert psu3_complex.element({(0, 0): psu3_complex.ring.one}).is_zero

    def test_index_out_of_range(self, psu3_complex):
        """Test a fiber index beyond the rank raises."""
        with pytest.raises(KoszulError):
            KoszulElement(psu3_complex.ring, 2, {(2,): psu3_complex.ring.one})

    def test_d2_on_generator(self, psu3_complex):
        """Test d2(t1) = tau(t1)."""
        ring = psu3_complex.ring
        image = psu3_complex.d2(psu3_complex.element({(0,): ring.one}))
        expected = 2 * ring.gen("w1") - ring.gen("w2")
        assert image == psu3_complex.element({(): expected})

    @given(
        st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=2, unique=True),
        st.integers(min_value=-5, max_value=5),
        st.integers(min_value=-5, max_value=5),
    )
    def test_square_zero(self, subset, a, b):
        """Test d2 o d2 = 0 on random elements."""
        spec = GroupSpec.parse("PSU", 3)
        tau = transgression(spec)
        ring = flag_presentation(spec).generator_ring
        coefficient = a * ring.gen("w1") + b * ring.gen("w2")
        x = KoszulElement(ring, tau.rank, {tuple(subset): coefficient})
        assert koszul_d2(koszul_d2(x, tau), tau).is_zero


class TestKoszulHomology:
    """Tests for homology groups per bidegree."""

    def test_su2(self):
        """Test H*(SU(2)) = Lambda(x3)."""
        spec = GroupSpec.parse("SU", 2)
        homology = koszul_homology(flag_presentation(spec), transgression(spec), 3)
        assert homology.by_total_degree().to_dict() == {0: [1, []], 3: [1, []]}

    def test_so3(self):
        """Test PSU(2) = SO(3): Z, Z/2 in degree 2, Z in degree 3."""
        spec = GroupSpec.parse("PSU", 2)
        homology = koszul_homology(flag_presentation(spec), transgression(spec), 3)
        assert homology.by_total_degree().to_dict() == {0: [1, []], 2: [0, [2]], 3: [1, []]}

    def test_so3_mod_2(self):
        """Test the mod 2 homology of PSU(2) is F2 in degrees 0 through 3."""
        spec = GroupSpec.parse("PSU", 2)
        homology = koszul_homology(mod_p_presentation(spec, 2), transgression(spec), 3)
        assert homology.by_total_degree().to_dict() == {
            0: [1, []], 1: [1, []], 2: [1, []], 3: [1, []]
        }

    def test_bidegree_keys(self):
        """Test serialized keys are base,fiber pairs."""
        spec = GroupSpec.parse("SU", 2)
        homology = koszul_homology(flag_presentation(spec), transgression(spec), 3)
        assert set(homology.to_dict()) == {"0,0", "2,1"}
