"""Tests for the acceptance battery."""

import pytest

from app.services.root_data import GroupSpec, RootDataError
from app.services.verify import (
    CRITERIA,
    LIMITS,
    BatteryResult,
    Check,
    Scale,
    VerificationError,
    expected_e3,
    run_battery,
    run_check,
)


class TestRunner:
    """Tests for check bookkeeping."""

    def test_criteria_names(self):
        """Test the battery covers nine criteria in order."""
        assert [name for name, _, _ in CRITERIA] == [
            "transgression", "flag-ranks", "e3-orders", "tables", "exactness",
            "bockstein-steenrod", "bockstein-cohomology", "binomials", "integral",
        ]

    def test_unknown_check(self):
        """Test an unknown check name raises."""
        with pytest.raises(VerificationError):
            run_battery(Scale.QUICK, ["nonexistent"])

    def test_domain_error_fails_check(self):
        """Test a domain exception turns into a failed check."""

        def broken(limits):
            raise RootDataError("no such group")

        check = run_check("broken", "criterion 0: none", broken, LIMITS[Scale.QUICK])
        assert not check.passed
        assert check.detail == "RootDataError: no such group"

    def test_empty_result_fails(self):
        """Test a run without checks does not pass."""
        assert not BatteryResult(scale=Scale.QUICK).passed

    def test_failures(self):
        """Test failed checks are listed."""
        result = BatteryResult(scale=Scale.QUICK, checks=[
            Check("a", "x", True, 0.1),
            Check("b", "y", False, 0.2, "broken"),
        ])
        assert not result.passed
        assert [c.name for c in result.failures()] == ["b"]
        assert result.seconds == pytest.approx(0.3)


class TestClosedForms:
    """Tests for the E3 closed form used by the battery."""

    def test_psu4(self):
        """Test b_{4,r} orders."""
        assert expected_e3(GroupSpec.parse("PSU", 4), 10) == {
            0: [1, []], 2: [0, [4]], 4: [0, [2]], 6: [0, [2]]
        }

    def test_psp2(self):
        """Test Z/2 in degrees 2 through 2(h - 1)."""
        assert expected_e3(GroupSpec.parse("PSp", 2), 10) == {
            0: [1, []], 2: [0, [2]], 4: [0, [2]], 6: [0, [2]]
        }


class TestQuickBattery:
    """Tests for individual quick-scale criteria."""

    @pytest.mark.parametrize("name", ["transgression", "binomials", "flag-ranks"])
    def test_fast_criteria(self, name):
        """Test the inexpensive criteria pass."""
        result = run_battery(Scale.QUICK, [name])
        assert result.passed, result.checks[0].detail

    def test_transgression_covers_exceptional(self):
        """Test the transgression criterion accepts the E6 and E7 Cartan rows."""
        result = run_battery(Scale.QUICK, ["transgression"])
        assert result.passed, result.checks[0].detail
        assert result.checks[0].detail == "19 groups"

    @pytest.mark.slow
    def test_tables(self):
        """Test the stored E6 derivatives pass as classes of E3."""
        result = run_battery(Scale.QUICK, ["tables"])
        assert result.passed, result.checks[0].detail

    @pytest.mark.slow
    def test_quick_battery(self):
        """Test every criterion passes at quick scale."""
        result = run_battery(Scale.QUICK)
        assert result.passed, [(c.name, c.detail) for c in result.failures()]
