"""Tests for binomial gcds, prime-power partitions and theta values."""

from math import comb, gcd

import pytest
from hypothesis import given, strategies as st

from app.services.binomial import (
    BinomialError,
    a_ratio,
    admissible_sets,
    b_gcd,
    h_sequence,
    ord_p_binom,
    prime_power,
    q_partition,
    theta_gamma,
    theta_raw,
)


class TestGcdSequence:
    """Tests for b_{n,k} and the ratios a_{n,k}."""

    def test_b_for_four(self):
        """Test the gcd sequence of n = 4."""
        assert [b_gcd(4, k) for k in range(1, 5)] == [4, 2, 2, 1]

    def test_b_last_is_one(self):
        """Test b_{n,n} = 1 since C(n, n) = 1."""
        assert b_gcd(12, 12) == 1

    def test_b_out_of_range(self):
        """Test that k > n raises."""
        with pytest.raises(BinomialError):
            b_gcd(3, 4)

    def test_ratios_for_six(self):
        """Test a_{6,k} picks out 2 and 3."""
        assert [a_ratio(6, k) for k in range(2, 7)] == [2, 3, 1, 1, 1]

    @given(st.integers(min_value=2, max_value=120))
    def test_ratio_matches_partition(self, n):
        """Test a_{n,k} equals p on Q_p(n) and 1 elsewhere."""
        partition = q_partition(n)
        for k in range(2, n + 1):
            assert a_ratio(n, k) == (partition.block_of(k) or 1)

    @given(st.integers(min_value=1, max_value=60))
    def test_b_is_gcd(self, n):
        """Test the recursive gcd against a direct computation."""
        for k in range(1, n + 1):
            direct = 0
            for j in range(1, k + 1):
                direct = gcd(direct, comb(n, j))
            assert b_gcd(n, k) == direct


class TestPartition:
    """Tests for Q_p(n) and Q_0(n)."""

    def test_twelve(self):
        """Test the partition of {2..12}."""
        partition = q_partition(12)
        assert partition.blocks == {2: [2, 4], 3: [3]}
        assert partition.q0 == [5, 6, 7, 8, 9, 10, 11, 12]

    def test_to_dict(self):
        """Test the serialized shape."""
        assert q_partition(8).to_dict() == {"n": 8, "Q0": [3, 5, 6, 7], "Qp": {"2": [2, 4, 8]}}

    def test_small_n_rejected(self):
        """Test n = 1 raises."""
        with pytest.raises(BinomialError):
            q_partition(1)


class TestValuations:
    """Tests for the p-adic valuation window."""

    def test_powers_of_two(self):
        """Test the equality case s = 2^t."""
        assert ord_p_binom(8, 1, 2) == 3
        assert ord_p_binom(8, 2, 2) == 2

    def test_strict_case(self):
        """Test s = 3 exceeds the bound for n = 8."""
        assert ord_p_binom(8, 3, 2) == 3

    def test_window_violation(self):
        """Test that t + 1 >= r raises."""
        with pytest.raises(BinomialError):
            ord_p_binom(8, 4, 2)

    def test_not_prime(self):
        """Test a composite modulus raises."""
        with pytest.raises(BinomialError):
            ord_p_binom(8, 1, 4)

    @given(st.sampled_from([2, 3, 5]), st.integers(min_value=1, max_value=30))
    def test_lower_bound(self, p, s):
        """Test ord_p C(p^4 * 7, s) >= 4 - t inside the window."""
        n = p**4 * 7
        t = 0
        while p ** (t + 1) <= s:
            t += 1
        if t + 1 >= 4:
            return
        assert ord_p_binom(n, s, p) >= 4 - t


class TestHSequence:
    """Tests for the h_i certificates."""

    def test_small_cases(self):
        """Test the sequences for p = 2, s = 1."""
        assert h_sequence(2, 2, 1) == [1]
        assert h_sequence(2, 3, 1) == [3]

    @pytest.mark.parametrize("p,r", [(2, 4), (3, 3), (5, 2)])
    def test_identity_holds(self, p, r):
        """Test C(p^r, p^s) - p^{r-s} = sum h_i C(p^r, p^{s-i})."""
        n = p**r
        for s in range(1, r + 1):
            h = h_sequence(p, r, s)
            total = sum(hi * comb(n, p ** (s - i)) for i, hi in enumerate(h, start=1))
            assert total == comb(n, p**s) - p ** (r - s)

    def test_range(self):
        """Test s beyond r raises."""
        with pytest.raises(BinomialError):
            h_sequence(2, 2, 3)


class TestTheta:
    """Tests for theta(gamma_I) with n a prime power."""

    def test_full_chain_for_eight(self):
        """Test the three-element set for n = 8."""
        assert theta_gamma(8, [1, 2, 4]).to_text() == "2·ρ3·ρ7"

    def test_singletons(self):
        """Test p^{r-s} omega^{p^s - 1} reduced by the omega orders."""
        assert theta_gamma(8, [1]).to_text() == "8"
        assert theta_gamma(8, [2]).to_text() == "4·ω"
        assert theta_gamma(8, [4]).to_text() == "2·ω^3"
        assert theta_gamma(8, [8]).to_text() == "ω^7"

    def test_pair(self):
        """Test the pair {1, 2} for n = 4."""
        assert theta_gamma(4, [1, 2]).to_text() == "2·ρ3"

    def test_raw_matches_normalized_without_omega(self):
        """Test normalization does not touch omega-free terms."""
        assert theta_raw(8, [1, 2, 4]) == theta_gamma(8, [1, 2, 4])

    def test_malformed_sets(self):
        """Test invalid index sets raise."""
        with pytest.raises(BinomialError):
            theta_gamma(8, [])
        with pytest.raises(BinomialError):
            theta_gamma(8, [3])
        with pytest.raises(BinomialError):
            theta_gamma(8, [4, 2])
        with pytest.raises(BinomialError):
            theta_gamma(12, [1])

    def test_to_list(self):
        """Test the serialized terms."""
        assert theta_gamma(8, [1, 2, 4]).to_list() == [
            {"coefficient": 2, "omega_power": 0, "rho_indices": [3, 7]}
        ]

    def test_examples_for_eight(self):
        """Test the remaining multi-element sets for n = 8."""
        assert theta_gamma(8, [1, 2, 8]).to_text() == "2·ρ3·ρ15 + ω^4·ρ3·ρ7"
        assert theta_gamma(8, [2, 4, 8]).to_text() == "ω·ρ7·ρ15"
        assert theta_gamma(8, [1, 2, 4, 8]).to_text() == "ρ3·ρ7·ρ15"

    @pytest.mark.parametrize("n", [2, 4, 8, 16, 3, 9, 27, 5, 25])
    def test_divisibility(self, n):
        """Test theta is divisible by p whenever the largest element is below n."""
        p, _ = prime_power(n)
        for index_set in admissible_sets(n):
            if index_set[-1] < n:
                assert theta_gamma(n, list(index_set)).divisible_by(p)
