from itertools import permutations

import pytest

from conftest import naive_fib_valuations, naive_periods, naive_valuation

from fibreg.fibcore import nu, primes_up_to, to_digits
from fibreg.lengyel import (
    HypothesisError,
    WallReport,
    digit_sum_invariance_check,
    direct_valuation,
    lengyel_valuation,
    valuation_profile,
    wall_check,
)

FIRST_TEN_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


class TestLengyelValuation:
    def test_examples(self):
        assert lengyel_valuation(2, 12) == 4
        assert lengyel_valuation(11, 13310) == 4
        assert lengyel_valuation(5, 7) == 0
        assert lengyel_valuation(7, 8) == 1

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            lengyel_valuation(2, 0)
        with pytest.raises(ValueError):
            direct_valuation(7, 0)

    def test_against_true_integer_valuations(self):
        # oracle straight from full-precision Fibonacci numbers
        seq = [0, 1]
        for _ in range(400):
            seq.append(seq[-1] + seq[-2])
        for p in (2, 3, 5, 7, 11, 13):
            for n in range(1, 401):
                expected = naive_valuation(p, seq[n]) if seq[n] else 0
                assert lengyel_valuation(p, n) == expected
                assert direct_valuation(p, n) == expected

    def test_oracle_equivalence_first_ten_primes(self):
        for p in FIRST_TEN_PRIMES:
            for n in range(1, 20001):
                assert lengyel_valuation(p, n) == direct_valuation(p, n), (p, n)

    def test_base2_case_split(self):
        for n in range(1, 100001):
            r = n % 6
            v = lengyel_valuation(2, n)
            if r in (1, 2, 4, 5):
                assert v == 0
            elif r == 3:
                assert v == 1
            else:
                assert v == nu(2, n) + 2
        for n in range(1, 20001):
            assert lengyel_valuation(2, n) == direct_valuation(2, n)

    def test_base5_equals_index_valuation(self):
        for n in range(1, 100001):
            assert lengyel_valuation(5, n) == nu(5, n)
        for n in range(1, 10001):
            assert direct_valuation(5, n) == nu(5, n)

    def test_profile_values(self):
        assert valuation_profile(11) == (10, 1)
        assert valuation_profile(7) == (8, 1)
        assert valuation_profile(2) == (3, 1)


class TestDirectValuation:
    def test_examples(self):
        assert direct_valuation(2, 6) == 3
        assert direct_valuation(3, 4) == 1
        assert direct_valuation(13, 7) == 1

    def test_high_valuation_indices(self):
        # indices engineered so the working modulus has to carry real powers
        assert direct_valuation(2, 6 * 2**10) == 13  # 6*2^10 = 3*2^11
        assert direct_valuation(11, 10 * 11**5) == 6
        match = naive_fib_valuations(7, 8 * 7**3)
        assert direct_valuation(7, 8 * 7**3) == match[8 * 7**3]


class TestDigitSumInvariance:
    def test_paper_pair(self):
        assert digit_sum_invariance_check(11, 31411600, 13310) == 4

    def test_permutation_family(self):
        family = []
        for perm in permutations((1, 2, 8, 9)):
            n = 0
            for d in perm:
                n = n * 11 + d
            family.append(n)
        assert min(family) == 1670 and max(family) == 12970
        for m in family:
            assert digit_sum_invariance_check(11, 1670, m) == 1

    def test_reflexive(self):
        for n in (1, 17, 1670, 13310):
            assert digit_sum_invariance_check(11, n, n) == lengyel_valuation(11, n)

    def test_wrong_class_rejected(self):
        with pytest.raises(HypothesisError, match="mod 5"):
            digit_sum_invariance_check(7, 10, 10)

    def test_digit_sum_mismatch_named(self):
        with pytest.raises(HypothesisError, match="digit sums"):
            digit_sum_invariance_check(11, 1, 2)

    def test_trailing_zero_mismatch_named(self):
        # 11 and 121 in base 11 have digit sum 1 but different trailing blocks
        with pytest.raises(HypothesisError, match="trailing"):
            digit_sum_invariance_check(11, 11, 121)

    @pytest.mark.parametrize("p", [11, 19, 29])
    def test_random_constructed_pairs(self, p, rng):
        alpha, _ = valuation_profile(p)
        checked = 0
        while checked < 200:
            n = rng.randrange(1, 10**7)
            digits = list(to_digits(n, p).digits)
            tz = to_digits(n, p).trailing_zero_count()
            head = digits[tz:]
            if len(head) < 2:
                continue
            rng.shuffle(head)
            if head[0] == 0:
                continue  # shuffle must not extend the trailing zero block
            m = 0
            for d in reversed(digits[:tz] + head):
                m = m * p + d
            assert digit_sum_invariance_check(p, n, m) == lengyel_valuation(p, n)
            checked += 1


class TestWall:
    def test_examples(self):
        r11 = wall_check(11)
        assert r11.wall_negative and r11.val_at_alpha == 1
        r2 = wall_check(2)
        assert r2.val_at_alpha == 1 and r2.alpha == 3
        r47 = wall_check(47)
        assert r47.wall_negative and r47.pi_p2 != r47.pi_p

    def test_pi_square_against_naive_scan(self):
        for p in primes_up_to(60):
            report = wall_check(p)
            assert naive_periods(p * p)[1] == report.pi_p2, p

    def test_consistency_to_1e4(self):
        # the report validates wall_negative == (pi(p^2) != pi(p)) on construction
        for p in primes_up_to(10**4):
            report = wall_check(p)
            assert report.wall_negative
            assert report.val_at_alpha == 1

    def test_report_validation(self):
        with pytest.raises(ValueError):
            WallReport(p=11, alpha=10, val_at_alpha=1, pi_p=10, pi_p2=10,
                       wall_negative=True)
        with pytest.raises(ValueError):
            WallReport(p=11, alpha=10, val_at_alpha=0, pi_p=10, pi_p2=110,
                       wall_negative=True)
