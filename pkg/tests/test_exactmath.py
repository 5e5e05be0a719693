"""Factorization, coprime counting, and exact rational arithmetic."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbke import count_coprime_in_range, factorize, harmonic_sum
from orbke.errors import InputError
from orbke.exactmath import FactoredInt, coprime_in_range, is_probable_prime


class TestFactorize:
    def test_unit_has_no_factors(self):
        f = factorize(1)
        assert f.value == 1
        assert f.factors == ()
        assert f.primes == ()

    def test_510(self):
        assert factorize(510).factors == ((2, 1), (3, 1), (5, 1), (17, 1))

    def test_1807(self):
        assert factorize(1807).factors == ((13, 1), (139, 1))

    def test_prime_power(self):
        assert factorize(2**10 * 3**4).factors == ((2, 10), (3, 4))

    def test_large_semiprime_past_trial_bound(self):
        # Both factors exceed the trial-division bound; exercises rho.
        p, q = 1_000_003, 1_000_033
        assert factorize(p * q).factors == ((p, 1), (q, 1))

    def test_sylvester_tail_values(self):
        # c7 and c7 - 2 arise in the dimension-6 family construction.
        c7 = 10650056950807
        assert factorize(c7).factors == ((547, 1), (607, 1), (1033, 1), (31051, 1))
        assert math.prod(p**e for p, e in factorize(c7 - 2).factors) == c7 - 2

    @pytest.mark.parametrize("bad", [0, -5, 2.0, "6", True])
    def test_rejects_nonpositive_and_nonint(self, bad):
        with pytest.raises(InputError):
            factorize(bad)

    def test_factored_int_checks_product(self):
        with pytest.raises(ValueError):
            FactoredInt(10, ((2, 1), (3, 1)))

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=300, deadline=None)
    def test_roundtrip_and_primality(self, n):
        f = factorize(n)
        assert math.prod(p**e for p, e in f.factors) == n
        assert all(is_probable_prime(p) for p in f.primes)
        assert list(f.primes) == sorted(set(f.primes))


class TestPrimality:
    def test_known_primes(self):
        for p in (2, 3, 31051, 1_000_003, 2**31 - 1):
            assert is_probable_prime(p)

    def test_known_composites(self):
        # 561 and 1729 are Carmichael numbers; cheap pseudoprime traps.
        for c in (1, 0, 561, 1729, 1807, 2**31):
            assert not is_probable_prime(c)


class TestCountCoprimeInRange:
    def test_totient_of_30(self):
        assert count_coprime_in_range(1, 30, (2, 3, 5)) == 8

    def test_family_window(self):
        assert count_coprime_in_range(6, 59, (2, 3, 5)) == 15

    def test_empty_range(self):
        assert count_coprime_in_range(10, 9, (2,)) == 0

    def test_no_primes_counts_everything(self):
        assert count_coprime_in_range(4, 9, ()) == 6

    def test_rejects_duplicates(self):
        with pytest.raises(InputError):
            count_coprime_in_range(1, 10, (2, 2))

    def test_rejects_nonprime_small(self):
        with pytest.raises(InputError):
            count_coprime_in_range(1, 10, (1, 3))

    @given(
        lo=st.integers(min_value=-(10**6), max_value=10**6),
        width=st.integers(min_value=0, max_value=10**4),
        primes=st.lists(st.sampled_from([2, 3, 5, 7, 11, 13]), unique=True),
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_force_scan(self, lo, width, primes):
        hi = lo + width
        modulus = math.prod(primes) if primes else 1
        brute = sum(1 for k in range(lo, hi + 1) if math.gcd(k, modulus) == 1)
        assert count_coprime_in_range(lo, hi, tuple(primes)) == brute

    def test_generator_agrees_with_count(self):
        vals = list(coprime_in_range(6, 59, 30))
        assert vals == sorted(vals)
        assert len(vals) == 15
        assert vals[0] == 7 and vals[-1] == 59


class TestHarmonicSum:
    def test_235(self):
        assert harmonic_sum([2, 3, 5]) == Fraction(31, 30)

    def test_empty(self):
        assert harmonic_sum([]) == 0

    def test_sylvester_prefix(self):
        assert harmonic_sum([2, 3, 7, 43]) == Fraction(1805, 1806)

    def test_rejects_nonpositive(self):
        with pytest.raises(InputError):
            harmonic_sum([2, 0, 3])

    @given(st.lists(st.integers(min_value=1, max_value=10**6), max_size=12))
    @settings(max_examples=100, deadline=None)
    def test_exactness(self, orders):
        total = harmonic_sum(orders)
        assert total == sum(Fraction(1, m) for m in orders)


_rats = st.fractions(
    min_value=-100, max_value=100, max_denominator=1_000_000
)


class TestRatArithmetic:
    @given(a=_rats, b=_rats, c=_rats)
    @settings(max_examples=200, deadline=None)
    def test_field_axioms_on_triples(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a

    @given(x=_rats)
    @settings(max_examples=100, deadline=None)
    def test_normalization_idempotent(self, x):
        y = Fraction(x.numerator, x.denominator)
        assert y.numerator == x.numerator and y.denominator == x.denominator
        assert y.denominator > 0
        assert math.gcd(y.numerator, y.denominator) == 1
