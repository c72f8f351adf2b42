import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fporbits.fields import (
    MAX_PRIME_EXCLUSIVE,
    PrimeFieldCtx,
    divisors_from_factorization,
    factor_integer,
    is_prime,
    mul_order,
)


def naive_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class TestIsPrime:
    def test_small_range_matches_trial_division(self):
        for n in range(2000):
            assert is_prime(n) == naive_is_prime(n), n

    def test_carmichael_numbers_rejected(self):
        for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265):
            assert not is_prime(n)

    def test_known_large_primes(self):
        assert is_prime(2**31 - 1)
        assert is_prime(2**61 - 1)
        assert is_prime(10**9 + 7)
        assert is_prime(999983)

    def test_known_large_composites(self):
        assert not is_prime((2**31 - 1) * (2**31 - 1))
        assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7
        assert not is_prime(10**18 + 5)  # divisible by 3

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=200)
    def test_agrees_with_trial_division(self, n):
        assert is_prime(n) == naive_is_prime(n)


class TestFactorInteger:
    def test_frozen_example(self):
        assert factor_integer(720720) == [
            (2, 4),
            (3, 2),
            (5, 1),
            (7, 1),
            (11, 1),
            (13, 1),
        ]

    def test_one(self):
        assert factor_integer(1) == []

    def test_primes_map_to_themselves(self):
        assert factor_integer(999983) == [(999983, 1)]

    def test_prime_power_beyond_trial_division(self):
        p = 1000003
        assert factor_integer(p * p) == [(p, 2)]

    def test_semiprime_of_large_primes(self):
        a, b = 1000003, 1000033
        assert factor_integer(a * b) == [(a, 1), (b, 1)]

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            factor_integer(0)

    @given(st.integers(min_value=1, max_value=10**9))
    @settings(max_examples=100)
    def test_reconstructs_input(self, n):
        fac = factor_integer(n)
        prod = 1
        for p, e in fac:
            assert is_prime(p)
            prod *= p**e
        assert prod == n
        assert fac == sorted(fac)


class TestDivisors:
    def test_720720(self):
        divs = divisors_from_factorization(factor_integer(720720))
        assert len(divs) == 240
        assert divs[0] == 1 and divs[-1] == 720720
        assert all(720720 % d == 0 for d in divs)

    def test_prime(self):
        assert divisors_from_factorization([(13, 1)]) == [1, 13]

    def test_unit(self):
        assert divisors_from_factorization([]) == [1]


class TestPrimeFieldCtx:
    def test_rejects_bad_moduli(self):
        for bad in (0, 1, 2, 4, 9, 15, MAX_PRIME_EXCLUSIVE + 1):
            with pytest.raises(ValueError):
                PrimeFieldCtx(bad)
        with pytest.raises(TypeError):
            PrimeFieldCtx(7.0)

    def test_basic_arithmetic(self):
        F = PrimeFieldCtx(7)
        assert F.add(5, 4) == 2
        assert F.sub(2, 5) == 4
        assert F.neg(3) == 4 and F.neg(0) == 0
        assert F.mul(3, 5) == 1
        assert F.inv(3) == 5
        assert F.pow_el(3, 6) == 1
        assert F.pow_el(3, -1) == 5
        assert F.coerce(-1) == 6
        assert list(F.elements()) == list(range(7))
        with pytest.raises(ZeroDivisionError):
            F.inv(0)
        with pytest.raises(TypeError):
            F.coerce(True)

    def test_context_equality_and_protocol(self):
        F = PrimeFieldCtx(13)
        assert F == PrimeFieldCtx(13) and F != PrimeFieldCtx(11)
        assert F.char == F.size == 13
        assert F.order == 12
        assert F.zero == 0 and F.one == 1
        assert F.to_int(5) == 5 and F.from_int(5) == 5
        with pytest.raises(ValueError):
            F.from_int(13)

    def test_factorization_lazy_and_thread_safe(self):
        F = PrimeFieldCtx(104729)
        results = []

        def grab():
            results.append(tuple(F.factorization))

        threads = [threading.Thread(target=grab) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(set(results)) == 1
        prod = 1
        for p, e in results[0]:
            prod *= p**e
        assert prod == 104728

    def test_primitive_root(self):
        assert PrimeFieldCtx(7).primitive_root() == 3
        assert PrimeFieldCtx(11).primitive_root() == 2
        g = PrimeFieldCtx(104729).primitive_root()
        assert mul_order(PrimeFieldCtx(104729), g) == 104728

    def test_rand_elem_in_range(self):
        F = PrimeFieldCtx(17)
        rng = random.Random(0)
        assert all(0 <= F.rand_elem(rng) < 17 for _ in range(50))


class TestMulOrder:
    def test_frozen_examples_mod_7(self):
        F = PrimeFieldCtx(7)
        assert mul_order(F, 2) == 3
        assert mul_order(F, 3) == 6

    def test_identity_and_minus_one(self):
        F = PrimeFieldCtx(101)
        assert mul_order(F, 1) == 1
        assert mul_order(F, 100) == 2

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            mul_order(PrimeFieldCtx(7), 0)

    def test_brute_force_agreement(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23):
            F = PrimeFieldCtx(p)
            for a in range(1, p):
                o = mul_order(F, a)
                # independent check: o is minimal with a**o == 1
                assert pow(a, o, p) == 1
                assert all(pow(a, m, p) != 1 for m in range(1, o))

    @given(st.sampled_from([101, 103, 997, 104729]), st.data())
    @settings(max_examples=60)
    def test_order_divides_group_order(self, p, data):
        F = PrimeFieldCtx(p)
        a = data.draw(st.integers(min_value=1, max_value=p - 1))
        o = mul_order(F, a)
        assert (p - 1) % o == 0
        assert pow(a, o, p) == 1
