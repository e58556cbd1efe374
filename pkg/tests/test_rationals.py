import random
from fractions import Fraction

import pytest

from gmbs import rationals
from gmbs.errors import (
    DivisionByZero,
    NonPositiveInput,
    ZeroDenominator,
    ZeroToNegativePower,
)


def random_rational(rng, num_bound=99, den_bound=99):
    return Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))


def long_division_digits(num, den, count):
    """First `count` digits of num/den after the point, plus the integer part.

    Pure integer long division; independent of Fraction's division.
    """
    assert num >= 0 and den > 0
    digits = []
    rest = num % den
    for _ in range(count):
        rest *= 10
        digits.append(rest // den)
        rest %= den
    return num // den, digits


class TestNormalize:
    def test_reduces(self):
        assert rationals.rat_normalize(6, 4) == Fraction(3, 2)

    def test_moves_sign_to_numerator(self):
        v = rationals.rat_normalize(-2, -4)
        assert (v.numerator, v.denominator) == (1, 2)

    def test_zero_is_canonical(self):
        v = rationals.rat_normalize(0, 7)
        assert (v.numerator, v.denominator) == (0, 1)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            rationals.rat_normalize(1, 0)

    def test_idempotent(self):
        rng = random.Random(11)
        for _ in range(1000):
            v = random_rational(rng)
            again = rationals.rat_normalize(v.numerator, v.denominator)
            assert (again.numerator, again.denominator) == (v.numerator, v.denominator)


class TestArith:
    def test_add(self):
        assert rationals.rat_arith("add", Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)

    def test_sub(self):
        assert rationals.rat_arith("sub", Fraction(1, 2), Fraction(1, 3)) == Fraction(1, 6)

    def test_mul_inverse_pair(self):
        assert rationals.rat_arith("mul", Fraction(3, 2), Fraction(2, 3)) == 1

    def test_div_matches_long_division_oracle(self):
        x, y = Fraction(15, 2), Fraction(9, 2)
        q = rationals.rat_arith("div", x, y)
        assert q == Fraction(5, 3)
        # the quotient's decimal expansion must match the expansion of the
        # cross-multiplied integer pair, digit for digit
        oracle = long_division_digits(x.numerator * y.denominator, x.denominator * y.numerator, 40)
        assert long_division_digits(q.numerator, q.denominator, 40) == oracle

    def test_div_by_zero(self):
        with pytest.raises(DivisionByZero):
            rationals.rat_arith("div", Fraction(1), Fraction(0))

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            rationals.rat_arith("mod", Fraction(1), Fraction(1))

    def test_field_laws(self):
        rng = random.Random(5)
        for _ in range(10_000):
            x, y, z = (random_rational(rng) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert x * (y + z) == x * y + x * z


class TestPow:
    def test_examples(self):
        assert rationals.rat_pow(Fraction(2), 3) == 8
        assert rationals.rat_pow(Fraction(2), -1) == Fraction(1, 2)
        assert rationals.rat_pow(Fraction(3, 2), 2) == Fraction(9, 4)
        assert rationals.rat_pow(Fraction(7, 3), 0) == 1

    def test_zero_to_negative(self):
        with pytest.raises(ZeroToNegativePower):
            rationals.rat_pow(Fraction(0), -2)

    def test_exponent_addition(self):
        rng = random.Random(6)
        for _ in range(500):
            x = random_rational(rng)
            if x == 0:
                continue
            a, b = rng.randint(-64, 64), rng.randint(-64, 64)
            assert rationals.rat_pow(x, a + b) == rationals.rat_pow(x, a) * rationals.rat_pow(x, b)


class TestStripPrimes:
    def test_complete_factorization(self):
        assert rationals.strip_primes(12, (2, 3)) == ({2: 2, 3: 1}, 1)

    def test_leftover(self):
        assert rationals.strip_primes(20, (2,)) == ({2: 2}, 5)

    def test_unit(self):
        assert rationals.strip_primes(1, (2, 3)) == ({}, 1)

    def test_nonpositive(self):
        with pytest.raises(NonPositiveInput):
            rationals.strip_primes(0, (2,))

    def test_reconstruction(self):
        rng = random.Random(7)
        primes = (2, 3, 5, 7)
        for _ in range(2000):
            x = rng.randint(1, 10**6)
            exponents, rest = rationals.strip_primes(x, primes)
            product = rest
            for p, e in exponents.items():
                product *= p**e
            assert product == x
            for p in primes:  # coprimality by trial division
                assert rest % p != 0


class TestPrimes:
    def test_is_prime_small(self):
        primes_to_50 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
        assert {p for p in range(51) if rationals.is_prime(p)} == primes_to_50

    def test_prime_set_accepts_sorted_primes(self):
        assert rationals.prime_set([2, 5, 11]) == (2, 5, 11)

    def test_prime_set_rejects_composites(self):
        with pytest.raises(ValueError):
            rationals.prime_set([2, 4])

    def test_prime_set_rejects_unsorted(self):
        with pytest.raises(ValueError):
            rationals.prime_set([3, 2])


class TestJson:
    def test_rational_wire_shape(self):
        assert rationals.rat_to_json(Fraction(-35, 2)) == {"num": "-35", "den": "2"}
        assert rationals.rat_from_json({"num": "-35", "den": "2"}) == Fraction(-35, 2)

    def test_int_roundtrip(self):
        for v in (0, 1, -1, 2**100, -(2**100)):
            assert rationals.int_from_json(rationals.int_to_json(v)) == v

    def test_rational_roundtrip(self):
        rng = random.Random(8)
        for _ in range(200):
            v = random_rational(rng, 10**6, 10**6)
            assert rationals.rat_from_json(rationals.rat_to_json(v)) == v

    @pytest.mark.parametrize(
        "bad", ["1.5", "01", "--2", "", 3, None, {"num": "1"}, {"num": "1", "den": "0"}]
    )
    def test_malformed(self, bad):
        with pytest.raises((ValueError, ZeroDenominator)):
            if isinstance(bad, dict):
                rationals.rat_from_json(bad)
            else:
                rationals.int_from_json(bad)
