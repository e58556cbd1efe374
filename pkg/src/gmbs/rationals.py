"""Exact scalar arithmetic and prime-support utilities.

Plain ``int`` and :class:`fractions.Fraction` carry all values in this
package: both are immutable and arbitrary precision, and Fraction reduces
to lowest terms with a positive denominator at construction, so equality
is structural everywhere.  This module pins down the contracts the rest
of the code relies on (explicit error types, factoring over a prime
support, JSON codecs) rather than reimplementing the arithmetic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DivisionByZero,
    NonPositiveInput,
    ZeroDenominator,
    ZeroToNegativePower,
)

Rational = Fraction

_INT_RE = re.compile(r"0|-?[1-9][0-9]*")


def rat_normalize(num: int, den: int) -> Fraction:
    """Canonical coprime form of num/den with positive denominator."""
    if den == 0:
        raise ZeroDenominator("denominator must be nonzero")
    return Fraction(num, den)


def rat_arith(op: str, x: Fraction, y: Fraction) -> Fraction:
    """Exact field arithmetic; op is one of add, sub, mul, div."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y == 0:
            raise DivisionByZero("division by zero")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def rat_pow(x: Fraction, k: int) -> Fraction:
    """Exact x**k; x**0 == 1."""
    if x == 0 and k < 0:
        raise ZeroToNegativePower("0 cannot be raised to a negative power")
    return x**k


def is_prime(p: int) -> bool:
    """Deterministic trial division; meant for small prime-support entries."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_set(primes: Iterable[int]) -> tuple[int, ...]:
    """Validated prime support: strictly increasing primes."""
    entries = tuple(primes)
    previous = 1
    for p in entries:
        if p <= previous:
            raise ValueError(f"prime support must be strictly increasing, got {entries}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        previous = p
    return entries


def strip_primes(x: int, primes: Sequence[int]) -> tuple[dict[int, int], int]:
    """Pull the given primes out of x: x == remainder * prod(p**e[p]).

    The remainder is coprime to every listed prime; primes with exponent
    zero are omitted from the map.
    """
    if x < 1:
        raise NonPositiveInput(f"expected a positive integer, got {x}")
    exponents: dict[int, int] = {}
    rest = x
    for p in primes:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            exponents[p] = e
    return exponents, rest


def factorize(m: int) -> dict[int, int]:
    """Complete prime factorization by trial division."""
    if m < 1:
        raise NonPositiveInput(f"expected a positive integer, got {m}")
    factors: dict[int, int] = {}
    rest = m
    p = 2
    while p * p <= rest:
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        factors[rest] = factors.get(rest, 0) + 1
    return factors


# -- JSON codecs: integers and rationals travel as decimal strings ----------

def int_to_json(value: int) -> str:
    return str(value)


def int_from_json(obj: object) -> int:
    if not isinstance(obj, str) or not _INT_RE.fullmatch(obj):
        raise ValueError(f"malformed integer literal: {obj!r}")
    return int(obj)


def rat_to_json(value: Fraction) -> dict[str, str]:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def rat_from_json(obj: object) -> Fraction:
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise ValueError(f"malformed rational: {obj!r}")
    num = int_from_json(obj["num"])
    den = int_from_json(obj["den"])
    if den == 0:
        raise ZeroDenominator("denominator must be nonzero")
    return Fraction(num, den)
