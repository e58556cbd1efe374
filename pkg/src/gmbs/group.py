"""Generalized metabelian Baumslag-Solitar groups with exact arithmetic.

The platform group is

    G = < q_1, ..., q_n, b | [q_i, q_j] = 1,  q_i^-1 b q_i = b^(m_i) >

for integer moduli m_1..m_n >= 2.  G splits as a semidirect product of the
free abelian group M = <q_1..q_n> acting on N = Z[m_1^(+-1), ..., m_n^(+-1)],
the subring of rationals whose denominators factor over the primes dividing
the moduli.  An element q_1^a1 ... q_n^an b^d is stored as the pair
(alpha, d) with alpha in Z^n and d in N.  Conjugating b by q_i raises it to
the m_i-th power, so alpha acts on the N coordinate by multiplication with

    chi(alpha) = prod_i m_i^alpha_i,

and the group law in coordinates reads

    (alpha1, d1) * (alpha2, d2) = (alpha1 + alpha2, d1 * chi(alpha2) + d2).

Everything here is exact: exponents are Python ints, N coordinates are
fractions.  No floating point anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ModulusOutOfRange
from .rationals import (
    factorize,
    int_from_json,
    prime_set,
    rat_from_json,
    rat_to_json,
    strip_primes,
)

MAX_MODULUS = 2**31


@dataclass(frozen=True)
class GroupElement:
    """The element q_1^alpha[0] ... q_n^alpha[n-1] * b^d."""

    alpha: tuple[int, ...]
    d: Fraction

    def is_identity(self) -> bool:
        return self.d == 0 and not any(self.alpha)


class Group:
    """A group of the family above, fixed by its tuple of moduli.

    Construction factors every modulus by trial division (hence the 2**31
    bound) and keeps the matrix of prime multiplicities; the attacks and
    the localization-membership test both read it.
    """

    def __init__(self, moduli: Iterable[int]):
        mods = tuple(int(m) for m in moduli)
        if not mods:
            raise ValueError("at least one modulus is required")
        for m in mods:
            if m < 2 or m > MAX_MODULUS:
                raise ModulusOutOfRange(f"modulus {m} outside [2, 2**31]")
        factorizations = [factorize(m) for m in mods]
        support = prime_set(sorted(set().union(*factorizations)))
        self.moduli: tuple[int, ...] = mods
        self.prime_support: tuple[int, ...] = support
        self.valuations: dict[int, tuple[int, ...]] = {
            p: tuple(f.get(p, 0) for f in factorizations) for p in support
        }

    @property
    def n(self) -> int:
        return len(self.moduli)

    @property
    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.n, Fraction(0))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Group) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    def __repr__(self) -> str:
        return f"Group(moduli={list(self.moduli)})"

    # -- the action of M on N ------------------------------------------

    def chi(self, alpha: Sequence[int]) -> Fraction:
        """The positive rational prod_i m_i^alpha_i the vector acts by."""
        if len(alpha) != self.n:
            raise ValueError(f"exponent vector must have length {self.n}")
        num = den = 1
        for m, a in zip(self.moduli, alpha):
            if a >= 0:
                num *= m**a
            else:
                den *= m**-a
        return Fraction(num, den)

    # -- group operations ----------------------------------------------

    def element(self, alpha: Sequence[int], d: Fraction | int) -> GroupElement:
        """Validated element constructor (length and localization checks)."""
        vec = tuple(int(a) for a in alpha)
        if len(vec) != self.n:
            raise ValueError(f"exponent vector must have length {self.n}")
        value = Fraction(d)
        if not self.contains_n(value):
            raise ValueError(f"{value} lies outside Z[{self.moduli} inverted]")
        return GroupElement(vec, value)

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        alpha = tuple(a + b for a, b in zip(x.alpha, y.alpha))
        return GroupElement(alpha, x.d * self.chi(y.alpha) + y.d)

    def inv(self, x: GroupElement) -> GroupElement:
        neg = tuple(-a for a in x.alpha)
        return GroupElement(neg, -x.d * self.chi(neg))

    def conj(self, g: GroupElement, x: GroupElement) -> GroupElement:
        """x^-1 g x, in closed form.

        Writing g = (sigma, c) and x = (tau, d), the conjugate keeps the
        free part sigma and moves the N coordinate to
        d * (1 - chi(sigma)) + c * chi(tau).
        """
        return GroupElement(
            g.alpha,
            x.d * (1 - self.chi(g.alpha)) + g.d * self.chi(x.alpha),
        )

    def commutator(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """a^-1 b^-1 a b; always lands in N (zero free part)."""
        return self.mul(self.mul(self.mul(self.inv(a), self.inv(b)), a), b)

    # -- the localization N ----------------------------------------------

    def contains_n(self, value: Fraction) -> bool:
        """True iff every prime factor of the denominator divides a modulus."""
        _, rest = strip_primes(value.denominator, self.prime_support)
        return rest == 1

    # -- sampling ---------------------------------------------------------

    def random_element(
        self, rng: random.Random, exp_bound: int, num_bound: int
    ) -> GroupElement:
        """Uniform element with |alpha_i| <= exp_bound and d = w / chi(gamma),
        |w| <= num_bound, gamma_i in [0, exp_bound]."""
        alpha = tuple(rng.randint(-exp_bound, exp_bound) for _ in range(self.n))
        gamma = tuple(rng.randint(0, exp_bound) for _ in range(self.n))
        w = rng.randint(-num_bound, num_bound)
        return GroupElement(alpha, Fraction(w) / self.chi(gamma))

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        return {"moduli": [str(m) for m in self.moduli]}

    @classmethod
    def from_json(cls, obj: object) -> "Group":
        if not isinstance(obj, dict) or "moduli" not in obj:
            raise ValueError(f"malformed group parameters: {obj!r}")
        return cls(int_from_json(m) for m in obj["moduli"])

    def element_to_json(self, x: GroupElement) -> dict:
        return {"alpha": [str(a) for a in x.alpha], "d": rat_to_json(x.d)}

    def element_from_json(self, obj: object) -> GroupElement:
        if not isinstance(obj, dict) or set(obj) != {"alpha", "d"}:
            raise ValueError(f"malformed group element: {obj!r}")
        alpha = [int_from_json(a) for a in obj["alpha"]]
        return self.element(alpha, rat_from_json(obj["d"]))
