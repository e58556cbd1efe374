"""Exception types shared across the package."""


class GmbsError(Exception):
    """Base class for every error this package raises deliberately."""


# -- exact scalar arithmetic ------------------------------------------------

class ZeroDenominator(GmbsError):
    """Rational constructed with denominator zero."""


class DivisionByZero(GmbsError):
    """Exact division by zero."""


class ZeroToNegativePower(GmbsError):
    """0**k requested with k < 0."""


class NonPositiveInput(GmbsError):
    """A positive integer was required."""


# -- group parameters -------------------------------------------------------

class ModulusOutOfRange(GmbsError):
    """Modulus outside the accepted range [2, 2**31]."""


# -- word grammar -----------------------------------------------------------

class WordError(GmbsError):
    """Base for word-parsing failures; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class WordSyntaxError(WordError):
    """Token does not match the word grammar."""


class IndexOutOfRange(WordError):
    """q-generator index exceeds the group's rank."""


class ZeroExponent(WordError):
    """Letters must carry a nonzero exponent."""


# -- protocols --------------------------------------------------------------

class CommutationViolation(GmbsError):
    """The two parties' key computations disagree: the secrets do not commute."""


# -- attacks ----------------------------------------------------------------

class NotConjugate(GmbsError):
    """A claimed conjugate pair cannot be conjugate."""


class Inconsistent(GmbsError):
    """The conjugacy system is contradictory; the solution promise is violated."""


class NoExponentVector(GmbsError):
    """No integer exponent vector of the moduli produces the given rational."""


class NotAComplement(GmbsError):
    """Subgroup generators do not fit any single conjugate of the free part."""


class DegeneratePublic(GmbsError):
    """Public data makes the attack's division impossible."""


class MembershipViolation(GmbsError):
    """A recovered coordinate falls outside the localization subring."""


class SearchSpaceTooLarge(GmbsError):
    """Brute-force grid exceeds the allowed size."""
