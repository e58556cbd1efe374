"""Honest simulations of two key-exchange protocols over the platform group.

Commutator key exchange: both parties publish tuples of group elements,
each picks a private product of their own tuple, and each publishes the
other's tuple conjugated by that private element.  The shared key is the
commutator of the two private elements, which either side can assemble
from the other's published conjugates.

Non-commutative Diffie-Hellman: the parties agree on a public base g and a
public subgroup Omega of pairwise-commuting elements, pick secrets a, b in
Omega, exchange g^a and g^b, and share g^(ab) = (g^b)^a = (g^a)^b.

Omega comes in three shapes, all abelian: the free part M (elements with
zero N coordinate), the normal part N (zero free part), and a conjugated
complement M^r = {(alpha, r * (1 - chi(alpha)))} for a rational r.

Generated instances keep the ground-truth secrets beside the public data
so attack runs can be scored by exact key comparison; the attack code
itself only ever receives the public part.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import CommutationViolation
from .group import Group, GroupElement
from .rationals import rat_from_json, rat_to_json
from .words import evaluate, random_word

Factorization = tuple[tuple[int, int], ...]  # (tuple index, sign +-1) pairs


# -- per-trial seed derivation ------------------------------------------

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer: a 64-bit bijection with good diffusion."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Seed for one trial: splitmix64 of the master stepped index+1 times.

    Distinct indices give distinct seeds (the step constant is odd, the
    finalizer is a bijection).  Streams are reproducible within this build
    only; no cross-implementation equality is promised.
    """
    return _mix64(master_seed + (trial_index + 1) * _GAMMA)


# -- commutator key exchange ---------------------------------------------


@dataclass(frozen=True)
class AAGPublic:
    """Everything the wire carries: the two tuples and their conjugates."""

    group: Group
    a_tuple: tuple[GroupElement, ...]
    b_tuple: tuple[GroupElement, ...]
    a_conj: tuple[GroupElement, ...]  # a_tuple conjugated by Bob's secret
    b_conj: tuple[GroupElement, ...]  # b_tuple conjugated by Alice's secret


@dataclass(frozen=True)
class AAGInstance:
    public: AAGPublic
    alice_factors: Factorization
    bob_factors: Factorization
    alice_secret: GroupElement
    bob_secret: GroupElement
    shared_key: GroupElement


def _factor_product(
    group: Group, elements: tuple[GroupElement, ...], factors: Factorization
) -> GroupElement:
    acc = group.identity
    for index, sign in factors:
        e = elements[index]
        acc = group.mul(acc, e if sign > 0 else group.inv(e))
    return acc


def assemble_aag(
    group: Group,
    a_tuple: tuple[GroupElement, ...],
    b_tuple: tuple[GroupElement, ...],
    alice_factors: Factorization,
    bob_factors: Factorization,
) -> AAGInstance:
    """Fill in every derived field honestly from tuples and factorizations."""
    alice_secret = _factor_product(group, a_tuple, alice_factors)
    bob_secret = _factor_product(group, b_tuple, bob_factors)
    public = AAGPublic(
        group=group,
        a_tuple=a_tuple,
        b_tuple=b_tuple,
        a_conj=tuple(group.conj(a, bob_secret) for a in a_tuple),
        b_conj=tuple(group.conj(b, alice_secret) for b in b_tuple),
    )
    return AAGInstance(
        public=public,
        alice_factors=alice_factors,
        bob_factors=bob_factors,
        alice_secret=alice_secret,
        bob_secret=bob_secret,
        shared_key=group.commutator(alice_secret, bob_secret),
    )


def aag_generate(
    group: Group,
    n1: int,
    n2: int,
    l: int,
    m: int,
    word_len: int,
    rng: random.Random,
) -> AAGInstance:
    """Random instance: tuples from random words, uniform factorizations.

    Regenerates from scratch if either private element collapses to the
    identity (such instances are trivially broken and say nothing).
    """
    if min(n1, n2, l, m, word_len) < 1:
        raise ValueError("n1, n2, l, m and word_len must all be >= 1")
    while True:
        a_tuple = tuple(
            evaluate(group, random_word(group, word_len, rng)) for _ in range(n1)
        )
        b_tuple = tuple(
            evaluate(group, random_word(group, word_len, rng)) for _ in range(n2)
        )
        alice_factors = tuple(
            (rng.randrange(n1), rng.choice((1, -1))) for _ in range(l)
        )
        bob_factors = tuple((rng.randrange(n2), rng.choice((1, -1))) for _ in range(m))
        instance = assemble_aag(group, a_tuple, b_tuple, alice_factors, bob_factors)
        if not instance.alice_secret.is_identity() and not instance.bob_secret.is_identity():
            return instance


def aag_alice_key(instance: AAGInstance) -> GroupElement:
    """Alice's key: her factorization applied to Bob's published conjugates,
    left-multiplied by the inverse of her secret."""
    group = instance.public.group
    conjugated = _factor_product(group, instance.public.a_conj, instance.alice_factors)
    return group.mul(group.inv(instance.alice_secret), conjugated)


def aag_bob_key(instance: AAGInstance) -> GroupElement:
    """Bob's key: his factorization applied to Alice's published conjugates,
    inverted, right-multiplied by his secret."""
    group = instance.public.group
    conjugated = _factor_product(group, instance.public.b_conj, instance.bob_factors)
    return group.mul(group.inv(conjugated), instance.bob_secret)


# -- non-commutative Diffie-Hellman ---------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Which commuting subgroup the secrets come from: "m", "n" or "conj".

    For "conj" the conjugation parameter r is carried along; r may be any
    rational, localization membership is not required of it.
    """

    variant: str
    r: Fraction | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("m", "n", "conj"):
            raise ValueError(f"unknown subgroup variant {self.variant!r}")
        if (self.variant == "conj") != (self.r is not None):
            raise ValueError("r is carried exactly by the conj variant")


@dataclass(frozen=True)
class KoLeePublic:
    group: Group
    descriptor: SubgroupDescriptor
    base: GroupElement
    alice_public: GroupElement  # base conjugated by Alice's secret
    bob_public: GroupElement  # base conjugated by Bob's secret


@dataclass(frozen=True)
class KoLeeInstance:
    public: KoLeePublic
    alice_secret: GroupElement
    bob_secret: GroupElement
    shared_key: GroupElement


def sample_in_subgroup(
    group: Group,
    descriptor: SubgroupDescriptor,
    rng: random.Random,
    exp_bound: int,
    num_bound: int,
) -> GroupElement:
    """Random member of Omega; for the "m" and "conj" shapes the free part
    is resampled until it acts nontrivially (chi != 1)."""
    zeros = (0,) * group.n
    if descriptor.variant == "n":
        return GroupElement(zeros, group.random_element(rng, exp_bound, num_bound).d)
    while True:
        alpha = tuple(rng.randint(-exp_bound, exp_bound) for _ in range(group.n))
        t = group.chi(alpha)
        if t != 1:
            break
    if descriptor.variant == "m":
        return GroupElement(alpha, Fraction(0))
    assert descriptor.r is not None
    return GroupElement(alpha, descriptor.r * (1 - t))


def kolee_generate(
    group: Group,
    case: str,
    rng: random.Random,
    exp_bound: int = 3,
    num_bound: int = 20,
) -> KoLeeInstance:
    """Random non-degenerate instance for the given subgroup case.

    The base is resampled until its N coordinate is nonzero and its free
    part acts nontrivially; for the conj case the base is additionally
    resampled while c - r + r*s vanishes.  Honest parties never publish
    those degenerate bases: they stall the exchange or leak outright.
    """
    if case == "conj":
        while True:
            r = group.random_element(rng, exp_bound, num_bound).d
            if r != 0:
                break
        descriptor = SubgroupDescriptor("conj", r)
    else:
        descriptor = SubgroupDescriptor(case)
    while True:
        base = group.random_element(rng, exp_bound, num_bound)
        s = group.chi(base.alpha)
        if base.d == 0 or s == 1:
            continue
        if descriptor.variant == "conj":
            assert descriptor.r is not None
            if base.d - descriptor.r + descriptor.r * s == 0:
                continue
        break
    alice_secret = sample_in_subgroup(group, descriptor, rng, exp_bound, num_bound)
    bob_secret = sample_in_subgroup(group, descriptor, rng, exp_bound, num_bound)
    public = KoLeePublic(
        group=group,
        descriptor=descriptor,
        base=base,
        alice_public=group.conj(base, alice_secret),
        bob_public=group.conj(base, bob_secret),
    )
    instance = KoLeeInstance(
        public=public,
        alice_secret=alice_secret,
        bob_secret=bob_secret,
        shared_key=group.conj(public.bob_public, alice_secret),
    )
    kolee_shared_key(instance)  # commutation sanity check
    return instance


def kolee_shared_key(instance: KoLeeInstance) -> GroupElement:
    """Both parties' computations of the key, asserted equal."""
    group = instance.public.group
    via_alice = group.conj(instance.public.bob_public, instance.alice_secret)
    via_bob = group.conj(instance.public.alice_public, instance.bob_secret)
    if via_alice != via_bob:
        raise CommutationViolation(
            "the parties' keys differ; the secrets do not commute"
        )
    return via_alice


# -- instance (de)serialization -------------------------------------------


def descriptor_to_json(descriptor: SubgroupDescriptor) -> dict:
    obj: dict = {"variant": descriptor.variant}
    if descriptor.r is not None:
        obj["r"] = rat_to_json(descriptor.r)
    return obj


def descriptor_from_json(obj: object) -> SubgroupDescriptor:
    if not isinstance(obj, dict) or "variant" not in obj:
        raise ValueError(f"malformed subgroup descriptor: {obj!r}")
    variant = obj["variant"]
    r = rat_from_json(obj["r"]) if "r" in obj else None
    return SubgroupDescriptor(variant, r)


def _elements_to_json(group: Group, elements: tuple[GroupElement, ...]) -> list:
    return [group.element_to_json(e) for e in elements]


def _elements_from_json(group: Group, obj: object) -> tuple[GroupElement, ...]:
    if not isinstance(obj, list):
        raise ValueError(f"expected a list of elements, got {obj!r}")
    return tuple(group.element_from_json(e) for e in obj)


def instance_to_json(
    instance: AAGInstance | KoLeeInstance, include_secret: bool = True
) -> dict:
    """Instance file payload: a protocol tag, a public section, and (unless
    stripped) a secret section with the ground truth.  Field order is fixed
    for diff-ability."""
    if isinstance(instance, AAGInstance):
        pub = instance.public
        group = pub.group
        payload: dict = {
            "protocol": "aag",
            "public": {
                "params": group.to_json(),
                "a_tuple": _elements_to_json(group, pub.a_tuple),
                "b_tuple": _elements_to_json(group, pub.b_tuple),
                "a_conj": _elements_to_json(group, pub.a_conj),
                "b_conj": _elements_to_json(group, pub.b_conj),
            },
        }
        if include_secret:
            payload["secret"] = {
                "alice_factors": [[i, s] for i, s in instance.alice_factors],
                "bob_factors": [[i, s] for i, s in instance.bob_factors],
                "alice_secret": group.element_to_json(instance.alice_secret),
                "bob_secret": group.element_to_json(instance.bob_secret),
                "shared_key": group.element_to_json(instance.shared_key),
            }
        return payload
    pub = instance.public
    group = pub.group
    payload = {
        "protocol": "kolee",
        "public": {
            "params": group.to_json(),
            "descriptor": descriptor_to_json(pub.descriptor),
            "base": group.element_to_json(pub.base),
            "alice_public": group.element_to_json(pub.alice_public),
            "bob_public": group.element_to_json(pub.bob_public),
        },
    }
    if include_secret:
        payload["secret"] = {
            "alice_secret": group.element_to_json(instance.alice_secret),
            "bob_secret": group.element_to_json(instance.bob_secret),
            "shared_key": group.element_to_json(instance.shared_key),
        }
    return payload


def _factors_from_json(obj: object) -> Factorization:
    if not isinstance(obj, list):
        raise ValueError(f"malformed factorization: {obj!r}")
    factors = []
    for entry in obj:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, int) for v in entry)
            or entry[1] not in (1, -1)
        ):
            raise ValueError(f"malformed factorization entry: {entry!r}")
        factors.append((entry[0], entry[1]))
    return tuple(factors)


def load_instance(
    obj: object,
) -> tuple[str, AAGPublic | KoLeePublic, AAGInstance | KoLeeInstance | None]:
    """Read an instance payload; the secret section is optional.

    Returns (protocol, public part, full instance or None when stripped).
    """
    if not isinstance(obj, dict) or "protocol" not in obj or "public" not in obj:
        raise ValueError("malformed instance file: protocol/public sections missing")
    protocol = obj["protocol"]
    pub_obj = obj["public"]
    if not isinstance(pub_obj, dict):
        raise ValueError("malformed instance file: public section is not an object")
    secret = obj.get("secret")
    if secret is not None and not isinstance(secret, dict):
        raise ValueError("malformed instance file: secret section is not an object")
    group = Group.from_json(pub_obj.get("params"))
    if protocol == "aag":
        public = AAGPublic(
            group=group,
            a_tuple=_elements_from_json(group, pub_obj.get("a_tuple")),
            b_tuple=_elements_from_json(group, pub_obj.get("b_tuple")),
            a_conj=_elements_from_json(group, pub_obj.get("a_conj")),
            b_conj=_elements_from_json(group, pub_obj.get("b_conj")),
        )
        if secret is None:
            return "aag", public, None
        instance = AAGInstance(
            public=public,
            alice_factors=_factors_from_json(secret.get("alice_factors")),
            bob_factors=_factors_from_json(secret.get("bob_factors")),
            alice_secret=group.element_from_json(secret.get("alice_secret")),
            bob_secret=group.element_from_json(secret.get("bob_secret")),
            shared_key=group.element_from_json(secret.get("shared_key")),
        )
        return "aag", public, instance
    if protocol == "kolee":
        public = KoLeePublic(
            group=group,
            descriptor=descriptor_from_json(pub_obj.get("descriptor")),
            base=group.element_from_json(pub_obj.get("base")),
            alice_public=group.element_from_json(pub_obj.get("alice_public")),
            bob_public=group.element_from_json(pub_obj.get("bob_public")),
        )
        if secret is None:
            return "kolee", public, None
        instance = KoLeeInstance(
            public=public,
            alice_secret=group.element_from_json(secret.get("alice_secret")),
            bob_secret=group.element_from_json(secret.get("bob_secret")),
            shared_key=group.element_from_json(secret.get("shared_key")),
        )
        return "kolee", public, instance
    raise ValueError(f"unknown protocol {protocol!r}")
