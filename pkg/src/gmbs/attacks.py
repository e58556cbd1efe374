"""Cryptanalysis of both protocols by exact linear algebra over Q.

Conjugacy in the platform group linearizes.  For g = (sigma, c),
h = (sigma', c') and an unknown x = (tau, d), the equation g^x = h forces
sigma' = sigma and, writing s = chi(sigma) and t = chi(tau), turns into
one affine equation over the rationals:

    d * (1 - s) + c * t = c'.

A simultaneous conjugacy instance therefore becomes a stack of such rows
in the two unknowns (d, t).  Two independent rows pin (d, t) down; the
exponent vector behind t is then read off the prime valuations of t.
This breaks the commutator key exchange: solve one system per published
conjugate tuple and take the commutator of the two recovered conjugators.
The recovered conjugators may differ from the parties' secrets, but the
key only depends on (chi(alpha), d) of each, which the rows determine.

For non-commutative Diffie-Hellman the secret lives in a known commuting
subgroup, and one equation suffices:

    free part M:        c * t = c'                       -> t, then alpha
    normal part N:      d * (1 - s) + c = c'             -> d directly
    complement M^r:     (c - r + r*s) * t = c' - r + s*r -> t, d = r(1-t)

The complement parameter r may lie outside the localization N; the
equations still determine the secret because a solution is promised to
exist (search problem, not decision problem).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegeneratePublic,
    Inconsistent,
    MembershipViolation,
    NoExponentVector,
    NotAComplement,
    NotConjugate,
    SearchSpaceTooLarge,
)
from .group import Group, GroupElement
from .protocols import AAGPublic, KoLeePublic, SubgroupDescriptor
from .rationals import strip_primes

UNIQUE = "unique"
AMBIGUOUS_LINE = "ambiguous-line"
AMBIGUOUS_ALL = "ambiguous-all"

# rank-1 representative scan gives up past this many candidates
_SCAN_LIMIT = 10**6


@dataclass(frozen=True)
class ConjRow:
    """One linearized conjugacy equation: coeff_d * d + coeff_t * t = rhs."""

    coeff_d: Fraction  # 1 - chi(sigma)
    coeff_t: Fraction  # c
    rhs: Fraction  # c'


@dataclass(frozen=True)
class ScspSolution:
    """A conjugator (alpha, d) with t = chi(alpha), plus how determined it was.

    unique: the rows had rank 2 and (t, d) is forced.
    ambiguous-line: rank 1, a canonical representative on the line.
    ambiguous-all: every element conjugates each g_i to h_i; the identity.
    """

    t: Fraction
    d: Fraction
    alpha: tuple[int, ...]
    status: str

    @property
    def element(self) -> GroupElement:
        return GroupElement(self.alpha, self.d)


@dataclass
class AttackReport:
    protocol: str
    statuses: dict[str, str]
    recovered: dict[str, GroupElement]
    recovered_key: GroupElement
    wall_time_us: int
    success: bool | None = None


def csp_row(group: Group, g: GroupElement, h: GroupElement) -> ConjRow:
    """Linearize one conjugacy equation g^x = h."""
    if g.alpha != h.alpha:
        raise NotConjugate(
            f"free parts differ ({g.alpha} vs {h.alpha}); no conjugator exists"
        )
    return ConjRow(coeff_d=1 - group.chi(g.alpha), coeff_t=g.d, rhs=h.d)


# -- exponent recovery from the action value --------------------------------


def recover_alpha(group: Group, t: Fraction) -> tuple[int, ...]:
    """Some integer vector alpha with chi(alpha) == t.

    Reads the prime valuations of t and solves the integer system
    V * alpha = v, where V holds the prime multiplicities of the moduli.
    With multiplicatively dependent moduli any solution is returned; they
    all act identically on N.
    """
    if t <= 0:
        raise NoExponentVector(f"no exponent vector acts by {t}")
    num_exp, rest = strip_primes(t.numerator, group.prime_support)
    if rest != 1:
        raise NoExponentVector(f"{t} has the unsupported prime factor {rest}")
    den_exp, rest = strip_primes(t.denominator, group.prime_support)
    if rest != 1:
        raise NoExponentVector(f"{t} has the unsupported prime factor {rest}")
    rows = [
        [Fraction(v) for v in group.valuations[p]] for p in group.prime_support
    ]
    rhs = [
        Fraction(num_exp.get(p, 0) - den_exp.get(p, 0)) for p in group.prime_support
    ]
    solved = _solve_rational(rows, rhs)
    if solved is None:
        raise NoExponentVector(f"valuation system for {t} is inconsistent")
    particular, kernel = solved
    alpha = _integral_point(particular, kernel)
    if alpha is None:
        raise NoExponentVector(f"valuation system for {t} has no integer solution")
    if group.chi(alpha) != t:  # pragma: no cover - internal consistency
        raise NoExponentVector(f"recovered vector does not act by {t}")
    return alpha


def _solve_rational(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Reduced row echelon solve; returns (particular solution, kernel basis)
    with free variables set to zero, or None when inconsistent."""
    m, n = len(rows), len(rows[0])
    aug = [rows[i][:] + [rhs[i]] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        scale = 1 / aug[r][col]
        aug[r] = [v * scale for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    particular = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        particular[col] = aug[i][n]
    free_cols = [c for c in range(n) if c not in pivots]
    kernel = []
    for fcol in free_cols:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -aug[i][fcol]
        kernel.append(vec)
    return particular, kernel


def _primitive(vec: list[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    lcm = 1
    for v in vec:
        lcm = lcm * v.denominator // _gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    return [v // g for v in ints]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _det(mat: list[list[Fraction]]) -> Fraction:
    work = [row[:] for row in mat]
    size = len(work)
    det = Fraction(1)
    for c in range(size):
        pivot = next((i for i in range(c, size) if work[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        det *= work[c][c]
        scale = 1 / work[c][c]
        for i in range(c + 1, size):
            if work[i][c] != 0:
                f = work[i][c] * scale
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return det


def _integral_point(
    particular: list[Fraction], kernel: list[list[Fraction]]
) -> tuple[int, ...] | None:
    """An integer point on particular + span(kernel), if one exists.

    Any rational solution's kernel coefficients have denominators dividing
    D * |det| for D the particular solution's common denominator and det a
    nonsingular minor of the (primitive, integer) kernel matrix; shifting a
    coefficient by 1 adds an integer vector.  Scanning the fractional grid
    of that size is therefore exhaustive.
    """
    if all(v.denominator == 1 for v in particular):
        return tuple(int(v) for v in particular)
    if not kernel:
        return None
    basis = [_primitive(vec) for vec in kernel]
    n, r = len(particular), len(basis)
    denom = 1
    for v in particular:
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    # pick r rows where the kernel matrix is nonsingular
    pivot_rows: list[int] = []
    work = [[Fraction(basis[j][i]) for j in range(r)] for i in range(n)]
    for col in range(r):
        pivot = next(
            (i for i in range(n) if i not in pivot_rows and work[i][col] != 0), None
        )
        if pivot is None:  # pragma: no cover - kernel vectors are independent
            return None
        pivot_rows.append(pivot)
        for i in range(n):
            if i != pivot and work[i][col] != 0:
                f = work[i][col] / work[pivot][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[pivot])]
    minor = [[Fraction(basis[j][i]) for j in range(r)] for i in pivot_rows]
    span = denom * abs(int(_det(minor)))
    for combo in itertools.product(range(span), repeat=r):
        candidate = list(particular)
        for coeff, vec in zip(combo, basis):
            if coeff:
                for i in range(n):
                    candidate[i] += Fraction(coeff, span) * vec[i]
        if all(v.denominator == 1 for v in candidate):
            return tuple(int(v) for v in candidate)
    return None


# -- simultaneous conjugacy solver ------------------------------------------


def solve_scsp(
    group: Group, pairs: list[tuple[GroupElement, GroupElement]]
) -> ScspSolution:
    """One conjugator for all pairs (g_i, h_i), h_i = g_i^x.

    A solution must exist (search-problem contract); contradictory rows or
    failed checks raise Inconsistent.  With rank-2 rows the conjugator's
    (t, d) is unique.  On a rank-1 line a canonical representative is
    returned: the forced coordinate plus t = 1 / d = 0 for the free one,
    falling back to a small-exponent scan when t = 1 pushes d outside the
    localization.  Rank 0 means every element works; the identity is
    returned.
    """
    if not pairs:
        raise ValueError("at least one conjugate pair is required")
    rows = [csp_row(group, g, h) for g, h in pairs]
    zeros = (0,) * group.n

    for row in rows:
        if row.coeff_d == 0 and row.coeff_t == 0 and row.rhs != 0:
            raise Inconsistent("zero coefficients with nonzero right-hand side")

    base = next((r for r in rows if r.coeff_d != 0 or r.coeff_t != 0), None)
    if base is None:
        solution = ScspSolution(Fraction(1), Fraction(0), zeros, AMBIGUOUS_ALL)
        return _verified(group, pairs, solution)

    partner = next(
        (
            r
            for r in rows
            if r.coeff_d * base.coeff_t != r.coeff_t * base.coeff_d
        ),
        None,
    )
    if partner is not None:
        det = base.coeff_d * partner.coeff_t - partner.coeff_d * base.coeff_t
        d = (base.rhs * partner.coeff_t - partner.rhs * base.coeff_t) / det
        t = (base.coeff_d * partner.rhs - partner.coeff_d * base.rhs) / det
        for row in rows:
            if row.coeff_d * d + row.coeff_t * t != row.rhs:
                raise Inconsistent("rows disagree with the unique (t, d)")
        alpha = recover_alpha(group, t)
        if not group.contains_n(d):
            raise Inconsistent(f"unique solution has d = {d} outside the localization")
        return _verified(group, pairs, ScspSolution(t, d, alpha, UNIQUE))

    # rank 1: every row is a multiple of base; check that including rhs
    for row in rows:
        scale = (
            row.coeff_d / base.coeff_d if base.coeff_d else row.coeff_t / base.coeff_t
        )
        if row.coeff_t != scale * base.coeff_t or row.rhs != scale * base.rhs:
            raise Inconsistent("proportional coefficients but conflicting sides")

    u, v, w = base.coeff_d, base.coeff_t, base.rhs
    if v == 0:
        d = w / u
        if not group.contains_n(d):
            raise Inconsistent(f"forced d = {d} lies outside the localization")
        solution = ScspSolution(Fraction(1), d, zeros, AMBIGUOUS_LINE)
    elif u == 0:
        t = w / v
        alpha = recover_alpha(group, t)
        solution = ScspSolution(t, Fraction(0), alpha, AMBIGUOUS_LINE)
    else:
        solution = _line_representative(group, u, v, w)
    return _verified(group, pairs, solution)


def _line_representative(
    group: Group, u: Fraction, v: Fraction, w: Fraction
) -> ScspSolution:
    """Deterministic point on the line u*d + v*t = w with t = chi(alpha)
    and d in the localization: scan alpha outward by 1-norm, zero first."""
    scanned = 0
    for alpha in _alpha_by_norm(group.n):
        scanned += 1
        if scanned > _SCAN_LIMIT:
            break
        t = group.chi(alpha)
        d = (w - v * t) / u
        if group.contains_n(d):
            return ScspSolution(t, d, alpha, AMBIGUOUS_LINE)
    raise Inconsistent("no admissible point found on the solution line")


def _alpha_by_norm(n: int):
    """All integer vectors of length n ordered by 1-norm, then lexicographically."""
    for norm in itertools.count():
        bucket = sorted(
            vec
            for vec in itertools.product(range(-norm, norm + 1), repeat=n)
            if sum(abs(c) for c in vec) == norm
        )
        yield from bucket


def _verified(
    group: Group,
    pairs: list[tuple[GroupElement, GroupElement]],
    solution: ScspSolution,
) -> ScspSolution:
    x = solution.element
    for g, h in pairs:
        if group.conj(g, x) != h:
            raise Inconsistent("candidate conjugator fails a pair check")
    return solution


# -- commutator key-exchange attack ------------------------------------------


def aag_attack(public: AAGPublic) -> AttackReport:
    """Break a commutator key-exchange instance from its public data.

    Solves the conjugacy system of Alice's published tuple for a stand-in
    of her secret, likewise for Bob, and commutes the two.  Solution
    statuses are recorded; degenerate instances report ambiguity instead
    of failing.
    """
    group = public.group
    start = time.perf_counter_ns()
    alice = solve_scsp(group, list(zip(public.b_tuple, public.b_conj)))
    bob = solve_scsp(group, list(zip(public.a_tuple, public.a_conj)))
    key = group.commutator(alice.element, bob.element)
    elapsed_us = (time.perf_counter_ns() - start) // 1000
    return AttackReport(
        protocol="aag",
        statuses={"alice_conjugator": alice.status, "bob_conjugator": bob.status},
        recovered={
            "alice_conjugator": alice.element,
            "bob_conjugator": bob.element,
        },
        recovered_key=key,
        wall_time_us=elapsed_us,
    )


# -- Diffie-Hellman attack ----------------------------------------------------


def derive_r(
    group: Group, omega_generators: list[GroupElement]
) -> SubgroupDescriptor:
    """Classify a commuting subgroup from its published generators.

    All free parts zero: the normal part N.  All N coordinates zero: the
    free part M.  Otherwise the generators must fit a single conjugated
    complement M^r, whose r is forced by any generator acting nontrivially:
    d = r * (1 - chi(alpha)) gives r = d / (1 - chi(alpha)).
    """
    if not omega_generators:
        raise ValueError("at least one subgroup generator is required")
    if all(not any(g.alpha) for g in omega_generators):
        return SubgroupDescriptor("n")
    if all(g.d == 0 for g in omega_generators):
        return SubgroupDescriptor("m")
    pivot = next((g for g in omega_generators if group.chi(g.alpha) != 1), None)
    if pivot is None:
        raise NotAComplement("no generator acts nontrivially; r is undetermined")
    r = pivot.d / (1 - group.chi(pivot.alpha))
    for g in omega_generators:
        if g.d != r * (1 - group.chi(g.alpha)):
            raise NotAComplement(f"generator {g} does not satisfy d = r(1 - chi)")
    return SubgroupDescriptor("conj", r)


def kolee_attack(
    group: Group,
    base: GroupElement,
    conjugated: GroupElement,
    descriptor: SubgroupDescriptor,
) -> tuple[GroupElement, str]:
    """Recover a secret a' with base^a' = conjugated from one exchange leg.

    Case split on the subgroup shape; see the module docstring for the
    three equations.  The returned element is verified by conjugation
    before it leaves this function.
    """
    if base.alpha != conjugated.alpha:
        raise NotConjugate("published conjugate changes the free part")
    s = group.chi(base.alpha)
    c, c_prime = base.d, conjugated.d
    zeros = (0,) * group.n
    if descriptor.variant == "m":
        if c == 0:
            raise DegeneratePublic("base has zero N coordinate; t = c'/c undefined")
        t = c_prime / c
        alpha = recover_alpha(group, t)
        candidate = GroupElement(alpha, Fraction(0))
        note = f"free-part secret from t = c'/c = {t}"
    elif descriptor.variant == "n":
        if s == 1:
            raise DegeneratePublic("base's free part acts trivially; 1 - s = 0")
        d = (c_prime - c) / (1 - s)
        if not group.contains_n(d):
            raise MembershipViolation(f"recovered d = {d} outside the localization")
        candidate = GroupElement(zeros, d)
        note = f"normal-part secret d = (c' - c)/(1 - s) = {d}"
    elif descriptor.variant == "conj":
        assert descriptor.r is not None
        r = descriptor.r
        divisor = c - r + r * s
        if divisor == 0:
            raise DegeneratePublic("c - r + r*s = 0; the complement equation stalls")
        t = (c_prime - r + s * r) / divisor
        alpha = recover_alpha(group, t)
        d = r * (1 - t)
        if not group.contains_n(d):
            raise MembershipViolation(f"recovered d = {d} outside the localization")
        candidate = GroupElement(alpha, d)
        note = f"complement secret with r = {r}, t = {t}"
    else:  # pragma: no cover - descriptor validates its variant
        raise ValueError(f"unknown subgroup variant {descriptor.variant!r}")
    if group.conj(base, candidate) != conjugated:
        raise NotConjugate("recovered element fails the conjugation check")
    return candidate, note


def kolee_recover_key(
    group: Group, bob_public: GroupElement, recovered_secret: GroupElement
) -> GroupElement:
    """The shared key as the attacker computes it: bob_public^a'."""
    return group.conj(bob_public, recovered_secret)


def kolee_attack_report(public: KoLeePublic) -> AttackReport:
    """Full break of a Diffie-Hellman instance from its public data."""
    group = public.group
    start = time.perf_counter_ns()
    secret, note = kolee_attack(group, public.base, public.alice_public, public.descriptor)
    key = kolee_recover_key(group, public.bob_public, secret)
    elapsed_us = (time.perf_counter_ns() - start) // 1000
    return AttackReport(
        protocol="kolee",
        statuses={"conjugacy": UNIQUE, "case": public.descriptor.variant, "note": note},
        recovered={"alice_secret": secret},
        recovered_key=key,
        wall_time_us=elapsed_us,
    )


def report_to_json(group: Group, report: AttackReport) -> dict:
    """Report payload: statuses as strings, wall time in microseconds,
    elements in the standard element JSON."""
    return {
        "protocol": report.protocol,
        "statuses": dict(report.statuses),
        "recovered": {
            name: group.element_to_json(e) for name, e in report.recovered.items()
        },
        "recovered_key": group.element_to_json(report.recovered_key),
        "wall_time_us": report.wall_time_us,
        "success": report.success,
    }


# -- independent brute-force oracle -------------------------------------------


def brute_force_conjugator(
    group: Group,
    pairs: list[tuple[GroupElement, GroupElement]],
    exp_bound: int,
    denom_bound: int,
    num_bound: int,
) -> tuple[GroupElement, ...]:
    """Every conjugator on a bounded grid, found by exhaustive search.

    The grid is alpha in [-exp_bound, exp_bound]^n and d = w/delta with
    |w| <= num_bound and delta any product of moduli powers <= denom_bound.
    Used as an oracle against the linear-algebra solver; it never solves
    anything, it only enumerates and checks conjugation.
    """
    denominators = _power_products(group.moduli, denom_bound)
    d_grid = sorted(
        {
            Fraction(w, delta)
            for delta in denominators
            for w in range(-num_bound, num_bound + 1)
        }
    )
    alpha_count = (2 * exp_bound + 1) ** group.n
    if alpha_count * len(d_grid) > 10**6:
        raise SearchSpaceTooLarge(
            f"{alpha_count} exponent vectors x {len(d_grid)} coordinates"
        )
    hits = []
    for alpha in itertools.product(range(-exp_bound, exp_bound + 1), repeat=group.n):
        for d in d_grid:
            x = GroupElement(alpha, d)
            if all(group.conj(g, x) == h for g, h in pairs):
                hits.append(x)
    hits.sort(key=lambda e: (e.alpha, e.d))
    return tuple(hits)


def _power_products(moduli: tuple[int, ...], bound: int) -> list[int]:
    """All products of nonnegative moduli powers that stay <= bound."""
    found = {1}
    frontier = [1]
    while frontier:
        value = frontier.pop()
        for m in moduli:
            nxt = value * m
            if nxt <= bound and nxt not in found:
                found.add(nxt)
                frontier.append(nxt)
    return sorted(found)
