import random
from fractions import Fraction

import pytest

from gmbs.attacks import (
    AMBIGUOUS_ALL,
    AMBIGUOUS_LINE,
    UNIQUE,
    aag_attack,
    brute_force_conjugator,
    csp_row,
    derive_r,
    kolee_attack,
    kolee_attack_report,
    kolee_recover_key,
    recover_alpha,
    report_to_json,
    solve_scsp,
)
from gmbs.errors import (
    DegeneratePublic,
    Inconsistent,
    MembershipViolation,
    NoExponentVector,
    NotAComplement,
    NotConjugate,
    SearchSpaceTooLarge,
)
from gmbs.group import Group, GroupElement
from gmbs.protocols import (
    AAGPublic,
    SubgroupDescriptor,
    aag_generate,
    kolee_generate,
)


def elem(alpha, d):
    return GroupElement(tuple(alpha), Fraction(d))


class TestCspRow:
    def test_example(self, g2):
        row = csp_row(g2, elem([1], 3), elem([1], 7))
        assert (row.coeff_d, row.coeff_t, row.rhs) == (-1, 3, 7)

    def test_trivial_action_drops_d(self, g2):
        row = csp_row(g2, elem([0], 5), elem([0], 10))
        assert row.coeff_d == 0

    def test_mismatched_free_parts(self, g2):
        with pytest.raises(NotConjugate):
            csp_row(g2, elem([1], 3), elem([2], 3))


class TestSolveScsp:
    def test_unique_worked_example(self, g2):
        pairs = [
            (elem([1], 3), elem([1], 7)),
            (elem([3], 1), elem([3], -31)),
        ]
        sol = solve_scsp(g2, pairs)
        assert sol.status == UNIQUE
        assert (sol.t, sol.d, sol.alpha) == (4, 5, (2,))
        for g, h in pairs:
            assert g2.conj(g, sol.element) == h

    def test_rank1_forced_t(self, g2):
        # trivial action rows pin t but leave d free; canonical d = 0
        pairs = [(elem([0], 3), elem([0], 6))]
        sol = solve_scsp(g2, pairs)
        assert sol.status == AMBIGUOUS_LINE
        assert (sol.t, sol.d, sol.alpha) == (2, 0, (1,))

    def test_rank1_forced_d(self, g2):
        # zero N coordinates pin d but leave t free; canonical t = 1
        pairs = [(elem([1], 0), elem([1], -5))]
        sol = solve_scsp(g2, pairs)
        assert sol.status == AMBIGUOUS_LINE
        assert (sol.t, sol.d, sol.alpha) == (1, 5, (0,))

    def test_rank1_full_line_takes_t1(self, g2):
        # d = (w - v)/u stays in the localization, so t = 1 is the answer
        x0 = elem([1], Fraction(1, 2))
        g = elem([1], 3)
        sol = solve_scsp(g2, [(g, g2.conj(g, x0))])
        assert sol.status == AMBIGUOUS_LINE
        assert sol.t == 1 and sol.alpha == (0,)
        assert g2.conj(g, sol.element) == g2.conj(g, x0)

    def test_rank1_full_line_scans_when_t1_fails(self, g2):
        # u = -3 makes the t = 1 point land outside Z[1/2]
        g = elem([2], 1)
        x0 = elem([1], 0)
        sol = solve_scsp(g2, [(g, g2.conj(g, x0))])
        assert sol.status == AMBIGUOUS_LINE
        assert sol.t == Fraction(1, 2) and sol.d == Fraction(-1, 2)
        assert g2.conj(g, sol.element) == g2.conj(g, x0)

    def test_rank0_identity(self, g2):
        sol = solve_scsp(g2, [(g2.identity, g2.identity)])
        assert sol.status == AMBIGUOUS_ALL
        assert sol.element == g2.identity

    def test_inconsistent_proportional_rows(self, g2):
        pairs = [
            (elem([1], 3), elem([1], 7)),
            (elem([1], 3), elem([1], 8)),
        ]
        with pytest.raises(Inconsistent):
            solve_scsp(g2, pairs)

    def test_inconsistent_extra_row(self, g2):
        x0 = elem([1], 2)
        g1, g2_, g3 = elem([1], 3), elem([3], 1), elem([2], 5)
        pairs = [
            (g1, g2.conj(g1, x0)),
            (g2_, g2.conj(g2_, x0)),
            (g3, g2.mul(g2.conj(g3, x0), elem([0], 1))),  # tampered
        ]
        with pytest.raises(Inconsistent):
            solve_scsp(g2, pairs)

    def test_inconsistent_zero_row(self, g2):
        with pytest.raises(Inconsistent):
            solve_scsp(g2, [(elem([0], 0), elem([0], 1))])

    def test_empty_input(self, g2):
        with pytest.raises(ValueError):
            solve_scsp(g2, [])

    def test_solution_conjugates_every_pair(self, g23):
        rng = random.Random(70)
        for _ in range(100):
            x0 = g23.random_element(rng, 3, 12)
            gs = [g23.random_element(rng, 3, 12) for _ in range(3)]
            pairs = [(g, g23.conj(g, x0)) for g in gs]
            sol = solve_scsp(g23, pairs)
            for g, h in pairs:
                assert g23.conj(g, sol.element) == h

    def test_unique_iff_nonzero_coefficient_minor(self, g23):
        rng = random.Random(81)
        for _ in range(200):
            x0 = g23.random_element(rng, 2, 8)
            count = rng.randint(1, 3)
            gs = [g23.random_element(rng, 2, 8) for _ in range(count)]
            if rng.random() < 0.3:  # push some instances toward rank 1
                gs = [GroupElement((0, 0), g.d) for g in gs]
            pairs = [(g, g23.conj(g, x0)) for g in gs]
            rows = [csp_row(g23, g, h) for g, h in pairs]
            has_minor = any(
                r1.coeff_d * r2.coeff_t != r2.coeff_d * r1.coeff_t
                for r1 in rows
                for r2 in rows
            )
            sol = solve_scsp(g23, pairs)
            assert (sol.status == UNIQUE) == has_minor


class TestRecoverAlpha:
    def test_independent_moduli(self, g23):
        assert recover_alpha(g23, Fraction(9, 2)) == (-1, 2)

    def test_dependent_moduli(self, g24):
        alpha = recover_alpha(g24, Fraction(8))
        assert g24.chi(alpha) == 8

    def test_unsupported_prime(self, g2):
        with pytest.raises(NoExponentVector):
            recover_alpha(g2, Fraction(5))

    def test_nonpositive(self, g2):
        with pytest.raises(NoExponentVector):
            recover_alpha(g2, Fraction(-4))
        with pytest.raises(NoExponentVector):
            recover_alpha(g2, Fraction(0))

    def test_fractional_particular_solution(self):
        # moduli (4, 8): valuation row (2, 3), target 1 has no solution with
        # a zero second coordinate; the kernel scan must find one
        group = Group([4, 8])
        alpha = recover_alpha(group, Fraction(2))
        assert group.chi(alpha) == 2

    def test_no_integral_combination(self):
        # moduli (4, 16): every chi value is an even power of two
        group = Group([4, 16])
        with pytest.raises(NoExponentVector):
            recover_alpha(group, Fraction(2))

    @pytest.mark.parametrize("moduli", [(2,), (2, 3), (2, 4), (4, 8), (6, 10)])
    def test_roundtrip(self, moduli):
        group = Group(moduli)
        rng = random.Random(sum(moduli))
        for _ in range(300):
            alpha = tuple(rng.randint(-8, 8) for _ in range(group.n))
            t = group.chi(alpha)
            assert group.chi(recover_alpha(group, t)) == t


class TestAagAttack:
    def test_recovers_key_on_honest_instances(self, g23):
        rng = random.Random(71)
        for _ in range(30):
            inst = aag_generate(g23, 5, 5, 4, 4, 8, rng)
            report = aag_attack(inst.public)
            assert report.recovered_key == inst.shared_key
            assert set(report.statuses.values()) <= {UNIQUE, AMBIGUOUS_LINE, AMBIGUOUS_ALL}

    def test_single_conjugate_reports_ambiguity(self, g2):
        rng = random.Random(72)
        inst = aag_generate(g2, 1, 1, 1, 1, 6, rng)
        report = aag_attack(inst.public)
        assert report.statuses["alice_conjugator"] in (AMBIGUOUS_LINE, AMBIGUOUS_ALL)
        assert report.recovered_key is not None

    def test_tampered_instance_raises(self, g23):
        inst = aag_generate(g23, 4, 4, 3, 3, 6, random.Random(73))
        pub = inst.public
        tampered = AAGPublic(
            group=pub.group,
            a_tuple=pub.a_tuple,
            b_tuple=pub.b_tuple,
            a_conj=pub.a_conj,
            b_conj=tuple(
                pub.group.mul(e, GroupElement((0, 0), Fraction(i)))
                for i, e in enumerate(pub.b_conj)
            ),
        )
        with pytest.raises((Inconsistent, NotConjugate)):
            aag_attack(tampered)

    def test_report_json_shape(self, g23):
        inst = aag_generate(g23, 3, 3, 2, 2, 5, random.Random(74))
        report = aag_attack(inst.public)
        report.success = report.recovered_key == inst.shared_key
        payload = report_to_json(g23, report)
        assert payload["protocol"] == "aag"
        assert payload["success"] is True
        assert isinstance(payload["wall_time_us"], int)
        assert set(payload["recovered"]) == {"alice_conjugator", "bob_conjugator"}


class TestDeriveR:
    def test_all_normal(self, g2):
        assert derive_r(g2, [elem([0], 3), elem([0], -1)]) == SubgroupDescriptor("n")

    def test_all_free(self, g2):
        assert derive_r(g2, [elem([1], 0), elem([2], 0)]) == SubgroupDescriptor("m")

    def test_conjugated_complement(self, g2):
        desc = derive_r(g2, [elem([1], Fraction(-1, 2))])
        assert desc == SubgroupDescriptor("conj", Fraction(1, 2))

    def test_mixed_generators_rejected(self, g2):
        with pytest.raises(NotAComplement):
            derive_r(g2, [elem([1], Fraction(-1, 2)), elem([1], 0)])

    def test_no_acting_generator(self, g24):
        # chi((2, -1)) = 1 but the N coordinate is nonzero: no complement fits
        with pytest.raises(NotAComplement):
            derive_r(g24, [elem([2, -1], 1)])

    def test_empty(self, g2):
        with pytest.raises(ValueError):
            derive_r(g2, [])

    def test_matches_generated_instances(self, g23):
        rng = random.Random(75)
        for case in ("m", "n", "conj"):
            inst = kolee_generate(g23, case, rng)
            generators = [inst.alice_secret, inst.bob_secret]
            if case == "n":
                assert derive_r(g23, generators).variant == "n"
            elif case == "m":
                assert derive_r(g23, generators).variant == "m"
            else:
                derived = derive_r(g23, generators)
                assert derived == inst.public.descriptor


class TestKoLeeAttack:
    def test_free_part_example(self, g2):
        secret, _ = kolee_attack(g2, elem([1], 3), elem([1], 12), SubgroupDescriptor("m"))
        assert secret == elem([2], 0)

    def test_normal_part_example(self, g2):
        secret, _ = kolee_attack(g2, elem([1], 3), elem([1], -2), SubgroupDescriptor("n"))
        assert secret == elem([0], 5)

    def test_complement_example(self, g2):
        desc = SubgroupDescriptor("conj", Fraction(1, 2))
        secret, _ = kolee_attack(g2, elem([2], 3), elem([2], Fraction(15, 2)), desc)
        assert secret == elem([1], Fraction(-1, 2))

    def test_degenerate_free_part(self, g2):
        with pytest.raises(DegeneratePublic):
            kolee_attack(g2, elem([1], 0), elem([1], 0), SubgroupDescriptor("m"))

    def test_degenerate_normal_part(self, g2):
        with pytest.raises(DegeneratePublic):
            kolee_attack(g2, elem([0], 3), elem([0], 3), SubgroupDescriptor("n"))

    def test_degenerate_complement(self, g2):
        # c - r + r*s = -1 - 1 + 2 = 0
        desc = SubgroupDescriptor("conj", Fraction(1))
        with pytest.raises(DegeneratePublic):
            kolee_attack(g2, elem([1], -1), elem([1], -1), desc)

    def test_membership_violation(self, g2):
        with pytest.raises(MembershipViolation):
            kolee_attack(g2, elem([1], 3), elem([1], Fraction(8, 3)), SubgroupDescriptor("n"))

    def test_mismatched_free_parts(self, g2):
        with pytest.raises(NotConjugate):
            kolee_attack(g2, elem([1], 3), elem([2], 3), SubgroupDescriptor("m"))

    def test_unverifiable_conjugate(self, g2):
        # claimed conjugate is not of the form base^x for x in Omega = M
        with pytest.raises((NotConjugate, NoExponentVector)):
            kolee_attack(g2, elem([1], 3), elem([1], 5), SubgroupDescriptor("m"))

    @pytest.mark.parametrize("case", ["m", "n", "conj"])
    def test_recovers_generated_keys(self, g23, case):
        rng = random.Random(76)
        for _ in range(50):
            inst = kolee_generate(g23, case, rng)
            pub = inst.public
            secret, _ = kolee_attack(g23, pub.base, pub.alice_public, pub.descriptor)
            assert g23.conj(pub.base, secret) == pub.alice_public
            assert kolee_recover_key(g23, pub.bob_public, secret) == inst.shared_key

    def test_attacking_bob_side_gives_same_key(self, g23):
        inst = kolee_generate(g23, "conj", random.Random(77))
        pub = inst.public
        bob_secret, _ = kolee_attack(g23, pub.base, pub.bob_public, pub.descriptor)
        assert kolee_recover_key(g23, pub.alice_public, bob_secret) == inst.shared_key

    def test_report(self, g23):
        inst = kolee_generate(g23, "n", random.Random(78))
        report = kolee_attack_report(inst.public)
        assert report.recovered_key == inst.shared_key
        assert report.statuses["case"] == "n"

    def test_r_outside_localization_still_works(self, g2):
        # r = 1/3 is not in Z[1/2]; the recovered d must still land inside
        desc = SubgroupDescriptor("conj", Fraction(1, 3))
        base = elem([1], 3)
        a = GroupElement((2,), Fraction(1, 3) * (1 - g2.chi((2,))))  # d = -1, in N
        assert g2.contains_n(a.d)
        conjugated = g2.conj(base, a)
        secret, _ = kolee_attack(g2, base, conjugated, desc)
        assert secret == a


class TestBruteForce:
    def test_oracle_on_unique_example(self, g2):
        pairs = [
            (elem([1], 3), elem([1], 7)),
            (elem([3], 1), elem([3], -31)),
        ]
        hits = brute_force_conjugator(g2, pairs, 3, 8, 20)
        assert hits == (elem([2], 5),)

    def test_identity_pairs_hit_everything(self, g2):
        hits = brute_force_conjugator(g2, [(g2.identity, g2.identity)], 1, 2, 1)
        # alpha in {-1,0,1}; d in {-1, -1/2, 0, 1/2, 1}
        assert len(hits) == 15

    def test_inconsistent_pair_is_empty(self, g2):
        hits = brute_force_conjugator(g2, [(elem([1], 3), elem([2], 3))], 2, 4, 5)
        assert hits == ()

    def test_search_space_guard(self, g23):
        with pytest.raises(SearchSpaceTooLarge):
            brute_force_conjugator(g23, [(g23.identity, g23.identity)], 20, 6**8, 500)

    def test_agrees_with_solver(self, g23):
        rng = random.Random(79)
        for _ in range(20):
            x0 = GroupElement(
                tuple(rng.randint(-2, 2) for _ in range(2)),
                Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 6))),
            )
            gs = [
                GroupElement(
                    tuple(rng.randint(-2, 2) for _ in range(2)),
                    Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 6))),
                )
                for _ in range(2)
            ]
            pairs = [(g, g23.conj(g, x0)) for g in gs]
            sol = solve_scsp(g23, pairs)
            hits = brute_force_conjugator(g23, pairs, 3, 216, 20)
            assert x0 in hits
            assert sol.element in hits
