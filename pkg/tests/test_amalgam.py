import itertools
import random

import pytest

from prevar.algcore import AlgebraError
from prevar.amalgam import (
    AmalgamElement,
    alternating_strings,
    coset_torsion_scan,
    cyclically_reduce,
    group_from_table,
    identity_element,
    inverse,
    is_torsion,
    multiply,
    normal_form,
    point_stabilizer,
    power,
    stabilizer_coset_survey,
    subgroup,
    sym_stab_amalgam,
    symmetric_group,
    to_word,
)


@pytest.fixture(scope="module")
def ctx():
    return sym_stab_amalgam(3)


def all_letters(ctx):
    return [(k, g) for k in (0, 1) for g in range(ctx.factor(k).size)]


def words_up_to(ctx, max_len):
    letters = all_letters(ctx)
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


class TestGroups:
    def test_symmetric_group_order(self):
        g, perms = symmetric_group(3)
        assert g.size == 6 and len(perms) == 6
        assert perms[0] == (0, 1, 2) and g.identity == 0

    def test_composition_applies_right_factor_first(self):
        g, perms = symmetric_group(3)
        index = {p: i for i, p in enumerate(perms)}
        a, b = index[(1, 0, 2)], index[(0, 2, 1)]
        composed = perms[g.mul(a, b)]
        assert composed == tuple(perms[a][perms[b][x]] for x in range(3))

    def test_stabilizer_subgroup(self):
        g, perms = symmetric_group(3)
        stab, inclusion = point_stabilizer(g, perms, 2)
        assert stab.size == 2
        assert all(perms[i][2] == 2 for i in inclusion)

    def test_bad_table_rejected(self):
        with pytest.raises(AlgebraError):
            group_from_table([[0, 1], [1, 1]])

    def test_non_closed_subset_rejected(self):
        g, perms = symmetric_group(3)
        index = {p: i for i, p in enumerate(perms)}
        with pytest.raises(AlgebraError):
            subgroup(g, [0, index[(1, 0, 2)], index[(0, 2, 1)]])


class TestNormalForm:
    def test_subgroup_letter_has_empty_string(self, ctx):
        b_letter = ctx.embed(0, 1)
        el = normal_form(ctx, [(0, b_letter)])
        assert el.reps == () and el.tail == 1

    def test_factor_letter_splits_once(self, ctx):
        rep = ctx.transversals[0][1]
        el = normal_form(ctx, [(0, rep)])
        assert el.reps == ((0, rep),) and el.tail == ctx.base.identity

    def test_cancellation_through_the_fold(self, ctx):
        g1, g2 = ctx.factors
        r1, r2 = ctx.transversals[0][1], ctx.transversals[1][2]
        word = [(0, r1), (1, r2), (1, g2.inv(r2)), (0, g1.inv(r1))]
        assert normal_form(ctx, word) == identity_element(ctx)

    def test_fold_is_homomorphic(self, ctx):
        # exhaustive: nf(w1 ++ w2) = nf(w1) * nf(w2) for |w1| + |w2| <= 4
        letters = all_letters(ctx)
        by_length = [
            list(itertools.product(letters, repeat=n)) for n in range(5)
        ]
        forms = {
            w: normal_form(ctx, list(w)) for group in by_length for w in group
        }
        checked = 0
        for total in range(5):
            for k1 in range(total + 1):
                for w1 in by_length[k1]:
                    for w2 in by_length[total - k1]:
                        combined = normal_form(ctx, list(w1 + w2))
                        assert combined == multiply(ctx, forms[w1], forms[w2])
                        checked += 1
        assert checked == 111049

    def test_fold_is_homomorphic_long_random(self, ctx):
        rng = random.Random(17)
        letters = all_letters(ctx)
        for _ in range(200):
            w1 = [rng.choice(letters) for _ in range(rng.randint(0, 4))]
            w2 = [rng.choice(letters) for _ in range(rng.randint(0, 4))]
            assert normal_form(ctx, w1 + w2) == multiply(
                ctx, normal_form(ctx, w1), normal_form(ctx, w2)
            )

    def test_alternation_invariant(self, ctx):
        for w in words_up_to(ctx, 3):
            el = normal_form(ctx, list(w))
            for (f1, r1), (f2, r2) in zip(el.reps, el.reps[1:]):
                assert f1 != f2
            for f, r in el.reps:
                assert r != ctx.factor(f).identity
                assert r in ctx.transversals[f]


class TestMultiply:
    def test_identity_neutral(self, ctx):
        for w in words_up_to(ctx, 2):
            el = normal_form(ctx, list(w))
            assert multiply(ctx, el, identity_element(ctx)) == el
            assert multiply(ctx, identity_element(ctx), el) == el

    def test_inverse_cancels(self, ctx):
        for w in words_up_to(ctx, 2):
            el = normal_form(ctx, list(w))
            assert multiply(ctx, el, inverse(ctx, el)) == identity_element(ctx)
            assert multiply(ctx, inverse(ctx, el), el) == identity_element(ctx)

    def test_two_letters_from_different_factors_concatenate(self, ctx):
        r1, r2 = ctx.transversals[0][1], ctx.transversals[1][1]
        e1 = normal_form(ctx, [(0, r1)])
        e2 = normal_form(ctx, [(1, r2)])
        assert multiply(ctx, e1, e2).length() == 2

    def test_associative_randomized(self, ctx):
        rng = random.Random(23)
        letters = all_letters(ctx)
        for _ in range(120):
            els = [
                normal_form(ctx, [rng.choice(letters) for _ in range(rng.randint(0, 3))])
                for _ in range(3)
            ]
            left = multiply(ctx, multiply(ctx, els[0], els[1]), els[2])
            right = multiply(ctx, els[0], multiply(ctx, els[1], els[2]))
            assert left == right


class TestTorsion:
    def test_subgroup_tail_is_torsion(self, ctx):
        for b in range(ctx.base.size):
            assert is_torsion(ctx, AmalgamElement((), b))

    def test_even_reduced_string_is_torsion_free(self, ctx):
        r1, r2 = ctx.transversals[0][1], ctx.transversals[1][1]
        el = normal_form(ctx, [(0, r1), (1, r2)])
        assert el.length() == 2
        assert not is_torsion(ctx, el)

    def test_conjugate_of_factor_element_is_torsion(self, ctx):
        g1 = ctx.factor(0)
        r1 = ctx.transversals[0][1]
        word = [(0, r1), (0, ctx.embed(0, 1)), (0, g1.inv(r1))]
        el = normal_form(ctx, word)
        assert is_torsion(ctx, el)

    def test_power_length_grows_linearly(self, ctx):
        for w in words_up_to(ctx, 2):
            el = cyclically_reduce(ctx, normal_form(ctx, list(w)))
            if el.length() < 2:
                continue
            for k in range(1, 7):
                assert power(ctx, el, k).length() == k * el.length()

    def test_structural_and_powers_verdicts_agree_exhaustively(self, ctx):
        # is_torsion runs both routes internally and raises on mismatch
        for w in words_up_to(ctx, 3):
            is_torsion(ctx, normal_form(ctx, list(w)))


class TestCosetScan:
    def test_empty_string_contains_identity(self, ctx):
        assert coset_torsion_scan(ctx, [])

    def test_length_one_lies_in_a_factor(self, ctx):
        for s in alternating_strings(ctx, 1):
            assert coset_torsion_scan(ctx, s)

    def test_length_two_has_no_torsion(self, ctx):
        strings = list(alternating_strings(ctx, 2))
        assert strings
        for s in strings:
            assert not coset_torsion_scan(ctx, s)

    def test_parity_rule_up_to_length_four(self, ctx):
        for length in range(5):
            expected = length % 2 == 1 or length == 0
            for s in alternating_strings(ctx, length):
                assert coset_torsion_scan(ctx, s) == expected

    def test_bad_strings_rejected(self, ctx):
        with pytest.raises(AlgebraError):
            coset_torsion_scan(ctx, [(0, ctx.factor(0).identity)])
        r1 = ctx.transversals[0][1]
        with pytest.raises(AlgebraError):
            coset_torsion_scan(ctx, [(0, r1), (0, r1)])


class TestStabilizerSurvey:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_every_coset_has_an_involution(self, n):
        survey = stabilizer_coset_survey(n)
        assert len(survey.witnesses) == n
        assert survey.all_cosets_have_involutions
        for w in survey.witnesses:
            assert w.witness[n - 1] == w.image

    def test_witness_is_identity_or_transposition(self):
        survey = stabilizer_coset_survey(4)
        for w in survey.witnesses:
            moved = [x for x in range(4) if w.witness[x] != x]
            assert len(moved) in (0, 2)

    def test_bounds_enforced(self):
        with pytest.raises(AlgebraError):
            stabilizer_coset_survey(7)


class TestRoundTrip:
    def test_to_word_reconstructs(self, ctx):
        for w in words_up_to(ctx, 3):
            el = normal_form(ctx, list(w))
            assert normal_form(ctx, to_word(ctx, el)) == el
