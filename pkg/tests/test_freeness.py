import itertools
import random

import pytest

from prevar.algcore import AlgebraError, App, Var
from prevar.freeness import (
    CollapseRule,
    FreeTermContext,
    Tag,
    Word,
    ZERO,
    apply_word,
    collapses_by_schema_instances,
    embed,
    format_free_element,
    make_tag,
    no_free_triple_bounded,
    normal_form,
    pair_hom,
    parse_free_term,
    subst_hom,
    survival_oracle_agreement,
    tag_survives,
    verify_free_pair,
    witness_triple_hom,
)

TWO_GEN = CollapseRule.TWO_GENERATED
STEM = CollapseRule.STEM_SPLIT


class TestNormalForm:
    def test_three_distinct_generators_survive(self):
        ctx = FreeTermContext(TWO_GEN, 3)
        nf = normal_form(ctx, App("t", (Var(0), Var(1), Var(2))))
        assert isinstance(nf, Tag)

    def test_one_generator_triple_collapses(self):
        ctx = FreeTermContext(TWO_GEN, 1)
        nf = normal_form(ctx, parse_free_term("t(p x, p q x, q q x)"))
        assert nf == ZERO

    def test_common_stem_split_collapses(self):
        ctx = FreeTermContext(STEM, 1)
        nf = normal_form(ctx, parse_free_term("t(x, p q x, q q x)"))
        assert nf == ZERO

    def test_rotated_triple_survives_stem_rule(self):
        ctx = FreeTermContext(STEM, 1)
        nf = normal_form(ctx, parse_free_term("t(x, q x, p x)"))
        assert nf == Tag(Word("", 0), Word("q", 0), Word("p", 0))

    def test_first_argument_growing_out_of_last_collapses(self):
        ctx = FreeTermContext(STEM, 1)
        nf = normal_form(ctx, parse_free_term("t(p p x, p x, x)"))
        assert nf == ZERO

    def test_nested_tags_and_zero_collapse(self):
        ctx = FreeTermContext(TWO_GEN, 3)
        inner = App("t", (Var(0), Var(1), Var(2)))
        assert normal_form(ctx, App("t", (inner, Var(1), Var(2)))) == ZERO
        assert normal_form(ctx, App("t", (App("0", ()), Var(1), Var(2)))) == ZERO
        assert normal_form(ctx, App("p", (inner,))) == ZERO
        assert normal_form(ctx, App("q", (App("0", ()),))) == ZERO

    def test_idempotent_through_embedding(self):
        ctx = FreeTermContext(STEM, 2)
        terms = [
            parse_free_term("t(x, q x, p x)"),
            parse_free_term("p q x"),
            parse_free_term("0"),
            App("t", (Var(0), App("p", (Var(1),)), App("q", (Var(1),)))),
        ]
        for t in terms:
            nf = normal_form(ctx, t)
            assert normal_form(ctx, embed(nf)) == nf

    def test_distinct_words_stay_distinct(self):
        ctx = FreeTermContext(TWO_GEN, 1)
        seen = set()
        for n in range(4):
            for letters in itertools.product("pq", repeat=n):
                term = parse_free_term(" ".join(letters) + " x" if letters else "x")
                nf = normal_form(ctx, term)
                assert isinstance(nf, Word)
                assert nf not in seen
                seen.add(nf)


class TestSubstHom:
    def test_identity_images(self):
        ctx = FreeTermContext(STEM, 2)
        ident = subst_hom(ctx, [Word("", 0), Word("", 1)])
        for el in (ZERO, Word("pq", 1), Tag(Word("", 0), Word("q", 0), Word("p", 0))):
            assert ident(el) == el

    def test_word_concatenation(self):
        ctx = FreeTermContext(STEM, 1)
        shift = subst_hom(ctx, [Word("q", 0)])
        assert shift(Word("pq", 0)) == Word("pqq", 0)

    def test_tag_survival_reevaluated(self):
        ctx = FreeTermContext(STEM, 1)
        under_p = subst_hom(ctx, [Word("p", 0)])
        image = under_p(Tag(Word("", 0), Word("q", 0), Word("p", 0)))
        assert image == Tag(Word("p", 0), Word("qp", 0), Word("pp", 0))
        # a substitution can also kill a surviving tag
        ctx2 = FreeTermContext(STEM, 2)
        survivor = make_tag(ctx2, Word("", 1), Word("", 0), Word("q", 0))
        assert isinstance(survivor, Tag)
        collapse = subst_hom(ctx2, [Word("", 0), Word("p", 0)])
        assert collapse(survivor) == ZERO

    def test_commutes_with_operations(self):
        ctx = FreeTermContext(STEM, 2)
        images = [Word("qp", 1), Word("", 0)]
        h = subst_hom(ctx, images)
        words = [Word(w, g) for w in ("", "p", "q", "pq") for g in (0, 1)]
        for el in words:
            assert h(apply_word("p", el)) == apply_word("p", h(el))
            assert h(apply_word("q", el)) == apply_word("q", h(el))
        for u, v, w in itertools.product(words[:4], repeat=3):
            lhs = h(make_tag(ctx, u, v, w))
            rhs = make_tag(ctx, h(u), h(v), h(w))
            assert lhs == rhs


class TestSurvivalOracle:
    @pytest.mark.parametrize("rule", [TWO_GEN, STEM])
    def test_agreement_small_sweep(self, rule):
        checked, disagreements = survival_oracle_agreement(rule, 2, 3)
        assert checked == 21 ** 3
        assert disagreements == []

    def test_oracle_finds_two_stem_cover(self):
        u, v, w = Word("pp", 0), Word("qp", 0), Word("", 1)
        # u and v share the stem p x0; w is its own stem
        assert collapses_by_schema_instances(TWO_GEN, u, v, w)
        assert not tag_survives(TWO_GEN, u, v, w)

    def test_oracle_split_instances(self):
        assert collapses_by_schema_instances(STEM, Word("", 0), Word("pq", 0), Word("qq", 0))
        assert not collapses_by_schema_instances(STEM, Word("", 0), Word("q", 0), Word("p", 0))


class TestFreePair:
    @pytest.mark.parametrize("rule", [TWO_GEN, STEM])
    def test_bounded_depth_three(self, rule):
        cert = verify_free_pair(rule, 3)
        assert cert.failures == []
        assert cert.collisions == 0
        assert cert.word_triples_checked == 30 ** 3

    def test_stem_rule_depth_four(self):
        cert = verify_free_pair(STEM, 4)
        assert cert.failures == [] and cert.collisions == 0


class TestNoFreeTriple:
    def test_bound_three(self):
        cert = no_free_triple_bounded(3)
        assert cert.conclusive
        assert cert.word_triples_checked == 15 ** 3

    def test_bound_one(self):
        cert = no_free_triple_bounded(1)
        assert cert.conclusive

    def test_rejects_zero_bound(self):
        with pytest.raises(AlgebraError):
            no_free_triple_bounded(0)

    def test_specific_triple_collapses_under_stem_rule(self):
        ctx = FreeTermContext(STEM, 1)
        nf = normal_form(ctx, parse_free_term("t(p x, p q x, q q x)"))
        assert nf == ZERO


class TestWitnessTriple:
    def test_empty_words(self):
        w = witness_triple_hom("", "", "")
        assert w.images == (Word("", 0), Word("", 0), Word("", 0))

    def test_documented_example(self):
        w = witness_triple_hom("p", "q", "pq")
        assert w.images == (Word("p", 0), Word("q", 0), Word("pq", 0))

    def test_hundred_random_triples(self):
        rng = random.Random(20240601)
        for _ in range(100):
            words = [
                "".join(rng.choice("pq") for _ in range(rng.randint(0, 8)))
                for _ in range(3)
            ]
            assert witness_triple_hom(*words).ok

    def test_pair_hom_rejects_bare_generator(self):
        ctx = FreeTermContext(STEM, 1)
        h = pair_hom(ctx, Word("p", 0), Word("q", 0))
        with pytest.raises(AlgebraError):
            h(Word("", 0))


class TestTermSyntax:
    def test_parse_examples(self):
        assert parse_free_term("0") == App("0", ())
        assert parse_free_term("p q x") == App("p", (App("q", (Var(0),)),))
        t = parse_free_term("t(p x, p q x, q q x)")
        assert isinstance(t, App) and t.op == "t" and len(t.args) == 3

    def test_format_round_trip(self):
        ctx = FreeTermContext(STEM, 3)
        for text in ("0", "x", "p q x", "t(x, q x, p x)", "t(p x, y, z)"):
            el = normal_form(ctx, parse_free_term(text))
            again = normal_form(ctx, parse_free_term(format_free_element(el)))
            assert again == el

    def test_bad_tokens_rejected(self):
        with pytest.raises(AlgebraError):
            parse_free_term("r x")
        with pytest.raises(AlgebraError):
            parse_free_term("t(x, y)")
