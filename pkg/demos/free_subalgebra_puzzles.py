"""
Free subalgebras of one-generator free algebras
===============================================

Two varieties over the signature {0, p, q, t} in which the free algebra
on one generator has a free subalgebra on two generators, but the jump
to three behaves very differently.  Elements are handled lazily as
normal forms: zero, a {p,q}-word on a generator, or a surviving tag.
"""

import random

from prevar.freeness import (
    CollapseRule,
    FreeTermContext,
    Word,
    format_free_element,
    normal_form,
    no_free_triple_bounded,
    parse_free_term,
    survival_oracle_agreement,
    verify_free_pair,
    witness_triple_hom,
)

###########################################################################
# First variety: a tag t(u, v, w) vanishes whenever its arguments live in
# a two-generated subalgebra.  Over one generator every word triple dies,
# so no triple of elements can generate a free subalgebra; over three
# independent generators the tag survives.

one = FreeTermContext(CollapseRule.TWO_GENERATED, 1)
three = FreeTermContext(CollapseRule.TWO_GENERATED, 3)

print("t(p x, p q x, q q x) over one generator:",
      format_free_element(normal_form(one, parse_free_term("t(p x, p q x, q q x)"))))
print("t(x, y, z) over three generators:",
      format_free_element(normal_form(three, parse_free_term("t(x, y, z)"))))

cert = no_free_triple_bounded(4)
print("word triples checked:", cert.word_triples_checked,
      "- all vanish:", cert.all_word_triples_vanish)

###########################################################################
# The two elements px and qx still generate a free pair: every bounded
# relation they satisfy already holds between two independent
# generators.

pair = verify_free_pair(CollapseRule.TWO_GENERATED, 4)
print("free pair certificate: depth", pair.depth,
      "- failures:", len(pair.failures), "- word collisions:", pair.collisions)

###########################################################################
# Second variety: tags die only on (u, p s, q s) and when the first
# argument grows out of one of the others.  Now the one-generator free
# algebra satisfies no identities beyond those of the whole variety, yet
# (px, pqx, qqx) is still not free: its tag collapses, while the rotated
# triple (x, qx, px) keeps its tag alive.

stem = FreeTermContext(CollapseRule.STEM_SPLIT, 1)
print("\nstem-split variety:")
print("t(p x, p q x, q q x):",
      format_free_element(normal_form(stem, parse_free_term("t(p x, p q x, q q x)"))))
print("t(x, q x, p x):",
      format_free_element(normal_form(stem, parse_free_term("t(x, q x, p x)"))))

###########################################################################
# The positive side: (px, pqx, pqqx) is a free triple.  For any three
# words a, b, c, composing three substitution maps on the free pair
# lands the triple on (a x, b x, c x).

for words in (("", "", ""), ("p", "q", "pq"), ("qq", "pqp", "qpq")):
    witness = witness_triple_hom(*words)
    print("witness for", words, "->",
          tuple(format_free_element(el) for el in witness.images))

rng = random.Random(7)
trials = [
    tuple("".join(rng.choice("pq") for _ in range(rng.randint(0, 8)))
          for _ in range(3))
    for _ in range(100)
]
print("random triples verified:", sum(witness_triple_hom(*t).ok for t in trials), "/ 100")

###########################################################################
# The survival predicates driving the normal forms are derived facts, so
# the package also ships an oracle that replays the identity schemas by
# brute instance enumeration; the two must agree.

for rule in (CollapseRule.TWO_GENERATED, CollapseRule.STEM_SPLIT):
    checked, disagreements = survival_oracle_agreement(rule, 2, 3)
    print(rule.value, "oracle sweep:", checked, "triples,",
          len(disagreements), "disagreements")
