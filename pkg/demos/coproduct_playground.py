"""
Coproducts, independence and nested chains
==========================================

The canonical coproduct is a concrete subalgebra of an explicitly
indexed product, so universal-property questions become finite
computations: when do subalgebras generate a copy of their coproduct,
how does independence propagate down a chain, and when do squares of
embeddings complete.
"""

from prevar import (
    chain_independence,
    check_amalgamation_bounded,
    coproduct,
    cyclic_unary,
    disjoint_union,
    is_comfortable,
    is_independent,
    sp,
    trivial_algebra,
)
from prevar.algcore import UNARY_SIGNATURE

###########################################################################
# Two disjoint copies of the 3-cycle inside their union are independent:
# the subalgebra they generate is exactly their coproduct in the class
# generated by a single 3-cycle.

c3 = cyclic_unary(3)
double = disjoint_union([c3, c3])
ctx = sp(c3)
print("summands independent:", is_independent(ctx, double, [[0, 1, 2], [3, 4, 5]]))
result = coproduct(ctx, [c3, c3])
print("canonical coproduct size:", result.algebra.size,
      "- hom-family index entries:", len(result.index_metadata))

###########################################################################
# The chain argument: climb down nested subalgebras, each independent
# from its partner, and the partners stay jointly independent.  The
# report carries the retraction homomorphism built at every step.

triple = disjoint_union([c3, c3, c3])
report = chain_independence(
    triple,
    [[0, 1, 2, 3, 4, 5], [0, 1, 2]],
    [[6, 7, 8], [3, 4, 5]],
)
print("\nchain conclusion holds:", report.independent)
print("stronger pointwise-fixing form:", report.almost_independent)
print("retractions per step:", [r is not None for r in report.retractions])

###########################################################################
# Comfort is one-sided compatibility: the trivial algebra maps into the
# coproduct with a 2-cycle injectively, but not the other way around,
# because nothing in the class contains a fixed point next to a 2-cycle.

c2 = cyclic_unary(2)
two_ctx = sp(c2)
triv = trivial_algebra(UNARY_SIGNATURE)
print("\ntrivial comfortable with the 2-cycle:", is_comfortable(two_ctx, triv, c2))
print("2-cycle comfortable with the trivial:", is_comfortable(two_ctx, c2, triv))

###########################################################################
# Bounded amalgamation check: enumerate every member of the class up to
# a size bound, try all squares of embeddings, and complete each over
# the canonical pushout.  For the class of the 2-cycle the components
# glue freely and every square completes.

ok, counterexample = check_amalgamation_bounded(two_ctx, 4)
print("\namalgamation over members of size <= 4:", ok)

###########################################################################
# Admitting the empty algebra as the base turns the check into a joint
# embedding question, and that fails: the trivial algebra and the
# 2-cycle have no common extension in this class.

ok, counterexample = check_amalgamation_bounded(two_ctx, 2, include_empty_base=True)
print("with empty bases admitted:", ok)
if counterexample:
    print("counterexample sizes (base, left, right):",
          (counterexample.base.size, counterexample.left.size,
           counterexample.right.size))
