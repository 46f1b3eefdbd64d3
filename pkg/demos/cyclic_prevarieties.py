"""
Cyclic unary algebras and the prevarieties they generate
========================================================

A tour of the cycle algebras: how many generating algebras a class
needs, which members are subdirectly irreducible relative to it, and
how the canonical free algebra and coproduct constructions behave.
"""

from prevar import (
    coproduct,
    cyclic_unary,
    disjoint_union,
    free_algebra,
    is_compatible,
    is_p_subdirectly_irreducible,
    minimum_compatible_cover,
    parse_quasi_identity,
    quasi_identity_holds,
    sp,
)
from prevar.algcore import are_isomorphic

###########################################################################
# The cycle algebra on d elements has one unary operation stepping
# around a d-cycle.  Take the class of everything embeddable in products
# of the 2-cycle and the 3-cycle.

c2, c3, c6 = cyclic_unary(2), cyclic_unary(3), cyclic_unary(6)
ctx = sp(c2, c3)

###########################################################################
# The free algebra on one generator is built inside an explicit product,
# one coordinate per (generator, value) choice.  Its single orbit has
# length lcm(2, 3) = 6, so it is the 6-cycle.

free, gens = free_algebra(ctx, 1)
print("free algebra on one generator:", free.size, "elements")
print("isomorphic to the 6-cycle:", are_isomorphic(free, c6))

sixth = parse_quasi_identity("=> a(a(a(a(a(a(x)))))) = x")
print("sixth power of the step fixes everything:", quasi_identity_holds(free, sixth))

###########################################################################
# The 2-cycle and 3-cycle cannot embed into a common member: any member
# with a point of period 2 satisfies "a^2 x = x implies a^2 y = y"
# everywhere.  Their coproduct collapses to a single point.

result = coproduct(ctx, [c2, c3])
print("\ncoproduct of the 2- and 3-cycle:", result.algebra.size, "element(s)")
print("compatible:", is_compatible(ctx, [c2, c3]))

###########################################################################
# Regenerate the class from the disjoint union instead and the same two
# algebras sit side by side in a five-element coproduct.

union = disjoint_union([c2, c3])
union_ctx = sp(union)
result = coproduct(union_ctx, [c2, c3])
print("\nunder the union generator:", result.algebra.size, "elements,",
      "injective coprojections:", result.all_injective())

###########################################################################
# The least number of compatible blocks needed to cover a set of members
# measures how many generators the class really needs.

print("\ncover of {2-cycle, 3-cycle} with separate generators:",
      minimum_compatible_cover(ctx, [c2, c3]))
print("cover with the union generator:",
      minimum_compatible_cover(union_ctx, [c2, c3]))

###########################################################################
# Three pairwise unions of the 2-, 3- and 5-cycles give an intermediate
# class: every pair of cycles is compatible, all three together are not.

c5 = cyclic_unary(5)
trio = sp(disjoint_union([c2, c3]), disjoint_union([c2, c5]), disjoint_union([c3, c5]))
for pair in ((c2, c3), (c2, c5), (c3, c5)):
    print("pair of cycles", (pair[0].size, pair[1].size),
          "compatible:", is_compatible(trio, list(pair)))
print("all three compatible:", is_compatible(trio, [c2, c3, c5]))
print("minimum cover:", minimum_compatible_cover(trio, [c2, c3, c5]))

###########################################################################
# Relative to the two-generator class, the subdirectly irreducible
# members are precisely the generators themselves; the 6-cycle splits
# subdirectly into its period-2 and period-3 quotients.

for alg, label in ((c2, "2-cycle"), (c3, "3-cycle"), (c6, "6-cycle")):
    print(label, "relatively subdirectly irreducible:",
          is_p_subdirectly_irreducible(ctx, alg))
