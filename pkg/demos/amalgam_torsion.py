"""
Torsion in amalgamated products of symmetric groups
===================================================

Glue two copies of Sym(3) along the stabilizer of a point and look at
the left cosets of the subgroup.  In the amalgam, torsion is governed
by the alternating normal form: cosets whose defining string has even
nonzero length contain no element of finite order, while inside a
single symmetric group every stabilizer coset holds an involution.
That mismatch is why the glued group cannot live inside one copy.
"""

from prevar.amalgam import (
    alternating_strings,
    coset_torsion_scan,
    is_torsion,
    normal_form,
    stabilizer_coset_survey,
    sym_stab_amalgam,
)

###########################################################################
# Build Sym(3) *_B Sym(3) with B the two-element stabilizer of the last
# point.  Normal forms alternate coset representatives from the two
# copies and end with a subgroup element.

ctx = sym_stab_amalgam(3)
print("factor orders:", [g.size for g in ctx.factors], "- subgroup order:", ctx.base.size)
print("transversals:", ctx.transversals)

r1 = ctx.transversals[0][1]
r2 = ctx.transversals[1][2]
el = normal_form(ctx, [(0, r1), (1, r2)])
print("\nsample product of representatives:", el)
print("finite order:", is_torsion(ctx, el))

###########################################################################
# Scan every coset string up to length four.  The parity rule is exact:
# the empty string and odd lengths give cosets with torsion, even
# lengths give torsion-free cosets.

print("\nstring length -> cosets with a torsion element / total")
for length in range(5):
    strings = list(alternating_strings(ctx, length))
    with_torsion = sum(coset_torsion_scan(ctx, s) for s in strings)
    print(f"  {length}: {with_torsion} / {len(strings)}")

###########################################################################
# Inside a single Sym(n), by contrast, the coset of the stabilizer
# sending the fixed point to y always contains an involution: the
# transposition swapping the two points (or the identity).

for n in (3, 4, 5):
    survey = stabilizer_coset_survey(n)
    print(f"\nSym({n}): every stabilizer coset has an element of order <= 2:",
          survey.all_cosets_have_involutions)
    for w in survey.witnesses:
        print(f"  point -> {w.image}: witness {w.witness} of order {w.order}")
