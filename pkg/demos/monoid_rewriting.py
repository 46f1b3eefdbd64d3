"""
Monoid counterexamples by string rewriting
==========================================

Shortlex Knuth-Bendix completion settles the word problems behind two
classic failures: monoids do not amalgamate, and an independent-looking
pair of submonoids can stop being independent inside a larger family.
"""

from prevar.srs import (
    Presentation,
    coproduct_presentation,
    format_word,
    knuth_bendix,
    reduce,
    words_equal,
)

###########################################################################
# Adjoin a left inverse y and a right inverse z to a free generator x,
# then push both monoids out over the common submonoid generated by x.
# Completion orients xy = 1 and zx = 1, finds the overlap zxy, and
# derives z = y: the one-sided inverses fall together with 1, so neither
# overmonoid embeds in the pushout.

amalgam = Presentation(("x", "y", "z"), ((("x", "y"), ()), (("z", "x"), ())))
done = knuth_bendix(amalgam)
print("completed:", done.completed)
for lhs, rhs in done.system.rules:
    print("  ", format_word(lhs), "->", format_word(rhs))
print("y = z in the pushout:", words_equal(done.system, ("y",), ("z",)))
print("normal form of xy:", format_word(reduce(done.system, ("x", "y"))))
print("normal form of zx:", format_word(reduce(done.system, ("z", "x"))))

###########################################################################
# Monoids with two distinguished elements x and y.  Each factor is a
# free monoid on {u_i, x} with y read as x u_i.  In the coproduct of two
# such factors the copies u_1, u_2 stay distinct even though both
# satisfy x u_i = y.

b1 = Presentation(("u1", "x", "y"), ((("y",), ("x", "u1")),))
b2 = Presentation(("u2", "x", "y"), ((("y",), ("x", "u2")),))
two = knuth_bendix(coproduct_presentation([b1, b2], ["x", "y"]))
print("\ntwo factors completed:", two.completed)
print("u1 = u2:", words_equal(two.system, ("u1",), ("u2",)))
print("x u1 = x u2:", words_equal(two.system, ("x", "u1"), ("x", "u2")))

###########################################################################
# Add a third factor carrying a two-sided inverse w of x.  Now
# u_i = (w x) u_i = w (x u_i) = w y, and the two generators collapse
# onto the same element: a subfamily of an independent family need not
# stay independent.

b3 = Presentation(("x", "y", "w"), ((("x", "w"), ()), (("w", "x"), ())))
three = knuth_bendix(coproduct_presentation([b1, b2, b3], ["x", "y"]))
print("\nthree factors completed:", three.completed)
print("u1 = u2:", words_equal(three.system, ("u1",), ("u2",)))
print("u1 = w y:", words_equal(three.system, ("u1",), ("w", "y")))
