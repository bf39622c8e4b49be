"""
Projection and the two human-made heuristics
=============================================

A problem is a set of integer polynomials in x0, x1, x2.  Each of the six
variable orderings eliminates the variables in a different sequence, and the
projection grows very differently depending on that choice.
"""

from cadorder.polyset import Problem, discriminant, parse_polynomial, resultant
from cadorder.projection import ORDERINGS, ordering_label, projection_levels
from cadorder.heuristics import brown, brown_criteria, sotd, sotd_values
from cadorder.features import FEATURE_DESCRIPTIONS, extract_features

# the quadratic formula in disguise: the discriminant in x0
p = parse_polynomial("x0^2 + x1*x0 + x2")
print("disc_x0:", discriminant(p, 0))

# resultants vanish exactly where two polynomials share a root
print("res_x0:", resultant(parse_polynomial("x0 - x1"), parse_polynomial("x0 - 1"), 0))

problem = Problem.from_strings("demo", ["x0^2 + x1", "x1*x2 + 1"])

# one line per ordering: the elimination sequence and the size of every level
for index, elim in enumerate(ORDERINGS):
    levels = projection_levels(problem, index)
    sizes = [len(level) for level in levels]
    print(f"{index}  {ordering_label(index):10s} polys per level {sizes}")

# sotd adds up monomial total degrees over all levels and picks the smallest
print("sotd values:", sotd_values(problem), "->", sotd(problem))

# Brown only looks at the input: degree, then total degree, then term count
print("Brown criteria per variable:", brown_criteria(problem))
print("Brown picks:", [ordering_label(o) for o in brown(problem)])

# the learned models see the problem through eleven cheap counts
for name, value in zip(FEATURE_DESCRIPTIONS, extract_features(problem)):
    print(f"  {value:6.3f}  {name}")
