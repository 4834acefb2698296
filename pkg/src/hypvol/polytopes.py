"""Bundled example diagrams.

Two noncompact Coxeter polytopes in dimensions 5 and 7, each a 2 x k grid
of facets with a pair of dashed edges and one pair of parallel hyperplanes.
Their reflection groups are properly quasi-arithmetic over Q with
discriminant classes 13 and -11.
"""

POLYTOPE_5D = """\
# 5-dimensional noncompact Coxeter polytope, 8 facets
# facets 0-3 are the top row, 4-7 the bottom row
n 5
facets 8
edge 0 1 dashed sqrt(26)/4
edge 0 4 inf
edge 1 2 3
edge 2 3 3
edge 2 6 3
edge 3 7 3
edge 4 5 dashed sqrt(26)/4
edge 5 6 3
edge 6 7 3
"""

POLYTOPE_7D = """\
# 7-dimensional noncompact Coxeter polytope, 10 facets
# facets 0-4 are the top row, 5-9 the bottom row
n 7
facets 10
edge 0 1 dashed sqrt(22)/4
edge 0 5 inf
edge 1 2 3
edge 2 3 3
edge 3 4 3
edge 3 8 3
edge 5 6 dashed sqrt(22)/4
edge 6 7 3
edge 7 8 3
edge 8 9 3
"""

IDEAL_TRIANGLE = """\
# ideal hyperbolic triangle: three pairwise parallel lines
n 2
facets 3
edge 0 1 inf
edge 1 2 inf
edge 0 2 inf
"""
