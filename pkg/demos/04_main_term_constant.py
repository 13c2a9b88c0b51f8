"""The D4 constant as a truncated sum over quadratic fields.

Each term needs zeta_K(1)/zeta_K(2), computed from the class number formula
and L(2, chi_d) by Hurwitz zeta sums with a certified remainder. The terms
fall off like 1/d^2, so the partial sums settle at about one digit per decade.
"""

import mpmath

from d4count.analytic import d4_constant, d4_term, dirichlet_L_at_2

mpmath.mp.dps = 25
print("L(2, chi_5) =", dirichlet_L_at_2(5, dps=25))
print("closed form  ", mpmath.nstr(4 * mpmath.pi**2 / (25 * mpmath.sqrt(5)), 20))
print("L(2, chi_-4) =", dirichlet_L_at_2(-4, dps=25), " Catalan", mpmath.nstr(mpmath.catalan, 20))

for d in (-3, -4, 5, 8, -7):
    print(f"term d = {d:3d}: {mpmath.nstr(d4_term(d, 20).mid, 12)}")

for D0 in (30, 100, 1000):
    val, tail = d4_constant(D0)
    print(f"D0 = {D0:5d}: {val}  heuristic tail {tail:.2e}")
