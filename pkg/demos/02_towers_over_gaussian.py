"""Quadratic extensions of Q(i) and the quartic fields they produce.

Each line is one extension K(sqrt(alpha)) with relative discriminant norm
at most Y. The absolute discriminant follows from d^2 times that norm.
"""

from d4count.galois import classify_extension, minimal_polynomial
from d4count.oracle import maximal_order_disc, resolvent_cubic_galois
from d4count.quadfield import QuadField
from d4count.relquad import enumerate_quadratic_extensions

K = QuadField(-4)
for ext in enumerate_quadratic_extensions(K, 100):
    g = classify_extension(K, ext.alpha).name
    f = minimal_polynomial(K, ext.alpha)
    print(f"alpha = {ext.alpha}  Nm(rel disc) = {ext.rel_disc_norm:3d}  "
          f"|Disc L| = {abs(ext.abs_disc):5d}  {g:3s} minpoly {f}  oracle {maximal_order_disc(f)}")

# the round-2 oracle and the resolvent cubic agree on x^4 - 2
print("x^4 - 2:", maximal_order_disc((1, 0, 0, 0, -2)), resolvent_cubic_galois((1, 0, 0, 0, -2)))
