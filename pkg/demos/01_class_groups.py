"""Class groups, units and 2-Selmer groups of a few quadratic fields.

The 2-Selmer group K*/K*^2 restricted to elements whose ideal is a square
is what parametrises the unramified-at-odd-part twists of every tower, so
its rank is printed next to the class group.
"""

from d4count.classgroup import class_group, fundamental_unit, selmer2_basis
from d4count.quadfield import QuadField

for d in (-4, -23, -84, 5, 229, 1129):
    K = QuadField(d)
    G = class_group(K)
    line = f"d = {d:6d}  h = {G.order:2d}  structure {G.structure}  2-Selmer rank {selmer2_basis(K).rank}"
    if d > 0:
        line += f"  unit {fundamental_unit(K)}"
    print(line)
