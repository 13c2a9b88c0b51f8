"""Count D4, C4 and V4 quartic fields up to X and fit N_D4(X) ~ c X.

Pass a larger top bound as the first argument (at most 1e6, about twenty
seconds on one core). The abelian counts are checked against the direct
conductor counts on the way.
"""

import sys

from d4count.census import count_C4_direct, count_V4_direct, counts_by_bound, fit_counts, run_census

top = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**5
ladder = [b for b in (10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6) if b <= top]

rep = run_census(top, keep_records=True)
by = counts_by_bound(rep.records, ladder)
print(f"{'X':>8} {'D4':>7} {'C4':>5} {'V4':>5}  N_D4/X")
for X in ladder:
    d4, c4, v4 = by[X]
    assert (c4, v4) == (count_C4_direct(X), count_V4_direct(X))
    print(f"{X:8d} {d4:7d} {c4:5d} {v4:5d}  {d4 / X:.5f}")

print(f"pair count {rep.pair_count} = 2*{rep.N_D4} + {rep.N_C4} + 3*{rep.N_V4}")
c_hat, expo = fit_counts(ladder, [by[X][0] for X in ladder])
print(f"fitted c = {c_hat:.5f}, residual growth exponent {expo:.3f}")

smallest = {}
for r in rep.records:
    smallest.setdefault(r.galois, r)
for g, r in sorted(smallest.items()):
    print(f"smallest {g}: |Disc| = {abs(r.abs_disc)}, over Q(sqrt({r.base_disc})), minpoly {list(r.minpoly)}")
