"""Self-check suites behind `d4count verify`.

Each suite returns a list of (name, passed, detail) triples.
"""

import random

from .analytic import all_shapes, rel_quadratic_density, residue_lemma_sum
from .census import count_C4_direct, count_V4_direct, run_census
from .oracle import maximal_order_disc, naive_selmer_enum, resolvent_cubic_galois
from .quadfield import QuadField, fundamental_discriminants, sqrt_in_field
from .relquad import QQ, count_quadratic_extensions, enumerate_quadratic_extensions

COMPLETENESS_FIELDS = (-4, 5, -20, 8, -23)


def lemma(args=None):
    out = []
    for n in (1, 2, 3, 4):
        shapes = all_shapes(n)
        bad = [s.parts for s in shapes if residue_lemma_sum(s) != 1]
        out.append((f"degree {n}", not bad, f"{len(shapes)} shapes, failures {bad}"))
    return out


def tower(args=None, sample=500, seed=0):
    X = getattr(args, "bound", 10**4)
    recs = run_census(X, keep_records=True).records
    rng = random.Random(seed)
    pick = recs if len(recs) <= sample else rng.sample(recs, sample)
    bad = [r for r in pick if maximal_order_disc(r.minpoly) != r.abs_disc]
    return [("tower formula", not bad, f"{len(pick) - len(bad)}/{len(pick)} records agree")]


def identity(args=None):
    X = getattr(args, "bound", 10**4)
    rep = run_census(X)
    v4, c4 = count_V4_direct(X), count_C4_direct(X)
    return [
        ("pair count identity", rep.check(), f"{rep.pair_count} = 2*{rep.N_D4} + {rep.N_C4} + 3*{rep.N_V4}"),
        ("V4 cross-count", rep.N_V4 == v4, f"census {rep.N_V4}, direct {v4}"),
        ("C4 cross-count", rep.N_C4 == c4, f"census {rep.N_C4}, direct {c4}"),
    ]


def oracle(args=None, Y=200, H=50):
    X = getattr(args, "bound", 10**4)
    recs = run_census(X, keep_records=True).records
    bad = [r for r in recs if resolvent_cubic_galois(r.minpoly) != r.galois]
    out = [("classifier vs resolvent", not bad, f"{len(recs) - len(bad)}/{len(recs)} agree")]
    for d in COMPLETENESS_FIELDS:
        K = QuadField(d)
        ours = [e.alpha for e in enumerate_quadratic_extensions(K, Y)]
        naive = naive_selmer_enum(K, H, Y)
        same = len(ours) == len(naive) and all(
            any(sqrt_in_field(a / b) is not None for b in naive) for a in ours
        )
        out.append((f"completeness d={d}", same, f"{len(ours)} vs naive {len(naive)}"))
    return out


def density(args=None, Y=10**5, X=10**6):
    out = []
    ratio = len(fundamental_discriminants(X)) / X / float(rel_quadratic_density(QQ))
    out.append(("fundamental discriminants", abs(ratio - 1) < 0.01, f"ratio {ratio:.5f}"))
    for d in (-4, 5, -23):
        K = QuadField(d)
        r = count_quadratic_extensions(K, Y) / Y / float(rel_quadratic_density(K))
        out.append((f"extensions of d={d}", abs(r - 1) < 0.05, f"ratio {r:.5f}"))
    return out


SUITES = {"lemma": lemma, "tower": tower, "identity": identity, "oracle": oracle, "density": density}
