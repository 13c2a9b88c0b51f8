"""Counting D4, C4 and V4 quartic fields through quadratic towers.

Each base field K of discriminant d with d^2 <= X contributes one record per
quadratic extension L/K with d^2 Nm Disc(L/K) <= X. A D4 field arises from two
towers over the same K, a C4 field from one and a V4 field from three.
"""

import csv
import json
import logging
import math
import os
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import get_context

import numpy as np
from sympy import primerange

from . import __version__
from .analytic import d4_constant
from .errors import CapacityError, DomainError, InvariantViolation
from .galois import GaloisType, check_c4_sign, classify_norm, minimal_polynomial_coords
from .quadfield import QuadField, fundamental_discriminants, sqrt_in_field, squarefree_part
from .relquad import enumerate_quadratic_extensions

log = logging.getLogger(__name__)

CENSUS_CAPACITY = 10**6
CHECKPOINT_SCHEMA = 1


@dataclass(frozen=True)
class QuarticRecord:
    base_disc: int
    ideal_label: str
    selmer_bits: str
    rel_disc_norm: int
    abs_disc: int
    galois: str
    minpoly: tuple

    def sort_key(self):
        d = self.base_disc
        return (abs(d), d, self.rel_disc_norm, self.ideal_label, self.selmer_bits)

    def to_json(self):
        rec = {
            "base_disc": str(self.base_disc),
            "ideal_label": self.ideal_label,
            "selmer_bits": self.selmer_bits,
            "rel_disc_norm": str(self.rel_disc_norm),
            "abs_disc": str(self.abs_disc),
            "galois": self.galois,
            "minpoly": [str(c) for c in self.minpoly],
        }
        return json.dumps(rec, separators=(",", ":"))

    @classmethod
    def from_json(cls, line):
        o = json.loads(line)
        return cls(
            int(o["base_disc"]),
            o["ideal_label"],
            o["selmer_bits"],
            int(o["rel_disc_norm"]),
            int(o["abs_disc"]),
            o["galois"],
            tuple(int(c) for c in o["minpoly"]),
        )


@dataclass
class CensusReport:
    X: int
    pair_count: int
    N_D4: int
    N_C4: int
    N_V4: int
    raw: dict
    per_base: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def check(self):
        if self.pair_count != 2 * self.N_D4 + self.N_C4 + 3 * self.N_V4:
            raise InvariantViolation("pair count identity fails")
        return True

    def to_dict(self):
        out = asdict(self)
        out["per_base"] = {str(k): v for k, v in self.per_base.items()}
        return out


def _tally_to_counts(raw):
    if raw["D4"] % 2:
        raise InvariantViolation(f"raw D4 tally {raw['D4']} is odd")
    if raw["V4"] % 3:
        raise InvariantViolation(f"raw V4 tally {raw['V4']} is not divisible by 3")
    return raw["D4"] // 2, raw["C4"], raw["V4"] // 3


def field_records(d, X, pair_check=False):
    """All tower records over Q(sqrt d) with |Disc L| <= X, in sort order."""
    K = QuadField(d)
    Y = X // (d * d)
    T, N = K.T, K.N
    out = []
    for ext in enumerate_quadratic_extensions(K, Y):
        n = ext.norm_alpha
        g = classify_norm(d, n)
        check_c4_sign(K, g)
        out.append(
            QuarticRecord(
                d,
                ext.ideal_label,
                ext.selmer_bits,
                ext.rel_disc_norm,
                ext.abs_disc,
                g.value,
                tuple(minimal_polynomial_coords(T, N, ext.coords)),
            )
        )
        if pair_check and g is GaloisType.D4:
            _pair_partner(K, ext, Y)
    out.sort(key=QuarticRecord.sort_key)
    return out


def _pair_partner(K, ext, Y):
    """The conjugate tower K(sqrt(sigma alpha)) must be another D4 record."""
    a = ext.alpha
    hits = [
        e
        for e in enumerate_quadratic_extensions(K, Y)
        if e.rel_disc_norm == ext.rel_disc_norm and sqrt_in_field(a.conj() / e.alpha) is not None
    ]
    if len(hits) != 1 or hits[0] == ext:
        raise InvariantViolation(f"no distinct conjugate partner for {ext.coords} over d={K.d}")


def _worker(args):
    d, X, pair_check = args
    return d, field_records(d, X, pair_check)


def _fsync_write(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _base_fields(X):
    r = math.isqrt(X)
    return [int(d) for d in fundamental_discriminants(r)]


def run_census(
    X,
    jobs=1,
    out_dir=None,
    resume=None,
    capacity=CENSUS_CAPACITY,
    keep_records=False,
    pair_check=False,
    stop_after=None,
):
    """Count quartic towers with |Disc L| <= X.

    With out_dir, records stream to records.jsonl and a checkpoint is written
    after every base field; resume continues from such a checkpoint.
    stop_after ends the run early after that many base fields (the checkpoint
    stays valid), which is how interrupted runs are simulated.
    """
    X = int(X)
    if X < 1:
        raise DomainError("X must be positive")
    if X > capacity:
        raise CapacityError(f"X = {X} exceeds census capacity {capacity}")
    if X > CENSUS_CAPACITY:
        log.warning("census bound %d above the default capacity", X)
    t0 = time.time()
    bases = _base_fields(X)
    raw = {"D4": 0, "C4": 0, "V4": 0}
    per_base = {}
    records = [] if keep_records else None
    start = 0
    jsonl = ckpt_path = None
    fh = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        jsonl = os.path.join(out_dir, "records.jsonl")
        ckpt_path = os.path.join(out_dir, "checkpoint.json")
    if resume is not None:
        with open(resume) as f:
            ck = json.load(f)
        if ck.get("schema") != CHECKPOINT_SCHEMA or int(ck["X"]) != X:
            raise DomainError("checkpoint does not match this census")
        raw = {k: int(v) for k, v in ck["raw"].items()}
        per_base = {int(k): v for k, v in ck["per_base"].items()}
        start = int(ck["next_index"])
        if jsonl is not None:
            fh = open(jsonl, "r+")
            fh.truncate(int(ck["jsonl_offset"]))
            fh.seek(int(ck["jsonl_offset"]))
        if keep_records and jsonl is not None:
            with open(jsonl) as f:
                records.extend(QuarticRecord.from_json(line) for line in f)
    elif jsonl is not None:
        fh = open(jsonl, "w")

    todo = [(d, X, pair_check) for d in bases[start:]]
    if stop_after is not None:
        todo = todo[:stop_after]
    pool = None
    if jobs > 1:
        pool = get_context("fork").Pool(jobs)
        it = pool.imap(_worker, todo, chunksize=1)
    else:
        it = map(_worker, todo)
    try:
        for i, (d, recs) in enumerate(it, start=start):
            tally = {"D4": 0, "C4": 0, "V4": 0}
            for r in recs:
                tally[r.galois] += 1
            for k in raw:
                raw[k] += tally[k]
            if any(tally.values()):
                per_base[d] = tally
            if keep_records:
                records.extend(recs)
            if fh is not None:
                for r in recs:
                    fh.write(r.to_json() + "\n")
                fh.flush()
                os.fsync(fh.fileno())
                ck = {
                    "schema": CHECKPOINT_SCHEMA,
                    "X": str(X),
                    "cursor": str(d),
                    "next_index": i + 1,
                    "jsonl_offset": fh.tell(),
                    "raw": raw,
                    "per_base": {str(k): v for k, v in per_base.items()},
                }
                _fsync_write(ckpt_path, json.dumps(ck))
    finally:
        if pool is not None:
            pool.close()
            pool.join()
        if fh is not None:
            fh.close()

    complete = start + len(todo) >= len(bases)
    if complete:
        n_d4, n_c4, n_v4 = _tally_to_counts(raw)
    else:
        # interrupted: only raw tallies are meaningful until the run is resumed
        n_d4 = n_c4 = n_v4 = None
    report = CensusReport(
        X,
        sum(raw.values()),
        n_d4,
        n_c4,
        n_v4,
        dict(raw),
        per_base,
        {
            "version": __version__,
            "jobs": jobs,
            "base_fields": len(bases),
            "complete": complete,
            "elapsed_s": round(time.time() - t0, 3),
        },
    )
    if complete:
        report.check()
    if keep_records:
        report.records = records
    if out_dir is not None and complete:
        write_summary(report, out_dir)
    return report


def write_summary(report, out_dir):
    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["X", "pair_count", "N_D4", "N_C4", "N_V4", "raw_D4", "raw_C4", "raw_V4"])
        w.writerow(
            [str(v) for v in (report.X, report.pair_count, report.N_D4, report.N_C4, report.N_V4,
                              report.raw["D4"], report.raw["C4"], report.raw["V4"])]
        )
    with open(os.path.join(out_dir, "report.json"), "w") as f:
        json.dump(report.to_dict(), f, indent=1, sort_keys=True)


def counts_by_bound(records, bounds):
    """(N_D4, N_C4, N_V4) at each bound from the records of a larger census."""
    absd = np.array([abs(r.abs_disc) for r in records], dtype=np.int64)
    gal = np.array([r.galois for r in records])
    out = {}
    for X in bounds:
        m = absd <= X
        raw = {g: int(np.count_nonzero(m & (gal == g))) for g in ("D4", "C4", "V4")}
        out[int(X)] = _tally_to_counts(raw)
    return out


# ---------------------------------------------------------------- abelian cross-counts


def _fund_of(m):
    m = squarefree_part(m)
    return m if m % 4 == 1 else 4 * m


def count_V4_direct(X):
    """Biquadratic fields as triples of quadratic discriminants with |d1 d2 d3| <= X."""
    if X < 1:
        raise DomainError("X must be positive")
    # order d1 < d2 < d3 by (|d|, d); then |d1| |d2|^2 <= X
    ds = [int(d) for d in fundamental_discriminants(max(1, math.isqrt(X // 3)))]
    seen = set()
    for i, d1 in enumerate(ds):
        if abs(d1) * abs(d1) * abs(d1) > X:
            break
        for d2 in ds[i + 1:]:
            if abs(d1) * d2 * d2 > X:
                break
            d3 = _fund_of(d1 * d2)
            if (abs(d3), d3) <= (abs(d2), d2) or abs(d1 * d2 * d3) > X:
                continue
            seen.add((d1, d2, d3))
    return len(seen)


def count_C4_direct(X):
    """Cyclic quartic fields via primitive order-4 characters and
    Disc = cond(chi)^2 cond(chi^2)."""
    if X < 1:
        raise DomainError("X must be positive")
    # 2-parts: (disc factor, number of characters, has order 4)
    two = [(1, 1, False), (16, 1, False), (64, 2, False), (2048, 4, True)]
    primes = list(primerange(3, math.isqrt(X) + 1))
    total = 0

    def walk(i, disc, chars, quartic):
        nonlocal total
        for f2, c2, q2 in two:
            if (quartic or q2) and disc * f2 <= X:
                total += chars * c2
        for j in range(i, len(primes)):
            p = primes[j]
            if disc * p * p > X:
                break
            walk(j + 1, disc * p * p, chars, quartic)
            if p % 4 == 1 and disc * p**3 <= X:
                walk(j + 1, disc * p**3, chars * 2, True)

    walk(0, 1, 1, False)
    if total % 2:
        raise InvariantViolation("odd number of order-4 characters")
    return total // 2


# ---------------------------------------------------------------- fitting


@dataclass
class FitSummary:
    bounds: list
    counts: list
    c_hat: float
    residual_exponent: float
    constant: float = None
    constant_radius: float = None
    tail_estimate: float = None
    relative_gap: float = None
    ratios: list = None

    def to_dict(self):
        return asdict(self)


def fit_counts(bounds, counts):
    """Least-squares slope through the origin and the log-log growth exponent
    of the residuals |N - c X|."""
    X = np.array([float(b) for b in bounds])
    N = np.array([float(c) for c in counts])
    if len(X) < 4:
        raise DomainError("need at least four bounds")
    if np.all(X == X[0]):
        raise DomainError("degenerate regression: all bounds equal")
    c = float(np.dot(X, N) / np.dot(X, X))
    res = np.abs(N - c * X)
    mask = res > 1e-9 * np.maximum(N, 1)
    if mask.sum() < 2:
        return c, float("-inf")
    slope = np.polyfit(np.log(X[mask]), np.log(res[mask]), 1)[0]
    return c, float(slope)


def fit_and_report(bounds, D0=10**4, jobs=1, counts=None):
    bounds = sorted(int(b) for b in bounds)
    if len(bounds) < 4:
        raise DomainError("need at least four bounds")
    if counts is None:
        rep = run_census(max(bounds), jobs=jobs, keep_records=True)
        by = counts_by_bound(rep.records, bounds)
        counts = [by[b][0] for b in bounds]
    c_hat, expo = fit_counts(bounds, counts)
    const, tail = d4_constant(D0)
    mid = float(const.mid)
    return FitSummary(
        bounds,
        list(counts),
        c_hat,
        expo,
        mid,
        float(const.rad),
        tail,
        abs(c_hat - mid) / mid,
        [n / b for n, b in zip(counts, bounds)],
    )
