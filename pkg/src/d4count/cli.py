"""Command line interface: census, constant, verify, fit."""

import argparse
import json
import logging
import sys

import mpmath

from .errors import CapacityError, DomainError, InvariantViolation

EXIT_OK, EXIT_DOMAIN, EXIT_INVARIANT, EXIT_CAPACITY, EXIT_IO = 0, 1, 2, 3, 4

log = logging.getLogger("d4count")


def _bound(text):
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text}")
    return int(v)


def _bounds(text):
    return [_bound(t) for t in text.split(",") if t.strip()]


def cmd_census(args):
    from .census import CENSUS_CAPACITY, run_census

    cap = CENSUS_CAPACITY
    if args.allow_large:
        cap = max(cap, args.bound)
        if args.bound > CENSUS_CAPACITY:
            log.warning("running above the default capacity of %d", CENSUS_CAPACITY)
    rep = run_census(args.bound, jobs=args.jobs, out_dir=args.out, resume=args.resume,
                     capacity=cap, pair_check=args.pair_check)
    summary = {k: v for k, v in rep.to_dict().items() if k != "per_base"}
    print(json.dumps(summary, sort_keys=True))


def cmd_constant(args):
    from .analytic import d4_constant

    dps = None if args.precision <= 15 else args.precision
    with mpmath.workdps(max(args.precision, 15)):
        val, tail = d4_constant(args.truncation, dps)
        from .quadfield import fundamental_discriminants

        out = {
            "midpoint": mpmath.nstr(val.mid, args.precision),
            "radius": mpmath.nstr(val.rad, 5),
            "tail_estimate": repr(tail),
            "terms_used": len(fundamental_discriminants(args.truncation)),
        }
    print(json.dumps(out))


def cmd_fit(args):
    from .census import fit_and_report

    s = fit_and_report(args.bounds, D0=args.truncation, jobs=args.jobs)
    print(json.dumps(s.to_dict()))


def cmd_verify(args):
    from . import verify

    results = verify.SUITES[args.suite](args)
    ok = True
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        ok &= passed
    if not ok:
        raise InvariantViolation(f"verification suite {args.suite} failed")


def build_parser():
    p = argparse.ArgumentParser(prog="d4count", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="count quartic towers up to a discriminant bound")
    c.add_argument("--bound", type=_bound, required=True)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", default=None, help="directory for records.jsonl, summary.csv, checkpoint")
    c.add_argument("--resume", default=None, help="checkpoint.json from an earlier run")
    c.add_argument("--allow-large", action="store_true")
    c.add_argument("--pair-check", action="store_true", help="pair D4 towers with their conjugates")
    c.set_defaults(func=cmd_census)

    k = sub.add_parser("constant", help="truncated D4 main-term constant")
    k.add_argument("--truncation", type=_bound, default=10**4)
    k.add_argument("--precision", type=int, default=15, help="decimal digits")
    k.set_defaults(func=cmd_constant)

    v = sub.add_parser("verify", help="run an internal consistency suite")
    v.add_argument("--suite", choices=["lemma", "tower", "identity", "oracle", "density"], required=True)
    v.add_argument("--bound", type=_bound, default=10**4)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fit", help="fit N_D4(X) ~ c X over a ladder of bounds")
    f.add_argument("--bounds", type=_bounds, default=[10**3, 10**4, 10**5, 10**6])
    f.add_argument("--truncation", type=_bound, default=10**4)
    f.add_argument("--jobs", type=int, default=1)
    f.set_defaults(func=cmd_fit)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except CapacityError as e:
        print(f"capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK
