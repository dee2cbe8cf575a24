#!/usr/bin/env python3
"""Sweep one family over its full parameter domain and print the classification.

Examples:
    python scripts/run_census.py --family X --p 3 --m 2 --s 1
    python scripts/run_census.py --family B --p 3 --m 3 --s 1 --records out.jsonl
"""

import argparse
import json
import sys
import time

from semifields import census as cs


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=sorted(cs.SWEEPS), required=True)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--reduce", action="store_true",
                    help="orbit representatives only (families B, C, X)")
    ap.add_argument("--records", metavar="PATH",
                    help="also dump per-instance records as JSON lines")
    args = ap.parse_args(argv)

    kwargs = {}
    if args.family in ("B", "C", "X"):
        kwargs["reduce"] = args.reduce
    elif args.reduce:
        ap.error(f"--reduce is not defined for family {args.family}")
    if args.records:
        kwargs["keep_records"] = True

    t0 = time.perf_counter()
    summary = cs.SWEEPS[args.family](args.p, args.m, args.s, **kwargs)
    dt = time.perf_counter() - t0

    print(f"family {summary.family}  (p, m, s) = ({args.p}, {args.m}, {args.s})")
    print(f"domain {summary.domain}  valid {summary.valid}  [{dt:.2f}s]")
    width = max((len(str((c, d))) for c, d, _ in summary.histogram), default=0)
    for key, count in sorted(summary.histogram.items(), key=str):
        comm, dims, theorem = key
        print(f"  {str((comm, dims)):{width}}  {theorem:<55} {count:>6}")
    if summary.mismatches:
        print(f"MISMATCHES ({len(summary.mismatches)}):")
        for rec in summary.mismatches[:20]:
            print("  ", rec)
        return 1
    if args.records:
        with open(args.records, "w") as fh:
            for rec in summary.records:
                fh.write(json.dumps(rec) + "\n")
        print(f"wrote {len(summary.records)} records to {args.records}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
