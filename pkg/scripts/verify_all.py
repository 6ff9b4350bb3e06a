"""Run every identity suite at a chosen size and print a per-suite tally."""

import argparse
import collections
import json
import sys
import time

from elltor.suites import SUITES, RunConfig, run_suites


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=2)
    ap.add_argument("--p-order", type=int, default=3)
    ap.add_argument("--x-order", type=int, default=4)
    ap.add_argument("--suite", action="append", choices=SUITES)
    ap.add_argument("--report", help="write the full JSON report here")
    args = ap.parse_args()
    cfg = RunConfig(max_size=args.max_size, p_order=args.p_order, x_order=args.x_order,
                    suites=args.suite or list(SUITES))
    t0 = time.perf_counter()
    records = run_suites(cfg)
    tally = collections.defaultdict(collections.Counter)
    for r in records:
        tally[r["suite"]][r["status"]] += 1
    for suite, counts in tally.items():
        print(f"{suite:10s} " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    print(f"total {len(records)} checks in {time.perf_counter() - t0:.1f} s")
    for r in records:
        if r["status"] == "fail":
            print("FAILED", r["check_id"], json.dumps(r["detail"]))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(records, fh, sort_keys=True, indent=1, ensure_ascii=False)
    return 1 if any(r["status"] == "fail" for r in records) else 0


if __name__ == "__main__":
    sys.exit(main())
