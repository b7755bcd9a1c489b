"""Run the verification suite, timing each check, and save the report.

The saved report has no timings, so it can be diffed across runs; timings
go to stdout only.
"""
import argparse
import time
from pathlib import Path

from uawb.verify import CHECKS, format_report, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="verify_report.txt")
    ap.add_argument("--check", action="append", choices=sorted(CHECKS))
    ap.add_argument("--seed", type=int)
    args = ap.parse_args()
    outcomes = []
    for name in args.check or sorted(CHECKS):
        t0 = time.perf_counter()
        [o] = run_suite([name], seed=args.seed)
        print(f"{name:9} {o.status:7} {o.checked:7d} instances  {time.perf_counter() - t0:7.1f}s")
        outcomes.append(o)
    Path(args.out).write_text(format_report(outcomes))
    print(f"report written to {args.out}")


if __name__ == "__main__":
    main()
