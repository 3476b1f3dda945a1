#!/usr/bin/env python3
"""Run the full identity suite over every built-in fan and report timings."""

import argparse
import os
import time

from toriclg import BUILTIN_NAMES, builtin, run_verification


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--order", type=int, default=None,
                        help="truncation order (default 8, 6 for 3-folds; "
                             "ORDER env var overrides)")
    args = parser.parse_args()

    failures = 0
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        if args.order is not None:
            order = args.order
        elif os.environ.get("ORDER"):
            order = int(os.environ["ORDER"])
        else:
            order = 8 if tv.n <= 2 else 6
        start = time.monotonic()
        rep = run_verification(tv, order)
        elapsed = time.monotonic() - start
        status = "pass" if rep.passed else "FAIL"
        print(f"{name:8s} order {order}: {status}  ({elapsed:.2f}s)")
        if not rep.passed:
            failures += 1
            for check in rep.checks:
                if not check.passed:
                    print(f"    {check.name}: {len(check.failures)} bad coefficients")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
