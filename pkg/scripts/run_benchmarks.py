#!/usr/bin/env python3
"""Solve the bundled reference cases and print timing and accuracy.

Usage: python3 scripts/run_benchmarks.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from legpulse.reference import CASES, run_case


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    header = f"{'case':<22} {'dim':>4} {'iters':>5} {'residual':>10} {'max err':>10} {'best ms':>8}"
    print(header)
    print("-" * len(header))
    for case in CASES:
        best = float("inf")
        for _ in range(max(1, args.repeat)):
            start = time.perf_counter()
            output, checks = run_case(case)
            best = min(best, (time.perf_counter() - start) * 1e3)
        report = output.report
        print(
            f"{case.name:<22} {output.config.dim:>4} {report.iterations:>5} "
            f"{report.residual_norm:>10.2e} {output.max_abs_error:>10.2e} {best:>8.1f}"
        )
        bad = [c for c in checks if not c.ok]
        for check in bad:
            print(f"    FAILED: {check.check} ({check.detail})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
