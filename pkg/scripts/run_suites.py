"""Run every randomized property suite and print one summary line each."""
import argparse

from scgclosure.suites import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=None, help="override each suite's default count")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", nargs="*", choices=sorted(SUITES), default=None)
    args = ap.parse_args()
    failed = 0
    for name in args.only or SUITES:
        rep = run_suite(name, args.trials, args.seed, args.threads)
        print(f"{rep.summary():50s} {rep.seconds:8.2f}s")
        for line in rep.lines:
            if "FAIL" in line:
                print("   ", line)
        failed += rep.failed
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
