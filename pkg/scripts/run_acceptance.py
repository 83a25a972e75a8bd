"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py [quick|full]
"""
import sys

from overtake.acceptance import FULL, run_acceptance


def main() -> int:
    profile = sys.argv[1] if len(sys.argv) > 1 else FULL
    results = run_acceptance(profile)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed ({profile})")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
