"""Busy Beaver values for small N, with leaf counts and timings."""
import argparse
import time

from overtake.busy_beaver import sigma


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--shards", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=1)
    a = ap.parse_args()
    cutoffs = {0: 10, 1: 10, 2: 30, 3: 50, 4: 200}
    print(f"{'N':>2} {'cutoff':>6} {'sigma':>5} {'exact':>5} {'leaves':>7} {'open':>5} {'secs':>6}")
    for n in range(a.max_n + 1):
        t0 = time.perf_counter()
        r = sigma(n, cutoffs.get(n, 200), shards=a.shards, jobs=a.jobs)
        print(f"{n:>2} {r.cutoff_used:>6} {r.value:>5} {str(r.exact):>5} {r.machines:>7} "
              f"{r.unresolved_count:>5} {time.perf_counter() - t0:>6.1f}")
        if r.witness is not None:
            print("   " + r.witness.text.replace("\n", "\n   "))


if __name__ == "__main__":
    main()
