"""Build the counterexample family for a few h and show where it stands."""
import argparse

from overtake.growth import build_counterexample_family, lookup_function


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", action="append", default=None, help="catalog function name")
    ap.add_argument("--n-max", type=int, default=3)
    a = ap.parse_args()
    for name in a.h or ["succ", "square"]:
        _, rows = build_counterexample_family(lookup_function(name), range(a.n_max + 1))
        print(f"h = {name}")
        for r in rows:
            if r.refusal:
                print(f"  n={r.n}: refused ({r.refusal.split(':')[0]})")
                continue
            print(f"  n={r.n}: index has {r.index.bit_length()} bits, g={r.g}, h'(n)+1={r.hprime + 1}, "
                  f"g > h(N): {r.exceeds_h}")


if __name__ == "__main__":
    main()
