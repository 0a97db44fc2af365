"""Verdict frequencies over the polytope and the equal-(x, Y) pair scan."""

import argparse
import json
import time

from eghz.explore import conjecture_scan, estimate_volumes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--n-pairs", type=int, default=1000)
    ap.add_argument("--n-images", type=int, default=2000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="sampling.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    vol = estimate_volumes(args.n, seed=args.seed, n_images=args.n_images, workers=args.workers)
    print(f"volumes: {args.n} samples in {time.perf_counter() - t0:.1f}s")
    for k, f in vol.fractions.items():
        print(f"  {k:<22} {f:.4f}")

    t0 = time.perf_counter()
    conj = conjecture_scan(args.n_pairs, seed=args.seed, n_images=args.n_images)
    print(f"conjecture: {args.n_pairs} pairs in {time.perf_counter() - t0:.1f}s")
    print(f"  witness max discrepancy  {conj.witness_max_discrepancy:.2e}")
    print(f"  PPT bound divergences    {len(conj.ppt_bound_discrepancies)}")
    print(f"  verdict mismatches       {len(conj.verdict_mismatches)}")

    with open(args.out, "w") as fh:
        json.dump({"volumes": vol.to_json(), "conjecture": conj.to_json()}, fh, indent=1)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
