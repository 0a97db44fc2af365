"""Write the slice boundary tables and the classification polygon to a directory."""

import argparse
from pathlib import Path

from eghz.explore import emit_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--resolution", type=int, default=101)
    ap.add_argument("--n-images", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fig in ("fig3a", "fig3b", "fig3c", "fig4"):
        text = emit_figure(fig, args.resolution, n_images=args.n_images, seed=args.seed)
        path = out / (fig + (".json" if fig == "fig4" else ".csv"))
        path.write_text(text)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
