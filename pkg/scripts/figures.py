"""Write the full-period picture and the zooms at x = 1/2 (spiral) and x = 1/8 (corner) as SVG."""

import argparse
import os

from rndf.cli import main as cli

VIEWS = {
    "period": ("0", "1", 20000),
    "zoom_half": ("499/1000", "501/1000", 8001),
    "zoom_eighth": ("1249/10000", "1251/10000", 8001),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--format", choices=("svg", "csv"), default="svg")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for name, (a, b, n) in VIEWS.items():
        out = os.path.join(args.outdir, f"{name}.{args.format}")
        rc = cli(["plot", "--var", "x", "--from", a, "--to", b, "--n", str(n),
                  "--format", args.format, "--out", out])
        print(f"{out}: exit {rc}")


if __name__ == "__main__":
    main()
