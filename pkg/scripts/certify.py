"""No-tangent certificates for a few corner, spiral and irrational points."""

import argparse
import json

from rndf.cli import main as cli

POINTS = [["--rational", "1/8"], ["--rational", "1/3"], ["--rational", "1/2"],
          ["--rational", "1/6"], ["--named", "pi-3"], ["--named", "sqrt2-1"], ["--named", "golden-1"]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", default="1e-8")
    args = ap.parse_args()
    for p in POINTS:
        rc = cli(["--tol", args.tol, "probe", *p])
        print(json.dumps({"point": p[1], "exit": rc}))


if __name__ == "__main__":
    main()
