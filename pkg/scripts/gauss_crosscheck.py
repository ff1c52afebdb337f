"""Compare fitted eighth roots with the Gauss-sum prediction G(-p, 0, q) sqrt(q~) / q."""

import argparse
import math

from rndf.rational import fit_point, gauss_sum
from rndf.series import EvalConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=20)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()
    cfg = EvalConfig(tol=args.tol)
    worst, count = 0.0, 0
    for q in range(1, args.qmax + 1):
        if q % 4 == 2:
            continue
        for p in range(q):
            if math.gcd(p, q) != 1:
                continue
            pt = fit_point(p, q, cfg)
            g = gauss_sum(-p, 0, q) * math.sqrt(pt.q_tilde) / q
            err = abs(pt.e_fit - g)
            worst = max(worst, err)
            count += 1
            print(f"{p:3d}/{q:<3d} e_fit={pt.e_fit:.6f}  gauss={g:.6f}  |diff|={err:.2e}")
    print(f"{count} corner points, worst difference {worst:.2e}")


if __name__ == "__main__":
    main()
