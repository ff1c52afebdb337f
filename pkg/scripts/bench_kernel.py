"""Time single evaluations, the FFT grid and thread fan-out."""

import argparse
import time

import numpy as np

from rndf.series import EvalConfig, eval_phi, eval_phi_many, phi_on_grid


def timed(label, fn, reps=1):
    fn()
    t = time.perf_counter()
    for _ in range(reps):
        fn()
    dt = (time.perf_counter() - t) / reps
    print(f"{label:<40s} {dt * 1e3:10.2f} ms")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    for tol in (1e-6, 1e-7, 1e-8):
        cfg = EvalConfig(tol=tol)
        timed(f"eval_phi tol={tol:g}", lambda: eval_phi(float(rng.uniform(0, 0.2)), cfg), reps=5)
    pts = list(rng.uniform(0, 0.2, 64))
    cfg = EvalConfig(tol=1e-7)
    timed(f"64 points, {args.threads} threads", lambda: eval_phi_many(pts, cfg, threads=args.threads))
    timed("grid of 2^20 + 1 points", lambda: phi_on_grid(1 << 20, 0, (1 << 20) + 1, cfg))


if __name__ == "__main__":
    main()
