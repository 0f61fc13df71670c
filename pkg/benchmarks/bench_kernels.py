"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in a fresh interpreter because the backend is fixed at
import time by NONLOCAL_FOURIER_PURE_NUMPY. Usage:

    python benchmarks/bench_kernels.py [--n 64 128] [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from nonlocal_fourier import _kernels
from nonlocal_fourier.config import preset_sigma
from nonlocal_fourier.convolution import ConvolutionEngine
from nonlocal_fourier.expansion import random_smooth
from nonlocal_fourier.function_space import make_grid

n, repeat = int(sys.argv[1]), int(sys.argv[2])
sigma = preset_sigma("antiperiodic")
grid = make_grid(sigma.b, n)
eng = ConvolutionEngine(sigma, grid)
rng = np.random.default_rng(0)
f, g = random_smooth(grid, rng), random_smooth(grid, rng)
eng.convolve(f, g)  # warm-up (JIT compile or cache load)
pts = rng.uniform(0, sigma.b, 200_000)
best_conv = best_interp = float("inf")
for _ in range(repeat):
    t = time.perf_counter(); out = eng.convolve(f, g); best_conv = min(best_conv, time.perf_counter() - t)
    t = time.perf_counter(); _kernels.bary_eval(pts, grid.nodes, grid.bary_weights, f.values)
    best_interp = min(best_interp, time.perf_counter() - t)
print(json.dumps({"backend": _kernels.BACKEND, "n": n, "convolve_s": best_conv,
                  "interp_200k_s": best_interp, "checksum": [out.values.real.sum(), out.values.imag.sum()]}))
"""


def run(backend_numpy: bool, n: int, repeat: int) -> dict:
    env = dict(os.environ, NONLOCAL_FOURIER_PURE_NUMPY="1" if backend_numpy else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[64, 128])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'n':>5} {'backend':>8} {'convolve [s]':>13} {'interp 200k [s]':>16} {'speedup':>8}")
    for n in args.n:
        nb, npy = run(False, n, args.repeat), run(True, n, args.repeat)
        diff = max(abs(a - b) for a, b in zip(nb["checksum"], npy["checksum"]))
        for r in (npy, nb):
            sp = npy["convolve_s"] / r["convolve_s"]
            print(f"{n:>5} {r['backend']:>8} {r['convolve_s']:>13.4f} {r['interp_200k_s']:>16.4f} {sp:>7.1f}x")
        print(f"{'':>5} checksum difference between backends: {diff:.2e}")


if __name__ == "__main__":
    main()
