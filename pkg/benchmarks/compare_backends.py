"""Time the compiled and numpy kernel backends side by side.

    python3 benchmarks/compare_backends.py --min-n 16 --max-n 22

Prints one row per (n, operation) with the median time of each backend and
the speedup of the compiled kernels. The ``simulate`` rows run an
uncompressed FRQI circuit for a random image with ``2**m`` pixels,
``m = min(n, --sim-max-n)``.
"""
import argparse
import statistics
import time

import numpy as np

from qpixl._backend import available_backends
from qpixl.codec import ImageBuffer
from qpixl.simulator import simulate
from qpixl.synth import encode_image
from qpixl.walsh import Direction, gray_permute, sfwht


def median_ms(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(times)


def transform_case(op, n, backend, rng):
    pristine = rng.random(1 << n)
    work = np.empty_like(pristine)
    kernel = sfwht if op == "sfwht" else gray_permute

    def run():
        np.copyto(work, pristine)
        kernel(work, Direction.FORWARD, backend)

    return run


def simulate_case(m, backend, rng):
    side = 1 << (m // 2)
    img = ImageBuffer(side, (1 << m) // side, 1, 8, rng.integers(0, 256, 1 << m))
    circuit = encode_image(img, "frqi").circuit
    return lambda: simulate(circuit, backend=backend)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-n", type=int, default=16)
    ap.add_argument("--max-n", type=int, default=22)
    ap.add_argument("--sim-max-n", type=int, default=12)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernels are not built; timing the numpy backend only")
    rng = np.random.default_rng(0)
    print(f"{'n':>3} {'op':<13}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'speedup':>10}")
    for n in range(args.min_n, args.max_n + 1):
        for op in ("sfwht", "gray_permute", "simulate"):
            ms = {}
            for b in backends:
                if op == "simulate":
                    fn = simulate_case(min(n, args.sim_max_n), b, rng)
                else:
                    fn = transform_case(op, n, b, rng)
                ms[b] = median_ms(fn, args.reps)
            speedup = ms["numpy"] / ms["compiled"] if "compiled" in ms else float("nan")
            print(f"{n:>3} {op:<13}" + "".join(f"{ms[b]:>14.3f}" for b in backends) + f"{speedup:>10.2f}")


if __name__ == "__main__":
    main()
