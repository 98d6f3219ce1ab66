"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once (numba compiles on first call) and then timed
as the best of ``--repeat`` runs.  Results of both backends are checked for
agreement before timing.
"""
import argparse
import time

import numpy as np

from sasfwm import _accel, _kernels


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    t = np.linspace(0.0, 3e-9, 2_000_000)
    shifts = np.linspace(300.0, 2400.0, 2_000_001)
    a, d_re, d_im = 2.98e15, 1.3e11, 1.67e11
    return {
        "f_time trace (2e6 samples)": (
            lambda: _kernels.f_time_trace_np(a, d_re, d_im, t),
            lambda: _kernels.f_time_trace_nb(a, d_re, d_im, t)),
        "windowed transform (2e6 samples)": (
            lambda: _kernels.windowed_transform_np(a, d_re, d_im, a, 3e-9, 2_000_000),
            lambda: _kernels.windowed_transform_nb(a, d_re, d_im, a, 3e-9, 2_000_000)),
        "chi3 grid (2e6 shifts)": (
            lambda: _kernels.chi3_grid_np(171.0, 0.0, 0.37, -0.07, 1332.0, 1.77, 1.0, shifts),
            lambda: _kernels.chi3_grid_nb(171.0, 0.0, 0.37, -0.07, 1332.0, 1.77, 1.0, shifts)),
    }


def agree(x, y):
    if isinstance(x, tuple):
        return all(agree(u, v) for u, v in zip(x, y))
    x, y = np.asarray(x), np.asarray(y)
    return np.allclose(x, y, rtol=1e-9, atol=1e-9 * np.max(np.abs(x)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':36s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, (np_fn, nb_fn) in cases().items():
        if not agree(np_fn(), nb_fn()):
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(np_fn, args.repeat)
        t_nb = best_of(nb_fn, args.repeat)
        print(f"{name:36s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
