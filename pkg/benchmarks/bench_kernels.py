"""Time the numpy and numba kernel backends on representative problem sizes.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Numba timings exclude the first (compiling) call.
"""

import argparse
import timeit

import numpy as np

from dcrlab import _kernels
from dcrlab.hermite import build_basis
from dcrlab.resonant import sextic_tensor


def cases(rng):
    x = np.linspace(-30, 30, 2000)
    w = rng.standard_normal((49, 256, 26)) + 1j * rng.standard_normal((49, 256, 26))
    u = rng.standard_normal((256, 16)) + 1j * rng.standard_normal((256, 16))
    tensor = sextic_tensor(build_basis(6)).entries
    c = rng.standard_normal((256, 6)) + 1j * rng.standard_normal((256, 6))
    return {
        "hermite_matrix(256 modes, 2000 pts)": ("hermite_matrix", (256, x)),
        "quintic(49x256x26)": ("quintic", (w,)),
        "sextic_density(49x256x26)": ("sextic_density", (w,)),
        "quintic_phase(256x16)": ("quintic_phase", (u, 0.01)),
        "resonant_direct(256 pts, 6 modes)": ("resonant_direct", (c, tensor)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba not installed; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for label, (name, fargs) in cases(rng).items():
        row = []
        backends = [_kernels.NUMPY_KERNELS]
        if _kernels.HAVE_NUMBA:
            backends.append(_kernels.NUMBA_KERNELS)
        for table in backends:
            fn = table[name]
            fn(*fargs)  # warm-up / compile
            row.append(min(timeit.repeat(lambda: fn(*fargs), number=1, repeat=args.repeat)) * 1e3)
        if len(row) == 2:
            print(f"{label:40s} {row[0]:12.3f} {row[1]:12.3f} {row[0] / row[1]:8.2f}")
        else:
            print(f"{label:40s} {row[0]:12.3f} {'-':>12s} {'-':>8s}")


if __name__ == "__main__":
    main()
