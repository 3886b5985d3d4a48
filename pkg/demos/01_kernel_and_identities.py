"""Build a spreading kernel and check the transform's exact identities.

Run with ``python demos/01_kernel_and_identities.py``.
"""

import numpy as np

from auditory_dat import build_kernel, dat_forward_fast, dat_inverse
from auditory_dat.psychoacoustics import column_norm_residual
from auditory_dat.transform import energy_residual


## [kernel]
def kernel_overview(n=128, fs=16000.0):
    kernel = build_kernel(n, fs)
    print(f"kernel {kernel.matrix.shape}, max column-norm error {column_norm_residual(kernel):.1e}")
    for m in range(5, 56, 10):
        row = kernel.matrix[m, : n // 2 + 1]
        peak = int(np.argmax(row))
        print(f"  band {m:2d} ({kernel.band_frequencies_hz[m]:6.0f} Hz): peak at bin {peak}, "
              f"height {row[peak]:.3f}")
    return kernel
## [kernel]


## [identities]
def identities(kernel, trials=5):
    rng = np.random.default_rng(0)
    for _ in range(trials):
        s = rng.standard_normal(kernel.n)
        coeffs = dat_forward_fast(s, kernel)
        back = dat_inverse(coeffs)
        print(f"  round trip {np.linalg.norm(back - s) / np.linalg.norm(s):.1e}   "
              f"energy {energy_residual(s, coeffs):.1e}")
## [identities]


def main():
    kernel = kernel_overview()
    identities(kernel)


if __name__ == "__main__":
    main()
