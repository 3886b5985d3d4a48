"""Time-domain basis functions for bands 20 and 40 and how concentrated they are."""

import numpy as np

from auditory_dat import basis_function, build_kernel


def concentration(atom, half_width=16):
    e = atom ** 2
    peak = int(np.argmax(np.abs(atom)))
    idx = (peak + np.arange(-half_width, half_width)) % atom.size
    return e[idx].sum() / e.sum()


def main():
    kernel = build_kernel(128, 16000.0)
    for m in (20, 40):
        atom = np.fft.fftshift(basis_function(kernel, m))
        print(f"band {m}: {100 * concentration(atom):.2f}% of energy within 32 samples of the peak")
        print("  centre samples:", np.array2string(atom[56:72], precision=2, suppress_small=True))


if __name__ == "__main__":
    main()
