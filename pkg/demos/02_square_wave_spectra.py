"""DFT vs DAT spectrum of a 500 Hz square wave (first 128-sample frame).

The DFT puts all energy at odd harmonics of bin 4 and nothing in between;
the DAT spectrum spreads it across neighbouring bands.
"""

import numpy as np

from auditory_dat import build_kernel, dat_spectrum, dft_forward, gen_square

N, FS = 128, 16000.0


def main():
    frame = gen_square(500, FS, N)
    dft_mag = np.abs(dft_forward(frame))[: N // 2 + 1]
    dat = dat_spectrum(frame, build_kernel(N, FS)).values

    print(" idx   freq_hz   |DFT|      DAT")
    for i in range(0, N // 2, 2):
        print(f"{i:4d} {FS * i / N:9.1f} {dft_mag[i]:8.3f} {dat[i]:8.3f}")

    tv = lambda x: np.abs(np.diff(x)).sum()
    print(f"total variation: DFT {tv(dft_mag):.1f}, DAT {tv(dat):.1f}")


if __name__ == "__main__":
    main()
