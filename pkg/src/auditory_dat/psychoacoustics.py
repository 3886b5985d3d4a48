"""Bark mapping, the Schroeder spreading function and the spreading kernel.

The kernel ``X`` is an ``M x N`` matrix (band ``m`` by DFT bin ``n``) built
from square-rooted spreading energies between band and bin frequencies and
normalized so that every column has unit L2 norm.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spectral import is_power_of_two

# Bark distance is measured as b(f_to) - b(f_from). With +1 the skirt toward
# higher bands is the shallow one (upward spread of masking).
SPREAD_DELTA_SIGN = 1.0


def _check_frequency(f):
    f = np.asarray(f, dtype=float)
    if np.any(~np.isfinite(f)):
        raise ValueError("frequency must be finite")
    if np.any(f < 0):
        raise ValueError(f"frequency must be non-negative, got min {f.min()}")
    return f


def bark_zwicker(f):
    """Zwicker & Terhardt critical-band rate in Bark.

    ``13 atan(0.00076 f) + 3.5 atan((f / 7500)^2)``
    """
    f = _check_frequency(f)
    out = 13.0 * np.arctan(0.00076 * f) + 3.5 * np.arctan((f / 7500.0) ** 2)
    return float(out) if out.ndim == 0 else out


def bark_schroeder(f):
    """Schroeder et al. variant, ``7 asinh(f / 650)``."""
    f = _check_frequency(f)
    out = 7.0 * np.arcsinh(f / 650.0)
    return float(out) if out.ndim == 0 else out


bark = bark_zwicker


def spreading_db(delta):
    """Schroeder spreading function in dB for a Bark distance ``delta``."""
    d = np.asarray(delta, dtype=float) + 0.474
    return 15.81 + 7.5 * d - 17.5 * np.sqrt(1.0 + d * d)


def spreading_energy(b_from, b_to):
    """Spreading on the energy (power) scale, ``10 ** (F / 10)``."""
    b_from = np.asarray(b_from, dtype=float)
    b_to = np.asarray(b_to, dtype=float)
    if np.any(~np.isfinite(b_from)) or np.any(~np.isfinite(b_to)):
        raise ValueError("Bark values must be finite")
    out = 10.0 ** (spreading_db(SPREAD_DELTA_SIGN * (b_to - b_from)) / 10.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SpreadingKernel:
    """Column-normalized spreading matrix for frame length ``n``.

    ``matrix`` has shape ``(n_bands, n)`` with ``n_bands = n // 2`` and is
    read-only.
    """

    matrix: np.ndarray
    sample_rate_hz: float
    n: int

    @property
    def n_bands(self):
        return self.matrix.shape[0]

    @property
    def band_frequencies_hz(self):
        return self.sample_rate_hz * np.arange(self.n_bands) / self.n

    def __repr__(self):
        return f"SpreadingKernel(n={self.n}, n_bands={self.n_bands}, sample_rate_hz={self.sample_rate_hz})"


def build_kernel(n, sample_rate_hz, *, bark_fn: Callable = bark_zwicker,
                 spreading_fn: Callable = spreading_energy) -> SpreadingKernel:
    """Build the spreading kernel for frame length ``n`` at ``sample_rate_hz``.

    Bin and band frequencies share the grid ``f_k = fs * k / n``. Column
    ``n = 0`` reuses bin 1 and columns above ``n / 2`` mirror ``n - col``.
    """
    n = int(n)
    if not is_power_of_two(n) or n < 4:
        raise ValueError(f"frame length must be a power of 2 and >= 4, got {n}")
    fs = float(sample_rate_hz)
    if not np.isfinite(fs) or fs <= 0:
        raise ValueError(f"sample rate must be positive, got {sample_rate_hz}")
    n_bands = n // 2
    half = n // 2

    b = np.asarray(bark_fn(fs * np.arange(half + 1) / n), dtype=float)
    energy = np.asarray(spreading_fn(b[:n_bands, None], b[None, :]), dtype=float)
    if np.any(energy < 0) or np.any(~np.isfinite(energy)):
        raise ValueError("spreading function must be finite and non-negative")
    amplitude = np.sqrt(energy)  # (n_bands, half + 1), bins 0..n/2
    norms = np.sqrt(np.sum(amplitude ** 2, axis=0))

    cols = np.empty(n, dtype=int)
    cols[0] = 1
    cols[1:half] = np.arange(1, half)
    cols[half:] = n - np.arange(half, n)
    used = np.unique(cols)
    if np.any(norms[used] == 0):
        k = int(used[np.flatnonzero(norms[used] == 0)[0]])
        raise ValueError(f"degenerate spreading: zero column norm at bin {k}")

    normalized = amplitude / np.where(norms == 0, 1.0, norms)
    matrix = normalized[:, cols]
    matrix.setflags(write=False)
    return SpreadingKernel(matrix=matrix, sample_rate_hz=fs, n=n)


def kernel_time_kernel(kernel: SpreadingKernel):
    """Time-domain kernel ``K[l, m] = sum_n X[m, n] exp(2j pi l n / N)``.

    Returns a complex ``(N, M)`` array.
    """
    x = kernel.matrix
    return kernel.n * np.fft.ifft(x, axis=1).T


def column_norm_residual(kernel: SpreadingKernel):
    """Largest ``|sum_m X[m, n]^2 - 1|`` over columns."""
    return float(np.max(np.abs(np.sum(kernel.matrix ** 2, axis=0) - 1.0)))


