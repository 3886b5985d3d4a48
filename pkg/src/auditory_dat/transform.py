"""Forward and inverse discrete auditory transform.

Coefficients ``S[j, m]`` are indexed by time ``j`` (0..N-1) and band ``m``
(0..M-1). Every band is the circular convolution of the signal with the
band's time-domain kernel, which in the frequency domain reads

    S[j, m] = sum_n s_hat[n] X[m, n] exp(2j pi n j / N)

so the fast path costs one inverse FFT per band. Inversion multiplies each
band's spectrum by the kernel row again and sums over bands; columns of X
having unit norm makes this exact.
"""

from dataclasses import dataclass

import numpy as np

from .psychoacoustics import SpreadingKernel, kernel_time_kernel
from .spectral import as_samples, dft_forward

# Realness tolerance for outputs of real-input pipelines, relative to peak.
IMAG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DatCoefficients:
    values: np.ndarray  # complex, shape (N, M)
    kernel: SpreadingKernel

    def __post_init__(self):
        expected = (self.kernel.n, self.kernel.n_bands)
        if self.values.shape != expected:
            raise ValueError(f"coefficient shape {self.values.shape} does not match kernel {expected}")

    @property
    def shape(self):
        return self.values.shape

    def max_imag_ratio(self):
        peak = np.max(np.abs(self.values))
        if peak == 0:
            return 0.0
        return float(np.max(np.abs(self.values.imag)) / peak)


@dataclass(frozen=True)
class DatSpectrum:
    values: np.ndarray
    band_frequencies_hz: np.ndarray


def _frame(s, kernel):
    s = as_samples(s)
    if s.size != kernel.n:
        raise ValueError(f"signal length {s.size} does not match kernel length {kernel.n}")
    return s


def dat_forward_direct(s, kernel: SpreadingKernel) -> DatCoefficients:
    """Reference O(N^2 M) evaluation as a circular convolution with K."""
    s = _frame(s, kernel)
    n = kernel.n
    k = kernel_time_kernel(kernel)  # (N, M)
    lag = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n  # lag[j, l] = j - l
    values = np.einsum("l,jlm->jm", s.astype(complex), k[lag])
    return DatCoefficients(values, kernel)


def dat_forward_fast(s, kernel: SpreadingKernel) -> DatCoefficients:
    """FFT evaluation, one inverse DFT per band."""
    s = _frame(s, kernel)
    s_hat = dft_forward(s)
    bands = kernel.n * np.fft.ifft(s_hat[None, :] * kernel.matrix, axis=1)
    return DatCoefficients(np.ascontiguousarray(bands.T), kernel)


dat_forward = dat_forward_fast


def dat_inverse(coeffs, kernel: SpreadingKernel = None, *, return_complex=False):
    """Reconstruct a signal from coefficients.

    ``coeffs`` may be a :class:`DatCoefficients` or a raw ``(N, M)`` array,
    in which case ``kernel`` is required. Coefficients outside the range of
    the forward transform (e.g. thresholded ones) are mapped through the same
    formula, which projects them back onto a signal.

    By default the real part is returned after checking that the imaginary
    residual is at most ``IMAG_TOL`` of the peak; pass ``return_complex=True``
    for arbitrary complex coefficients.
    """
    if isinstance(coeffs, DatCoefficients):
        kernel = kernel or coeffs.kernel
        values = coeffs.values
    else:
        if kernel is None:
            raise ValueError("a kernel is required for raw coefficient arrays")
        values = np.asarray(coeffs, dtype=complex)
    n, n_bands = kernel.n, kernel.n_bands
    if values.shape != (n, n_bands):
        raise ValueError(f"coefficient shape {values.shape} does not match kernel {(n, n_bands)}")

    band_spectra = np.fft.fft(values, axis=0)  # (N, M), column m is the DFT of S[:, m]
    # fixed-order reduction over bands keeps the result independent of scheduling
    s_hat = np.sum(np.conj(kernel.matrix.T) * band_spectra, axis=1) / n
    s = np.fft.ifft(s_hat)
    if return_complex:
        return s
    return real_part(s, what="reconstruction")


def real_part(z, *, what="result", tol=IMAG_TOL):
    """Real part of ``z`` after checking its imaginary residual against the peak."""
    peak = np.max(np.abs(z)) if z.size else 0.0
    imag = np.max(np.abs(z.imag)) if z.size else 0.0
    if imag > tol * peak:
        raise ValueError(f"{what} is not real: imaginary residual {imag:.3g} vs peak {peak:.3g}")
    return np.ascontiguousarray(z.real)


def dat_spectrum(s, kernel: SpreadingKernel) -> DatSpectrum:
    """Per-band magnitude ``sqrt(sum_n |s_hat[n] X[m, n]|^2)``."""
    s = _frame(s, kernel)
    s_hat = dft_forward(s)
    values = np.sqrt(np.sum(np.abs(s_hat[None, :] * kernel.matrix) ** 2, axis=1))
    return DatSpectrum(values, kernel.band_frequencies_hz)


def dat_spectrum_from_coefficients(coeffs: DatCoefficients) -> DatSpectrum:
    """Same spectrum computed in time as ``sqrt(sum_j |S[j, m]|^2 / N)``."""
    kernel = coeffs.kernel
    values = np.sqrt(np.sum(np.abs(coeffs.values) ** 2, axis=0) / kernel.n)
    return DatSpectrum(values, kernel.band_frequencies_hz)


def basis_function(kernel: SpreadingKernel, m):
    """Time-domain atom of band ``m``: N times the inverse DFT of conj(X[m])."""
    m = int(m)
    if not 0 <= m < kernel.n_bands:
        raise ValueError(f"band index {m} out of range [0, {kernel.n_bands})")
    atom = kernel.n * np.fft.ifft(np.conj(kernel.matrix[m]))
    return real_part(atom, what=f"basis function {m}", tol=1e-10)


def energy_residual(s, coeffs: DatCoefficients):
    """Relative mismatch of ``sum |S|^2 / N^2`` against ``sum |s|^2``."""
    s = np.asarray(s)
    n = coeffs.kernel.n
    energy = float(np.sum(np.abs(s) ** 2))
    transformed = float(np.sum(np.abs(coeffs.values) ** 2)) / n ** 2
    if energy == 0.0:
        return abs(transformed)
    return abs(transformed - energy) / energy


def plancherel_residual(s, t, s_coeffs: DatCoefficients, t_coeffs: DatCoefficients):
    """Relative mismatch of ``<S, T> / N^2`` against ``<s, t>``."""
    n = s_coeffs.kernel.n
    time_side = np.vdot(np.asarray(t), np.asarray(s))
    dat_side = np.vdot(t_coeffs.values, s_coeffs.values) / n ** 2
    scale = max(abs(time_side), abs(dat_side))
    if scale == 0.0:
        return 0.0
    return float(abs(time_side - dat_side) / scale)
