"""DFT conventions and the identities built on them.

Forward transforms are unnormalized and inverse transforms carry the 1/N
factor, i.e. ``dft_inverse(dft_forward(s)) == s``. numpy's FFT uses the same
convention, so the wrappers here only add validation.
"""

import numpy as np


def as_samples(x, *, name="signal", min_length=2, dtype=None):
    """Return ``x`` as a 1-D array, rejecting short or non-finite input."""
    arr = np.asarray(x, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"{name} must have at least {min_length} samples, got {arr.size}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"{name} has a non-finite value {arr[i]!r} at index {i}")
    return arr


def dft_forward(signal):
    """Unnormalized DFT, ``s_hat[k] = sum_n s[n] exp(-2j pi n k / N)``."""
    s = as_samples(signal)
    return np.fft.fft(s)


def dft_inverse(spectrum):
    """Inverse DFT with the 1/N factor. Always returns a complex array."""
    s_hat = as_samples(spectrum, name="spectrum", dtype=complex)
    return np.fft.ifft(s_hat)


def plancherel_residual(s, t):
    """Relative mismatch between ``<s, t>`` and ``<s_hat, t_hat> / N``.

    Normalized by the larger magnitude of the two sides; 0 when both vanish.
    """
    s = as_samples(s, name="s")
    t = as_samples(t, name="t")
    if s.shape != t.shape:
        raise ValueError(f"length mismatch: {s.size} vs {t.size}")
    n = s.size
    time_side = np.vdot(t, s)  # sum s_n conj(t_n)
    freq_side = np.vdot(dft_forward(t), dft_forward(s)) / n
    scale = max(abs(time_side), abs(freq_side))
    if scale == 0.0:
        return 0.0
    return float(abs(time_side - freq_side) / scale)


def energy_residual(s):
    """Relative mismatch of ``sum |s|^2`` against ``sum |s_hat|^2 / N``."""
    s = as_samples(s)
    energy = float(np.sum(np.abs(s) ** 2))
    spectral = float(np.sum(np.abs(dft_forward(s)) ** 2)) / s.size
    if energy == 0.0:
        return abs(spectral)
    return abs(energy - spectral) / energy


def is_power_of_two(n):
    n = int(n)
    return n > 0 and n & (n - 1) == 0
