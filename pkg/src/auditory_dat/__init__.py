"""Invertible discrete auditory transform (DAT) and spectral-thresholding denoising."""

from .denoise import (
    DenoiseConfig,
    DenoiseReport,
    FramePlan,
    add_noise_at_snr,
    denoise_frame_dat,
    denoise_frame_dft,
    denoise_signal,
    frame_signal,
    reassemble,
    run_sweep,
    snr_db,
    threshold_value,
)
from .psychoacoustics import (
    SpreadingKernel,
    bark,
    bark_schroeder,
    bark_zwicker,
    build_kernel,
    kernel_time_kernel,
    spreading_energy,
)
from .signal_io import (
    WavClip,
    gen_square,
    gen_unvoiced_surrogate,
    gen_voiced_surrogate,
    read_wav,
    write_wav,
)
from .spectral import dft_forward, dft_inverse, plancherel_residual
from .transform import (
    DatCoefficients,
    DatSpectrum,
    basis_function,
    dat_forward,
    dat_forward_direct,
    dat_forward_fast,
    dat_inverse,
    dat_spectrum,
    dat_spectrum_from_coefficients,
)

__version__ = "0.1.0"
