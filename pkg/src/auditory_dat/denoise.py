"""Spectral-thresholding denoisers for the DFT and DAT domains.

A noisy signal is cut into non-overlapping frames. For each frame the
threshold is the mean DFT magnitude of that (noisy) frame, scaled by
``alpha``; every transform coefficient whose magnitude falls below it is
zeroed before inverting. The same threshold is applied to DAT coefficients.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .psychoacoustics import SpreadingKernel, build_kernel
from .spectral import as_samples, dft_forward, dft_inverse, is_power_of_two
from .transform import dat_forward_fast, dat_inverse, real_part

TRANSFORMS = ("dat", "dft")
DEFAULT_SNR_GRID = tuple(range(-12, 13, 3))


@lru_cache(maxsize=16)
def cached_kernel(n, sample_rate_hz):
    return build_kernel(n, sample_rate_hz)


@dataclass(frozen=True)
class FramePlan:
    frame_length: int = 128
    hop: int = None
    padding: str = "zero"  # or "drop"

    def __post_init__(self):
        if not is_power_of_two(self.frame_length):
            raise ValueError(f"frame length must be a power of 2, got {self.frame_length}")
        if self.hop is None:
            object.__setattr__(self, "hop", self.frame_length)
        if self.hop != self.frame_length:
            raise ValueError("only non-overlapping frames (hop == frame_length) are supported")
        if self.padding not in ("zero", "drop"):
            raise ValueError(f"unknown padding policy {self.padding!r}")


@dataclass(frozen=True, eq=False)
class Frames:
    frames: np.ndarray  # (n_frames, frame_length)
    length: int  # samples covered by the source signal

    def __len__(self):
        return self.frames.shape[0]


def frame_signal(s, plan: FramePlan = FramePlan()) -> Frames:
    """Split into consecutive frames; a trailing partial frame is zero-padded."""
    s = np.asarray(s, dtype=float)
    n = plan.frame_length
    if s.size == 0:
        return Frames(np.zeros((0, n)), 0)
    s = as_samples(s, min_length=1)
    n_full, rest = divmod(s.size, n)
    if rest and plan.padding == "drop":
        return Frames(s[: n_full * n].reshape(n_full, n).copy(), n_full * n)
    padded = np.zeros((n_full + (rest > 0)) * n)
    padded[: s.size] = s
    return Frames(padded.reshape(-1, n), s.size)


def reassemble(frames: Frames):
    return frames.frames.reshape(-1)[: frames.length].copy()


def threshold_value(frame, alpha=1.0):
    """``alpha`` times the mean DFT magnitude of ``frame``."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return float(alpha * np.mean(np.abs(dft_forward(frame))))


def denoise_frame_dft(frame, threshold):
    """Zero DFT bins with magnitude below ``threshold`` and invert."""
    frame = as_samples(frame, name="frame")
    s_hat = dft_forward(frame)
    keep = np.abs(s_hat) >= threshold
    n = s_hat.size
    mirror = np.concatenate(([0], np.arange(n - 1, 0, -1)))
    # conjugate pairs share a magnitude, so the mask is already symmetric
    assert np.array_equal(keep, keep[mirror]), "DFT threshold mask broke conjugate symmetry"
    return real_part(dft_inverse(np.where(keep, s_hat, 0.0)), what="DFT reconstruction")


def denoise_frame_dat(frame, threshold, kernel: SpreadingKernel):
    """Zero DAT coefficients with magnitude below ``threshold`` and invert."""
    coeffs = dat_forward_fast(frame, kernel)
    values = np.where(np.abs(coeffs.values) >= threshold, coeffs.values, 0.0)
    return dat_inverse(values, kernel)


@dataclass(frozen=True)
class DenoiseConfig:
    transform: str = "dat"
    alpha: float = 1.0
    frame_length: int = 128
    sample_rate_hz: float = 16000.0
    threshold_scope: str = "frame"  # or "segment"

    def __post_init__(self):
        if self.transform not in TRANSFORMS:
            raise ValueError(f"transform must be one of {TRANSFORMS}, got {self.transform!r}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.threshold_scope not in ("frame", "segment"):
            raise ValueError(f"unknown threshold scope {self.threshold_scope!r}")
        FramePlan(self.frame_length)

    @property
    def plan(self):
        return FramePlan(self.frame_length)


def denoise_signal(noisy, config: DenoiseConfig = DenoiseConfig()):
    """Frame, threshold and reconstruct a whole signal."""
    framed = frame_signal(noisy, config.plan)
    if len(framed) == 0:
        return np.zeros(0)
    thresholds = [threshold_value(f, config.alpha) for f in framed.frames]
    if config.threshold_scope == "segment":
        thresholds = [float(np.mean(thresholds))] * len(thresholds)
    if config.transform == "dft":
        out = [denoise_frame_dft(f, t) for f, t in zip(framed.frames, thresholds)]
    else:
        kernel = cached_kernel(config.frame_length, float(config.sample_rate_hz))
        out = [denoise_frame_dat(f, t, kernel) for f, t in zip(framed.frames, thresholds)]
    return reassemble(Frames(np.stack(out), framed.length))


def snr_db(clean, test):
    """``10 log10(sum clean^2 / sum (clean - test)^2)``; ``inf`` for an exact match."""
    clean = np.asarray(clean, dtype=float)
    test = np.asarray(test, dtype=float)
    if clean.shape != test.shape:
        raise ValueError(f"length mismatch: {clean.shape} vs {test.shape}")
    power = float(np.sum(clean ** 2))
    if power == 0.0:
        raise ValueError("clean signal is identically zero")
    err = float(np.sum((clean - test) ** 2))
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(power / err)


def add_noise_at_snr(clean, target_snr_db, seed):
    """Add seeded white Gaussian noise so the realized SNR equals the target.

    The noise is rescaled by its own realized power. ``seed`` is anything
    :func:`numpy.random.default_rng` accepts. An infinite target returns a
    copy of ``clean``.
    """
    clean = np.asarray(clean, dtype=float)
    power = float(np.sum(clean ** 2))
    if power == 0.0:
        raise ValueError("clean signal is identically zero")
    if math.isinf(target_snr_db) and target_snr_db > 0:
        return clean.copy()
    g = np.random.default_rng(seed).standard_normal(clean.size)
    g *= math.sqrt(power / 10.0 ** (target_snr_db / 10.0) / float(np.sum(g ** 2)))
    return clean + g


@dataclass(frozen=True)
class SweepRecord:
    segment: str
    transform: str
    input_snr_db: float
    output_snr_db: float


@dataclass
class DenoiseReport:
    records: list = field(default_factory=list)
    seed: int = 0

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["segment", "transform", "input_snr_db", "output_snr_db", "seed"])
        for r in self.records:
            w.writerow([r.segment, r.transform, _fmt(r.input_snr_db), _fmt(r.output_snr_db), self.seed])
        return buf.getvalue()

    def select(self, segment=None, transform=None):
        return [r for r in self.records
                if (segment is None or r.segment == segment)
                and (transform is None or r.transform == transform)]


def _fmt(x):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def run_sweep(segments, snr_grid: Sequence[float] = DEFAULT_SNR_GRID, *, seed=0,
              frame_length=128, sample_rate_hz=16000.0, alpha_dft=1.0, alpha_dat=1.0,
              threshold_scope="frame", transforms=TRANSFORMS) -> DenoiseReport:
    """Denoise every segment at every input SNR with each transform.

    ``segments`` maps labels to clean signals (or is a sequence of
    ``(label, signal)`` pairs). The noise for segment ``i`` at grid position
    ``k`` comes from ``numpy.random.default_rng([seed, i, k])`` and is shared
    by both transforms. Records are ordered by segment (input order), then
    transform name, then input SNR.
    """
    items = list(segments.items()) if hasattr(segments, "items") else list(segments)
    grid = list(snr_grid)
    if not grid:
        raise ValueError("SNR grid is empty")
    alphas = {"dft": alpha_dft, "dat": alpha_dat}
    records = []
    for i, (label, clean) in enumerate(items):
        clean = np.asarray(clean, dtype=float)
        if clean.size < frame_length:
            raise ValueError(f"segment {label!r} is shorter than one frame ({clean.size} < {frame_length})")
        rows = []
        for k, target in enumerate(grid):
            noisy = add_noise_at_snr(clean, target, [int(seed), i, k])
            for name in transforms:
                cfg = DenoiseConfig(name, alphas[name], frame_length, sample_rate_hz, threshold_scope)
                out = denoise_signal(noisy, cfg)
                rows.append(SweepRecord(str(label), name, float(target), snr_db(clean, out)))
        rows.sort(key=lambda r: (r.transform, r.input_snr_db))
        records.extend(rows)
    return DenoiseReport(records, int(seed))
