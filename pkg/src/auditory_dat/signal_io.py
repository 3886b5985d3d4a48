"""WAV/CSV signal input and output plus the synthetic test signals."""

import logging
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

log = logging.getLogger(__name__)

DEFAULT_SAMPLE_RATE = 16000.0


class WavError(ValueError):
    """Base class for WAV decoding problems."""


class WavHeaderError(WavError):
    pass


class UnsupportedWavError(WavError):
    pass


class EmptyWavError(WavError):
    pass


@dataclass(frozen=True, eq=False)
class WavClip:
    samples: np.ndarray
    sample_rate_hz: float
    bits: int = 16


def _pcm_to_float(raw, width, channels):
    if width == 1:
        x = np.frombuffer(raw, dtype=np.uint8).astype(float) - 128.0
    elif width == 2:
        x = np.frombuffer(raw, dtype="<i2").astype(float)
    elif width == 3:
        b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        x = (b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)).astype(np.int32)
        x = np.where(x >= 1 << 23, x - (1 << 24), x).astype(float)
    elif width == 4:
        x = np.frombuffer(raw, dtype="<i4").astype(float)
    else:
        raise UnsupportedWavError(f"unsupported sample width of {width} bytes")
    return x.reshape(-1, channels) / 2.0 ** (8 * width - 1)


def _read_float_wav(path):
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise WavHeaderError(f"{path}: {exc}") from exc
    if data.dtype != np.float32:
        raise UnsupportedWavError(f"{path}: unsupported WAV encoding {data.dtype}")
    data = data.astype(float)
    return rate, (data if data.ndim == 2 else data[:, None]), 32


def read_wav(path, *, downmix=False) -> WavClip:
    """Read a PCM (8/16/24/32-bit int) or 32-bit float WAV as mono floats.

    Integer sample ``x`` maps to ``x / 2**(bits - 1)``; 8-bit data is
    unsigned and re-centred first. Multichannel files are rejected unless
    ``downmix`` is set, which averages the channels.
    """
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            n_frames = w.getnframes()
            raw = w.readframes(n_frames)
        if len(raw) != n_frames * channels * width:
            raise WavHeaderError(f"{path}: data chunk truncated "
                                 f"({len(raw)} of {n_frames * channels * width} bytes)")
        data = _pcm_to_float(raw, width, channels)
        bits = 8 * width
    except wave.Error as exc:
        msg = str(exc)
        if "unknown format: 3" in msg:
            rate, data, bits = _read_float_wav(path)
        elif "unknown format" in msg:
            raise UnsupportedWavError(f"{path}: {msg}") from exc
        else:
            raise WavHeaderError(f"{path}: {msg}") from exc
    except EOFError as exc:
        raise WavHeaderError(f"{path}: truncated header") from exc

    if data.shape[0] == 0:
        raise EmptyWavError(f"{path}: no samples")
    if data.shape[1] > 1:
        if not downmix:
            raise UnsupportedWavError(f"{path}: {data.shape[1]} channels; mono required (use downmix)")
        samples = data.mean(axis=1)
    else:
        samples = data[:, 0]
    return WavClip(np.ascontiguousarray(samples), float(rate), bits)


def write_wav(clip: WavClip, path, bits=16):
    """Write ``clip`` as little-endian mono PCM. Returns the number of clipped samples."""
    if bits != 16:
        raise ValueError("only 16-bit output is supported")
    x = np.asarray(clip.samples, dtype=float)
    over = np.abs(x) > 1.0
    n_clipped = int(np.count_nonzero(over))
    if n_clipped:
        log.warning("clipping %d samples outside [-1, 1]", n_clipped)
    x = np.clip(x, -1.0, 1.0)
    pcm = np.clip(np.round(x * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(round(clip.sample_rate_hz)))
        w.writeframes(pcm.tobytes())
    return n_clipped


def read_signal_csv(path):
    """One sample per line; a non-numeric first line is treated as a header."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line.split(",")[0]))
            except ValueError:
                if lineno == 1 and not values:
                    continue
                raise ValueError(f"{path}:{lineno}: not a number: {line!r}") from None
    return np.asarray(values, dtype=float)


def write_signal_csv(samples, path, header="sample"):
    with open(path, "w") as fh:
        if header:
            fh.write(header + "\n")
        for v in np.asarray(samples, dtype=float):
            fh.write(f"{v:.17g}\n")


def load_signal(path, *, downmix=False):
    """Read a ``.wav`` or ``.csv`` signal. CSV input has no sample rate (returns None)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_signal_csv(path), None
    clip = read_wav(path, downmix=downmix)
    return clip.samples, clip.sample_rate_hz


def gen_square(freq_hz=500.0, sample_rate_hz=DEFAULT_SAMPLE_RATE, n_samples=128):
    """+/-1 square wave with 50% duty cycle, high at sample 0."""
    if freq_hz >= sample_rate_hz / 2:
        raise ValueError("square wave frequency must be below Nyquist")
    t = np.arange(int(n_samples))
    phase = np.mod(t * float(freq_hz), float(sample_rate_hz))
    return np.where(phase < sample_rate_hz / 2.0, 1.0, -1.0)


def gen_voiced_surrogate(n_samples=512, sample_rate_hz=DEFAULT_SAMPLE_RATE, seed=0, *,
                         f0_hz=120.0, formants_hz=(500.0, 1500.0)):
    """Harmonic complex on ``f0_hz`` up to 4 kHz under a two-formant envelope.

    The seed draws the harmonic phases. Output is scaled to unit peak.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(int(n_samples)) / sample_rate_hz
    freqs = f0_hz * np.arange(1, int(4000.0 // f0_hz) + 1)
    f1, f2 = formants_hz
    envelope = (np.exp(-0.5 * ((freqs - f1) / 150.0) ** 2)
                + 0.6 * np.exp(-0.5 * ((freqs - f2) / 250.0) ** 2) + 0.02)
    phases = rng.uniform(0.0, 2 * np.pi, freqs.size)
    s = np.sum(envelope[:, None] * np.cos(2 * np.pi * freqs[:, None] * t + phases[:, None]), axis=0)
    if s.size == 0:
        return s
    return s / np.max(np.abs(s))


def gen_unvoiced_surrogate(n_samples=512, sample_rate_hz=DEFAULT_SAMPLE_RATE, seed=0, *,
                           cutoff_hz=2500.0):
    """Seeded Gaussian noise shaped by a high-pass envelope, unit peak.

    Shaping is done on the circular spectrum, so the DC bin is removed
    exactly and the output has zero mean up to round-off.
    """
    n = int(n_samples)
    if n == 0:
        return np.zeros(0)
    noise = np.random.default_rng(seed).standard_normal(n)
    f = np.abs(np.fft.fftfreq(n, d=1.0 / sample_rate_hz))
    gain = np.zeros(n)
    pos = f > 0
    gain[pos] = 1.0 / np.sqrt(1.0 + (cutoff_hz / f[pos]) ** 8)
    s = np.fft.ifft(np.fft.fft(noise) * gain).real
    return s / np.max(np.abs(s))
