"""Command-line entry point: ``auditory-dat <subcommand> ...``.

Every subcommand writes CSV (or WAV) to ``--out`` or stdout. Failures print
a single ``error: ...`` line on stderr and exit nonzero (2 for usage errors,
1 otherwise).
"""

import argparse
import contextlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import denoise as dn
from . import signal_io as sio
from .spectral import dft_forward, is_power_of_two
from .transform import dat_forward_fast, dat_inverse, dat_spectrum

DEFAULT_SEED = 20070917
SEED_ENV = "AUDITORY_DAT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def parse_grid(text):
    """``-12:12:3`` (start:stop:step, inclusive) or a comma list like ``-6,0,6``."""
    text = text.strip()
    if not text:
        raise UsageError("SNR grid is empty")
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise UsageError(f"bad grid {text!r}; expected start:stop:step with step > 0")
        start, stop, step = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        grid = [start + i * step for i in range(max(count, 0))]
    else:
        grid = [float(p) for p in text.split(",") if p.strip()]
    if not grid:
        raise UsageError("SNR grid is empty")
    return grid


def parse_rows(text, n_bands):
    """Row filter: ``5:10:55`` (start:step:stop, inclusive) or ``1,2,3``."""
    if ":" in text:
        start, step, stop = (int(p) for p in text.split(":"))
        rows = list(range(start, stop + 1, step))
    else:
        rows = [int(p) for p in text.split(",") if p.strip()]
    bad = [r for r in rows if not 0 <= r < n_bands]
    if bad or not rows:
        raise UsageError(f"row filter {text!r} selects bands outside [0, {n_bands})")
    return rows


def _g(x):
    return f"{x:.17g}"


def _db(x):
    return "-inf" if x == 0 else _g(20.0 * math.log10(x))


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load(path, fs):
    if not Path(path).exists():
        raise UsageError(f"input file not found: {path}")
    samples, rate = sio.load_signal(path)
    return samples, (rate if rate is not None else fs)


def _kernel(args, fs=None):
    if not is_power_of_two(args.n) or args.n < 4:
        raise UsageError(f"--n must be a power of 2 >= 4, got {args.n}")
    return dn.cached_kernel(args.n, float(fs if fs is not None else args.fs))


def cmd_kernel(args):
    kernel = _kernel(args)
    rows = parse_rows(args.rows, kernel.n_bands) if args.rows else range(kernel.n_bands)
    with _output(args.out) as fh:
        fh.write("m," + ",".join(str(i) for i in range(kernel.n)) + "\n")
        for m in rows:
            fh.write(f"{m}," + ",".join(_g(v) for v in kernel.matrix[m]) + "\n")


def cmd_spectrum(args):
    samples, fs = _load(args.input, args.fs)
    kernel = _kernel(args, fs)
    n = kernel.n
    n_frames = samples.size // n
    if n_frames == 0:
        raise ValueError(f"input has {samples.size} samples, fewer than one frame of {n}")
    with _output(args.out) as fh:
        fh.write("frame,kind,index,frequency_hz,magnitude,magnitude_db\n")
        for i in range(n_frames):
            frame = samples[i * n:(i + 1) * n]
            mag = np.abs(dft_forward(frame))[: n // 2 + 1]
            for k, v in enumerate(mag):
                fh.write(f"{i},dft,{k},{_g(fs * k / n)},{_g(v)},{_db(v)}\n")
            spec = dat_spectrum(frame, kernel)
            for m, (f, v) in enumerate(zip(spec.band_frequencies_hz, spec.values)):
                fh.write(f"{i},dat,{m},{_g(f)},{_g(v)},{_db(v)}\n")


COEFF_MAGIC = "# dat-coefficients"


def write_coefficients(fh, values, fs):
    n, n_bands = values.shape
    fh.write(f"{COEFF_MAGIC} n={n} bands={n_bands} fs={_g(fs)}\n")
    fh.write("j," + ",".join(f"re_{m},im_{m}" for m in range(n_bands)) + "\n")
    for j in range(n):
        parts = []
        for v in values[j]:
            parts.append(_g(v.real))
            parts.append(_g(v.imag))
        fh.write(f"{j}," + ",".join(parts) + "\n")


def read_coefficients(path):
    """Parse a coefficient CSV; returns ``(values, fs)``."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}:1: empty coefficient file")
    head = lines[0].split()
    if lines[0].split(" n=")[0] != COEFF_MAGIC or len(head) != 5:
        raise ValueError(f"{path}:1: missing '{COEFF_MAGIC} n=.. bands=.. fs=..' header")
    try:
        meta = dict(tok.split("=", 1) for tok in head[2:])
        n, n_bands, fs = int(meta["n"]), int(meta["bands"]), float(meta["fs"])
    except (KeyError, ValueError):
        raise ValueError(f"{path}:1: malformed header {lines[0]!r}") from None
    rows = [ln for ln in lines[2:] if ln.strip()]
    if len(lines) < 2 or len(rows) != n:
        raise ValueError(f"{path}: expected {n} coefficient rows, found {len(rows)}")
    values = np.empty((n, n_bands), dtype=complex)
    for j, line in enumerate(rows):
        lineno = j + 3
        fields = line.split(",")
        if len(fields) != 1 + 2 * n_bands:
            raise ValueError(f"{path}:{lineno}: expected {1 + 2 * n_bands} fields, found {len(fields)}")
        try:
            if int(fields[0]) != j:
                raise ValueError
            nums = np.array([float(x) for x in fields[1:]])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed row") from None
        values[j] = nums[0::2] + 1j * nums[1::2]
    return values, fs


def cmd_transform(args):
    samples, fs = _load(args.input, args.fs)
    kernel = _kernel(args, fs)
    n = kernel.n
    start = args.frame * n
    if samples.size < start + n:
        raise ValueError(f"input has {samples.size} samples; frame {args.frame} needs {start + n}")
    coeffs = dat_forward_fast(samples[start:start + n], kernel)
    with _output(args.out) as fh:
        write_coefficients(fh, coeffs.values, fs)


def _write_signal(samples, fs, out):
    if out is not None and out.lower().endswith(".wav"):
        sio.write_wav(sio.WavClip(samples, fs), out)
        return
    with _output(out) as fh:
        fh.write("sample\n")
        for v in samples:
            fh.write(_g(v) + "\n")


def cmd_invert(args):
    if not Path(args.input).exists():
        raise UsageError(f"input file not found: {args.input}")
    values, fs = read_coefficients(args.input)
    if values.shape != (args.n, args.n // 2):
        raise ValueError(f"coefficient file is {values.shape[0]}x{values.shape[1]} "
                         f"but --n {args.n} expects {args.n}x{args.n // 2}")
    kernel = _kernel(args, fs)
    _write_signal(dat_inverse(values, kernel), fs, args.out)


def cmd_denoise(args):
    if args.input is None and args.clean is None:
        raise UsageError("denoise needs an input file or --clean")
    clean = noisy = None
    fs = args.fs
    if args.clean is not None:
        clean, fs = _load(args.clean, args.fs)
    if args.input is not None:
        noisy, fs = _load(args.input, fs)
    elif args.target_snr is None:
        raise UsageError("--clean without an input file requires --target-snr")
    else:
        noisy = dn.add_noise_at_snr(clean, args.target_snr, args.seed)
    cfg = dn.DenoiseConfig(args.transform, args.alpha, args.n, fs, args.threshold_scope)
    out = dn.denoise_signal(noisy, cfg)
    _write_signal(out, fs, args.out)
    line = f"transform={args.transform} alpha={_g(args.alpha)}"
    if clean is not None:
        if clean.shape != noisy.shape:
            raise ValueError("clean reference and noisy input differ in length")
        line += (f" input_snr_db={dn._fmt(dn.snr_db(clean, noisy))}"
                 f" output_snr_db={dn._fmt(dn.snr_db(clean, out))}")
    print(line, file=sys.stderr if args.out in (None, "-") else sys.stdout)


def builtin_segments(fs, seed=0):
    """Two voiced and two unvoiced surrogates standing in for two speakers."""
    return {
        "voiced-a": sio.gen_voiced_surrogate(512, fs, seed=seed),
        "voiced-b": sio.gen_voiced_surrogate(512, fs, seed=seed + 1),
        "unvoiced-a": sio.gen_unvoiced_surrogate(512, fs, seed=seed),
        "unvoiced-b": sio.gen_unvoiced_surrogate(512, fs, seed=seed + 1),
    }


def cmd_sweep(args):
    grid = parse_grid(args.snr_grid)
    fs = args.fs
    if args.segments:
        segments = {}
        for p in args.segments:
            samples, fs = _load(p, fs)
            segments[Path(p).stem] = samples
    else:
        segments = builtin_segments(fs)
    _kernel(args, fs)
    report = dn.run_sweep(
        segments, grid, seed=args.seed, frame_length=args.n, sample_rate_hz=fs,
        alpha_dft=args.alpha if args.alpha_dft is None else args.alpha_dft,
        alpha_dat=args.alpha if args.alpha_dat is None else args.alpha_dat,
        threshold_scope=args.threshold_scope)
    with _output(args.out) as fh:
        fh.write(report.to_csv())


def build_parser(seed):
    parser = _Parser(prog="auditory-dat", description="Invertible discrete auditory transform tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--n", type=int, default=128, help="frame length (power of 2)")
        p.add_argument("--fs", type=float, default=16000.0, help="sample rate in Hz")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        return p

    p = common(sub.add_parser("kernel", help="export the spreading kernel as CSV"))
    p.add_argument("--rows", default=None, help="band filter, e.g. 5:10:55")
    p.set_defaults(func=cmd_kernel)

    p = common(sub.add_parser("spectrum", help="per-frame DFT and DAT spectra"))
    p.add_argument("input")
    p.set_defaults(func=cmd_spectrum)

    p = common(sub.add_parser("transform", help="DAT coefficients of one frame"))
    p.add_argument("input")
    p.add_argument("--frame", type=int, default=0)
    p.set_defaults(func=cmd_transform)

    p = common(sub.add_parser("invert", help="reconstruct a frame from a coefficient CSV"))
    p.add_argument("input")
    p.set_defaults(func=cmd_invert)

    def denoising(p):
        p.add_argument("--alpha", type=float, default=1.0, help="threshold scale")
        p.add_argument("--seed", type=int, default=seed)
        p.add_argument("--threshold-scope", choices=("frame", "segment"), default="frame")
        return p

    p = denoising(common(sub.add_parser("denoise", help="threshold-denoise one signal")))
    p.add_argument("input", nargs="?", help="noisy WAV/CSV")
    p.add_argument("--clean", help="clean reference; with no input, noise is added at --target-snr")
    p.add_argument("--target-snr", type=float, default=None)
    p.add_argument("--transform", choices=("dft", "dat"), default="dat")
    p.set_defaults(func=cmd_denoise)

    p = denoising(common(sub.add_parser("sweep", help="DAT vs DFT denoising over an SNR grid")))
    p.add_argument("--snr-grid", default="-12:12:3", help="start:stop:step or comma list; write --snr-grid=-6,0 for negative lists")
    p.add_argument("--alpha-dft", type=float, default=None)
    p.add_argument("--alpha-dat", type=float, default=None)
    p.add_argument("--segments", nargs="*", default=None, help="WAV/CSV clean segments")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    try:
        args = build_parser(_default_seed()).parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {' '.join(str(exc).split())}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
