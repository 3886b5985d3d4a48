import subprocess
import sys

import numpy as np
import pytest

from auditory_dat.cli import main, parse_grid, read_coefficients
from auditory_dat.psychoacoustics import build_kernel
from auditory_dat.signal_io import WavClip, gen_square, gen_voiced_surrogate, write_signal_csv, write_wav


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_kernel_csv(tmp_path, capsys):
    out = tmp_path / "k.csv"
    assert main(["kernel", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m," + ",".join(str(i) for i in range(128))
    assert len(lines) == 65
    x = build_kernel(128, 16000).matrix
    parsed = np.array([[float(v) for v in ln.split(",")[1:]] for ln in lines[1:]])
    assert np.array_equal(parsed, x)

    code, text, _ = run(["kernel", "--n", "8", "--fs", "8000"], capsys)
    assert code == 0 and len(text.splitlines()) == 5
    assert all(len(ln.split(",")) == 9 for ln in text.splitlines())

    code, text, _ = run(["kernel", "--rows", "5:10:55"], capsys)
    assert [ln.split(",")[0] for ln in text.splitlines()[1:]] == ["5", "15", "25", "35", "45", "55"]


def test_kernel_bad_n(capsys):
    code, _, err = run(["kernel", "--n", "100"], capsys)
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("error:")


def test_spectrum(tmp_path, capsys):
    sig = tmp_path / "sq.csv"
    write_signal_csv(gen_square(500, 16000, 300), sig)
    code, text, _ = run(["spectrum", str(sig)], capsys)
    assert code == 0
    rows = [ln.split(",") for ln in text.splitlines()[1:]]
    assert {r[0] for r in rows} == {"0", "1"}  # floor(300 / 128) frames
    assert sum(1 for r in rows if r[0] == "0" and r[1] == "dft") == 65
    assert sum(1 for r in rows if r[0] == "0" and r[1] == "dat") == 64

    zero = tmp_path / "z.csv"
    write_signal_csv(np.zeros(128), zero)
    code, text, _ = run(["spectrum", str(zero)], capsys)
    rows = [ln.split(",") for ln in text.splitlines()[1:]]
    assert all(float(r[4]) == 0 and r[5] == "-inf" for r in rows)

    short = tmp_path / "s.csv"
    write_signal_csv(np.zeros(10), short)
    assert run(["spectrum", str(short)], capsys)[0] == 1


def test_transform_invert_round_trip(tmp_path, capsys, rng):
    x = rng.uniform(-1, 1, 256)
    sig = tmp_path / "x.csv"
    write_signal_csv(x, sig)
    coeffs = tmp_path / "c.csv"
    rec = tmp_path / "r.csv"
    assert main(["transform", str(sig), "--frame", "1", "--out", str(coeffs)]) == 0
    values, fs = read_coefficients(coeffs)
    assert values.shape == (128, 64) and fs == 16000
    assert main(["invert", str(coeffs), "--out", str(rec)]) == 0
    back = np.loadtxt(rec, skiprows=1)
    assert np.max(np.abs(back - x[128:])) <= 1e-8

    code, _, err = run(["invert", str(coeffs), "--n", "64"], capsys)
    assert code == 1 and "expects" in err

    wav = tmp_path / "r.wav"
    assert main(["invert", str(coeffs), "--out", str(wav)]) == 0


def test_invert_malformed(tmp_path, capsys):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    code, _, err = run(["invert", str(empty)], capsys)
    assert code == 1 and "empty" in err

    bad = tmp_path / "b.csv"
    bad.write_text("# dat-coefficients n=8 bands=4 fs=8000\nj,re_0,im_0,re_1,im_1,re_2,im_2,re_3,im_3\n"
                   + "".join(f"{j}," + ",".join(["0"] * 8) + "\n" for j in range(3))
                   + "3,0,0,x,0,0,0,0,0\n"
                   + "".join(f"{j}," + ",".join(["0"] * 8) + "\n" for j in range(4, 8)))
    code, _, err = run(["invert", str(bad), "--n", "8"], capsys)
    assert code == 1 and "b.csv:6" in err
    assert run(["invert", str(tmp_path / "missing.csv")], capsys)[0] == 2


def test_denoise(tmp_path, capsys):
    clean = tmp_path / "clean.wav"
    write_wav(WavClip(0.5 * gen_voiced_surrogate(512, 16000, 0), 16000.0), clean)
    out = tmp_path / "out.wav"
    code, text, _ = run(["denoise", "--clean", str(clean), "--target-snr", "0", "--out", str(out)], capsys)
    assert code == 0 and out.exists()
    fields = dict(kv.split("=") for kv in text.split())
    assert float(fields["output_snr_db"]) > float(fields["input_snr_db"])

    csv_out = tmp_path / "pass.csv"
    code, text, _ = run(["denoise", str(clean), "--clean", str(clean), "--alpha", "0",
                         "--transform", "dft", "--out", str(csv_out)], capsys)
    assert code == 0
    fields = dict(kv.split("=") for kv in text.split())
    assert float(fields["output_snr_db"]) > 200

    assert run(["denoise", str(tmp_path / "nope.wav")], capsys)[0] == 2
    assert run(["denoise"], capsys)[0] == 2


def test_sweep_default(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 72
    assert {ln.split(",")[0] for ln in lines[1:]} == {"voiced-a", "voiced-b", "unvoiced-a", "unvoiced-b"}


def test_sweep_user_segments_and_grid(tmp_path, capsys):
    seg = tmp_path / "myseg.csv"
    write_signal_csv(gen_voiced_surrogate(256, 16000, 2), seg)
    code, text, _ = run(["sweep", "--segments", str(seg), "--snr-grid=-6,6", "--seed", "3"], capsys)
    assert code == 0
    rows = text.splitlines()[1:]
    assert len(rows) == 4 and all(r.startswith("myseg,") and r.endswith(",3") for r in rows)
    assert run(["sweep", "--snr-grid", ""], capsys)[0] == 2


def test_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("AUDITORY_DAT_SEED", "77")
    code, text, _ = run(["sweep", "--snr-grid", "0"], capsys)
    assert code == 0 and text.splitlines()[1].endswith(",77")
    monkeypatch.setenv("AUDITORY_DAT_SEED", "x")
    assert run(["sweep"], capsys)[0] == 2


def test_parse_grid():
    assert parse_grid("-12:12:3") == [-12, -9, -6, -3, 0, 3, 6, 9, 12]
    assert parse_grid("1,2.5") == [1.0, 2.5]


def test_sweep_subprocess_bytes_identical(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        subprocess.run([sys.executable, "-m", "auditory_dat.cli", "sweep", "--out", str(path)],
                       check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
