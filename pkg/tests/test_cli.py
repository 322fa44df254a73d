import csv

import numpy as np
import pytest

from lanehough.cli import main, parse_sizes
from lanehough.data import sample_path
from lanehough.hough import load_accumulator
from lanehough.imgio import GrayImage, load_gray, save_image


@pytest.fixture
def sample(tmp_path):
    return str(sample_path())


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sample_is_512_square():
    img = load_gray(sample_path())
    assert (img.width, img.height) == (512, 512)


def test_detect_defaults(tmp_path, sample, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["detect", sample]) == 0
    peaks = read_csv(tmp_path / "sample_lanes_peaks.csv")
    segs = read_csv(tmp_path / "sample_lanes_segments.csv")
    assert peaks[0] == ["theta_deg", "rho", "votes"] and len(peaks) == 3
    assert segs[0] == ["x0", "y0", "x1", "y1", "theta_deg", "rho"] and len(segs) >= 3
    overlay = tmp_path / "sample_lanes_lanes.png"
    assert overlay.read_bytes().startswith(b"\x89PNG")


def test_detect_is_byte_deterministic(tmp_path, sample):
    outs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        args = ["detect", sample, "-o", str(d / "o.png"), "--peaks-csv", str(d / "p.csv"),
                "--segments-csv", str(d / "s.csv"), "--dump-edge", str(d / "e.pgm"),
                "--dump-binary", str(d / "b.png"), "--dump-acc", str(d / "a.hacc"),
                "--strategy", "atomic", "--workers", "3"]
        assert main(args) == 0
        outs.append({f: (d / f).read_bytes() for f in ("o.png", "p.csv", "s.csv", "e.pgm", "b.png", "a.hacc")})
    assert outs[0] == outs[1]


def test_detect_intermediate_dumps(tmp_path, sample):
    acc_path = tmp_path / "a.hacc"
    assert main(["detect", sample, "-o", str(tmp_path / "o.png"),
                 "--peaks-csv", str(tmp_path / "p.csv"), "--segments-csv", str(tmp_path / "s.csv"),
                 "--dump-binary", str(tmp_path / "b.pgm"), "--dump-acc", str(acc_path)]) == 0
    binary = load_gray(tmp_path / "b.pgm")
    assert set(np.unique(binary.pixels)) <= {0, 255}
    acc = load_accumulator(acc_path)
    assert acc.total_votes == int((binary.pixels == 255).sum()) * 180


def test_zero_lanes_still_succeeds(tmp_path):
    src = tmp_path / "flat.pgm"
    save_image(GrayImage(np.zeros((40, 40), np.uint8)), src)
    p, s = tmp_path / "p.csv", tmp_path / "s.csv"
    assert main(["detect", str(src), "-o", str(tmp_path / "o.png"),
                 "--peaks-csv", str(p), "--segments-csv", str(s)]) == 0
    assert read_csv(p) == [["theta_deg", "rho", "votes"]]
    assert read_csv(s) == [["x0", "y0", "x1", "y1", "theta_deg", "rho"]]


def test_missing_input_exit_1(tmp_path, capsys):
    missing = tmp_path / "nope.pgm"
    assert main(["detect", str(missing)]) == 1
    err = capsys.readouterr().err
    assert str(missing) in err and len(err.strip().splitlines()) == 1


def test_bad_format_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P3\n1 1\n255\n0\n")
    assert main(["detect", str(bad)]) == 1
    assert "PGM" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["detect", "x.pgm", "--strategy", "warp"],
    ["detect", "x.pgm", "--threshold", "300"],
    ["detect", "x.pgm", "--workers", "0"],
    ["detect", "x.pgm", "--nhood-rho", "4"],
    ["detect", "x.pgm", "--n-theta", "179"],
    ["detect", "x.pgm", "--peak-ratio", "0"],
    ["bench", "--sizes", "128x"],
    ["bench", "--strategies", "reference,warp"],
    ["dump-acc", "x.pgm"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bench_single_row(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["bench", "--sizes", "128x128", "--strategies", "reference",
                 "--repeats", "3", "--csv", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 2 and rows[1][:5] == ["128", "128", "reference", "1", "float"]


def test_bench_defaults(monkeypatch, tmp_path):
    import lanehough.cli as cli

    seen = {}

    def fake(sizes, strategies, repeats, out, seed, threshold, trig):
        seen.update(sizes=sizes, names=[s.name for s in strategies], repeats=repeats, out=out)
        return []

    monkeypatch.setattr(cli, "scaling_study", fake)
    monkeypatch.chdir(tmp_path)
    assert main(["bench"]) == 0
    assert seen["sizes"] == [(128, 128), (256, 256), (512, 512), (1024, 1024)]
    assert seen["names"] == ["reference", "symmetric", "angle-partitioned", "atomic"]
    assert seen["out"] == "bench.csv"


def test_parse_sizes():
    assert parse_sizes("128x64, 3X4") == [(128, 64), (3, 4)]


def test_dump_acc_command(tmp_path, sample):
    out = tmp_path / "m.hacc"
    assert main(["dump-acc", sample, str(out), "--trig", "q15", "--strategy", "symmetric"]) == 0
    acc = load_accumulator(out)
    assert (acc.n_theta, acc.n_rho, acc.rho_offset, acc.source_dims) == (180, 1451, 725, (512, 512))


def test_module_entry_point(tmp_path, sample):
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "lanehough", "dump-acc", sample, str(tmp_path / "x.hacc")],
                         capture_output=True)
    assert res.returncode == 0
