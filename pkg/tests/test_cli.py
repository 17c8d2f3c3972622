import csv
import io
import random
import subprocess
import sys

import pytest

from composite_dna.cli import EXIT_CODES, run


def _run(capsys, argv):
    status = run(argv)
    out, err = capsys.readouterr()
    return status, out, err


def test_capacity(capsys):
    assert _run(capsys, ["capacity", "--l", "1", "--alphabet", "M=AC"]) == (0, "1.733\n", "")
    status, out, _ = _run(capsys, ["capacity", "--l", "2", "--alphabet", "M=AC", "--precision", "6"])
    assert out.startswith("2.170")
    assert len(out.strip().split(".")[1]) == 6


def test_capacity_csv(capsys):
    _, out, _ = _run(capsys, ["capacity", "--l", "3", "--alphabet", "M=AT~N=CG", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["capacity_bits"] == "2.535" and rows[0]["alphabet"] == "M=AT~N=CG"


def test_bound(capsys):
    assert _run(capsys, ["bound", "--l", "6", "--alphabet", "M=AT~N=CG"])[1] == "463\n"
    assert _run(capsys, ["bound", "--l", "6", "--alphabet", "M=AC"])[1] == "249\n"


def test_verify(tmp_path, capsys):
    path = tmp_path / "w.txt"
    path.write_text("ACMGGMTA\nACMCMATA\n")
    status, out, _ = _run(capsys, ["verify", "--l", "3", "--eps", "0.1", "--mode", "lenient", "--in", str(path)])
    lines = out.splitlines()
    assert lines[0] == "ACMGGMTA\tPASS"
    assert lines[1].startswith("ACMCMATA\tFAIL") and "rll: window" in lines[1] and "MCMA" in lines[1]
    assert status == EXIT_CODES["E_FAIL"]
    status, out, _ = _run(capsys, ["verify", "--eps", "1/10", "--in", str(path)])
    assert "balance: gc count in [3,5] outside [16/5,24/5]" in out.splitlines()[0]


def test_tables_stable(capsys):
    _, first, _ = _run(capsys, ["tables", "--format", "csv"])
    _, second, _ = _run(capsys, ["tables", "--format", "csv"])
    assert first == second
    cap_block, bound_block = first.split("\n\n")
    cap = list(csv.DictReader(io.StringIO(cap_block)))
    assert len(cap) == 48
    row = next(r for r in cap if r["alphabet"] == "M=AC" and r["l"] == "1")
    assert row["capacity_bits"] == "1.733" and row["reference"] == "1.733"
    bounds = list(csv.DictReader(io.StringIO(bound_block)))
    assert {(r["alphabet"], r["l"]): r["delta"] for r in bounds}[("M=AC", "6")] == "-1"


def test_tables_text_and_figures(tmp_path, capsys):
    status, out, err = _run(capsys, ["tables", "--figures", str(tmp_path)])
    assert status == 0
    assert "ceiling-rounded" in out
    for name in ("capacity.png", "bound.png", "capacity.csv", "bound.csv"):
        assert (tmp_path / name).stat().st_size > 0


def _words(alphabet, rng, count, max_len):
    return [ "".join(rng.choice(alphabet) for _ in range(rng.randrange(max_len))) for _ in range(count)]


CODECS = [
    (["--codec", "rll", "--l", "3", "--n", "10"], [], "ATCGM"),
    (["--codec", "rll", "--l", "4", "--n", "55", "--alphabet", "M=AT~N=CG"], [], "ATCGMN"),
    (["--codec", "gc", "--n", "16", "--eps", "1/10"], [], "ATCGM"),
    (["--codec", "gc", "--n", "100", "--eps", "1/5", "--grid", "lset"], ["--grid", "lset"], "ATCGM"),
    (["--codec", "gc", "--n", "64", "--eps", "1/6", "--alphabet", "M=AG,N=ATC"], [], "ATCGMN"),
    (["--codec", "gc", "--n", "64", "--eps", "0", "--alphabet", "M=AT~N=CG"], [], "ATCGMN"),
    (["--codec", "combined", "--n", "300", "--l", "6", "--eps", "1/10"], [], "ATCGMN"),
    (["--codec", "combined", "--n", "40", "--l", "3", "--eps", "1/8"], [], "ATCGMN"),
]


@pytest.mark.parametrize("enc,dec_extra,symbols", CODECS, ids=[" ".join(c[0][1:]) for c in CODECS])
def test_file_roundtrip_byte_identical(tmp_path, capsys, enc, dec_extra, symbols):
    rng = random.Random(len(enc))
    src = tmp_path / "in.txt"
    src.write_text("\n".join(_words(symbols, rng, 25, 400) + ["", "A"]) + "\n")
    mid, dst = tmp_path / "enc.txt", tmp_path / "dec.txt"
    assert run(["encode", *enc, "--in", str(src), "--out", str(mid)]) == 0
    header = mid.read_text().splitlines()[0]
    assert header.startswith("n=") and " l=" in header and " eps=" in header and " alphabet=" in header
    assert run(["decode", "--codec", enc[1], *dec_extra, "--in", str(mid), "--out", str(dst)]) == 0
    assert dst.read_bytes() == src.read_bytes()


def test_encoded_lines_verify(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("\n".join(_words("ATCGMN", random.Random(2), 20, 200)) + "\n")
    mid = tmp_path / "enc.txt"
    run(["encode", "--codec", "combined", "--n", "40", "--l", "3", "--eps", "1/8", "--in", str(src), "--out", str(mid)])
    words = tmp_path / "words.txt"
    words.write_text("\n".join(w for line in mid.read_text().splitlines()[1:] for w in line.split()) + "\n")
    status, out, _ = _run(capsys, ["verify", "--alphabet", "M=AT~N=CG", "--l", "3", "--eps", "1/8", "--in", str(words)])
    assert status == 0 and "FAIL" not in out


def test_header_conflict(tmp_path, capsys):
    mid = tmp_path / "enc.txt"
    mid.write_text("n=40 l=3 eps=1/8 alphabet=M=AT~N=CG\n")
    status, _, err = _run(capsys, ["decode", "--codec", "combined", "--n", "41", "--in", str(mid)])
    assert status == EXIT_CODES["E_FLAG"] and "error[E_FLAG]" in err


def test_enumerate(capsys):
    status, out, _ = _run(capsys, ["enumerate", "--n", "2", "--l", "1", "--alphabet", "M=AC", "--format", "csv"])
    assert list(csv.DictReader(io.StringIO(out)))[0] == {
        "alphabet": "M=AC", "n": "2", "l": "1", "eps": "", "count_exact": "16", "brute_count": "16"}
    _, out, _ = _run(capsys, ["enumerate", "--n", "30", "--l", "2", "--brute-cap", "1000"])
    assert "skipped" in out


@pytest.mark.parametrize("argv,code", [
    (["capacity", "--l", "0"], "E_FLAG"),
    (["capacity", "--l", "2", "--alphabet", "M=AX"], "E_FLAG"),
    (["encode", "--codec", "rll", "--l", "3"], "E_FLAG"),
    (["encode", "--codec", "rll", "--l", "3", "--n", "10", "--in", "/nonexistent/x"], "E_IO"),
    (["verify", "--l", "2", "--in", "BADFILE"], "E_INPUT"),
    (["decode", "--codec", "rll", "--l", "3", "--n", "10", "--in", "CORRUPT"], "E_CODEC"),
    (["capacity", "--l", "8", "--alphabet", "M=AT~N=CG"], "E_NUMERIC"),
    (["nosuchcommand"], "E_FLAG"),
])
def test_error_codes(tmp_path, capsys, monkeypatch, argv, code):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "BADFILE").write_text("AXA\n")
    (tmp_path / "CORRUPT").write_text("AAAAAAAAAAAA\n")
    status, _, err = _run(capsys, argv)
    assert status == EXIT_CODES[code]
    assert f"error[{code}]" in err


def test_exit_codes_distinct():
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "composite_dna", "bound", "--l", "4", "--alphabet", "M=AT~N=CG"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "55\n"
