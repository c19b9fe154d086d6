import csv
import io
import json
import logging
import math
import re
import subprocess
import sys
from pathlib import Path

import pytest

from qgfilter.cli import main

DATA = Path(__file__).parent / "data"
NUMBER = re.compile(r"^-?\d\.\d{12}e[+-]\d{2,3}$|^nan$")


def run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--output", str(out), "--quiet"])
    return code, (out.read_bytes() if out.exists() else b"")


def rows(data: bytes):
    return list(csv.reader(io.StringIO(data.decode())))


class TestSweepK:
    def test_bandpass_peak(self, tmp_path):
        code, data = run(tmp_path, "sweep-k", "--graph", str(DATA / "loop_bandpass.json"),
                         "--k-min", "0.1", "--k-max", "10", "--samples", "2000")
        assert code == 0
        header, *body = rows(data)
        assert header == ["k", "E", "classification", "re_R", "im_R", "re_T1", "im_T1", "P1",
                          "unitarity_residual"]
        assert len(body) == 2000
        best = max(body, key=lambda r: float(r[7]))
        assert abs(float(best[0]) - 1.0) <= 9.9 / 1999

    def test_bandstop_dip(self, tmp_path):
        code, data = run(tmp_path, "sweep-k", "--graph", str(DATA / "loop_bandstop.json"),
                         "--k-min", "0.1", "--k-max", "10", "--samples", "2000")
        assert code == 0
        body = rows(data)[1:]
        worst = min(body, key=lambda r: float(r[7]))
        assert abs(float(worst[0]) - 1.0) <= 9.9 / 1999

    def test_separator_columns(self, tmp_path):
        code, data = run(tmp_path, "sweep-k", "--graph", str(DATA / "loop_separator.json"),
                         "--k-min", "0.5", "--k-max", "1.5", "--samples", "101")
        assert code == 0
        header, *body = rows(data)
        assert header[-3:] == ["P1", "P2", "unitarity_residual"]
        at_one = min(body, key=lambda r: abs(float(r[0]) - 1))
        assert float(at_one[-2]) == max(float(r[-2]) for r in body)
        assert float(at_one[-3]) == min(float(r[-3]) for r in body)

    def test_numeric_format(self, tmp_path):
        _, data = run(tmp_path, "sweep-k", "--graph", str(DATA / "two_stubs.json"),
                      "--k-min", "3", "--k-max", "3.2", "--samples", "5")
        text = data.decode()
        assert "\r" not in text and text.endswith("\n")
        for row in rows(data)[1:]:
            assert all(NUMBER.match(v) for i, v in enumerate(row) if i != 2)
            assert row[2] in {"regular", "sigma0", "pole", "eigen_consistent", "diagnostic"}


class TestOtherCommands:
    def test_spectrum_loop(self, tmp_path):
        code, data = run(tmp_path, "spectrum", "--graph", str(DATA / "loop_bandpass.json"),
                         "--k-min", "0.1", "--k-max", "8", "--samples", "400")
        assert code == 0
        body = rows(data)[1:]
        roots = [float(r[1]) for r in body]
        expected = [1, 2 * math.pi - 1, 2 * math.pi + 1]
        assert len(roots) == 3 and all(abs(a - b) <= 1e-8 for a, b in zip(roots, expected))
        assert [r[0] for r in body] == ["0", "1", "2"]
        # both columns carry 13 significant digits
        assert all(abs(float(r[2]) - float(r[1]) ** 2) <= 5e-12 * float(r[2]) for r in body)

    def test_spectrum_stub(self, tmp_path):
        code, data = run(tmp_path, "spectrum", "--graph", str(DATA / "stub_dirichlet.json"),
                         "--k-min", "0.1", "--k-max", "5", "--samples", "400")
        assert code == 0
        roots = [float(r[1]) for r in rows(data)[1:]]
        assert [round(r, 8) for r in roots] == [round(math.pi / 2, 8), round(3 * math.pi / 2, 8)]

    def test_spectrum_empty(self, tmp_path):
        code, data = run(tmp_path, "spectrum", "--graph", str(DATA / "stub_dirichlet.json"),
                         "--k-min", "1.7", "--k-max", "3", "--samples", "50")
        assert code == 3
        assert rows(data) == [["index", "k_root", "lambda", "residual"]]

    def test_sweep_b_tracks_passband(self, tmp_path):
        b_max = 4 * math.pi * math.pi  # pi hbar / (q S) with S = 1 / (4 pi)
        code, data = run(tmp_path, "sweep-b", "--graph", str(DATA / "loop_bandpass.json"),
                         "--b-min", "0", "--b-max", repr(b_max),
                         "--k-min", "0.01", "--k-max", repr(math.pi), "--samples", "21")
        assert code == 0
        header, *body = rows(data)
        assert header == ["B", "theta", "k", "P"]
        best = {}
        for b, theta, k, p in body:
            if float(p) >= best.get(b, (-1,))[0]:
                best[b] = (float(p), float(k), float(theta))
        argmax = [best[b][1] for b in sorted(best, key=float)]
        assert argmax == sorted(argmax)
        assert argmax[0] < 0.2 and argmax[-1] > math.pi - 0.2

    def test_sweep_b_rejects_non_loop(self, tmp_path):
        code, _ = run(tmp_path, "sweep-b", "--graph", str(DATA / "stub_dirichlet.json"),
                      "--b-min", "0", "--b-max", "1", "--k", "1")
        assert code == 2

    def test_converge(self, tmp_path):
        code, data = run(tmp_path, "converge", "--graph", str(DATA / "loop_bandpass.json"), "--k", "2")
        assert code == 0
        header, *body = rows(data)
        assert header[0] == "epsilon" and header[-2:] == ["error", "ratio"]
        errs = [float(r[-2]) for r in body]
        assert len(errs) == 4 and all(b < a for a, b in zip(errs, errs[1:]))
        assert body[0][-1] == "nan"

    def test_converge_sigma0(self, tmp_path):
        code, data = run(tmp_path, "converge", "--graph", str(DATA / "two_stubs.json"), "--k", repr(math.pi))
        assert code == 0
        mags = [float(r[6]) for r in rows(data)[1:]]
        assert all(b < a for a, b in zip(mags, mags[1:]))

    def test_converge_long_links_warn(self, tmp_path, caplog):
        out = tmp_path / "c.csv"
        with caplog.at_level(logging.WARNING, logger="qgfilter"):
            code = main(["converge", "--graph", str(DATA / "loop_bandpass.json"), "--k", "6",
                         "--epsilons", "0.1,0.01", "--output", str(out)])
        assert code == 0
        assert len(rows(out.read_bytes())) == 3
        assert "k*epsilon" in caplog.text

    def test_converge_rejects_bandstop(self, tmp_path):
        code, _ = run(tmp_path, "converge", "--graph", str(DATA / "loop_bandstop.json"), "--k", "2")
        assert code == 2


class TestErrors:
    @pytest.mark.parametrize("args", [
        ["sweep-k", "--graph", "does-not-exist.json", "--k-min", "1", "--k-max", "2"],
        ["sweep-k", "--graph", str(DATA / "loop_bandpass.json"), "--k-min", "2", "--k-max", "1"],
        ["sweep-k", "--graph", str(DATA / "loop_bandpass.json"), "--k-min", "1", "--k-max", "2", "--samples", "1"],
        ["sweep-k", "--graph", str(DATA / "loop_bandpass.json")],
        ["sweep-k", "--graph", str(DATA / "loop_bandpass.json"), "--k-min", "1", "--k-max", "2", "--rank-tol", "-1"],
        ["converge", "--graph", str(DATA / "loop_bandpass.json"), "--k", "2", "--epsilons", "0.01,0.1"],
        ["bogus"],
        [],
    ])
    def test_input_errors(self, tmp_path, args):
        assert main([*args, "--quiet"] if args else []) == 2

    def test_invalid_graph_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"edges": [], "vertices": [], "contact": {}, "extra": 1}))
        assert main(["sweep-k", "--graph", str(bad), "--k-min", "1", "--k-max", "2", "--quiet"]) == 2
        bad.write_text("{not json")
        assert main(["sweep-k", "--graph", str(bad), "--k-min", "1", "--k-max", "2", "--quiet"]) == 2


class TestDeterminism:
    @pytest.mark.parametrize("args", [
        ["sweep-k", "--graph", str(DATA / "loop_separator.json"), "--k-min", "0.1", "--k-max", "10", "--samples", "300"],
        ["sweep-b", "--graph", str(DATA / "loop_bandpass.json"), "--b-min", "0", "--b-max", "40", "--k", "1.5",
         "--samples", "200"],
        ["spectrum", "--graph", str(DATA / "loop_bandpass.json"), "--k-min", "0.1", "--k-max", "8", "--samples", "400"],
        ["converge", "--graph", str(DATA / "loop_bandpass.json"), "--k", "2"],
    ])
    def test_byte_identical(self, tmp_path, args):
        outputs = [run(tmp_path, *args, name=f"run{i}.csv")[1] for i in range(2)]
        assert outputs[0] == outputs[1] and outputs[0]

    def test_module_entry_point(self, tmp_path):
        out = tmp_path / "m.csv"
        cmd = [sys.executable, "-m", "qgfilter", "spectrum", "--graph", str(DATA / "stub_dirichlet.json"),
               "--k-min", "0.1", "--k-max", "5", "--samples", "200", "--output", str(out)]
        first = subprocess.run(cmd, capture_output=True)
        data = out.read_bytes()
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == second.returncode == 0
        assert out.read_bytes() == data
