import json
import subprocess
import sys

import pytest

from ri_sobolev import __version__
from ri_sobolev.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def exit_code(*argv):
    with pytest.raises(SystemExit) as e:
        main(list(argv))
    return e.value.code


class TestDecide:
    def test_john_holds(self, capsys):
        code, out, _ = run(capsys, "decide", "john", "--m", "2", "--n", "3", "--norm", "lp:2")
        d = json.loads(out)
        assert code == 0 and d["verdict"]["outcome"] == "Holds"
        assert d["config"]["ri_sobolev"] == __version__ and d["config"]["seed"] == 0

    def test_lz_fails(self, capsys):
        code, out, _ = run(capsys, "decide", "lz", "--m", "1", "--alpha", "0.5", "--p", "2", "--q", "2",
                           "--beta", "0.3")
        assert code == 1 and json.loads(out)["verdict"]["outcome"] == "Fails"

    def test_orlicz(self, capsys):
        assert run(capsys, "decide", "orlicz", "--m", "1", "--alpha", "0.5", "--p", "2", "--lam", "2")[0] == 0
        assert run(capsys, "decide", "orlicz", "--m", "1", "--alpha", "0.5", "--p", "2")[0] == 1

    def test_reduced(self, capsys):
        assert run(capsys, "decide", "lz-reduced", "--m", "1", "--k", "1", "--alpha", "0.5",
                   "--p", "1", "--q", "1")[0] == 0
        assert run(capsys, "decide", "orlicz-reduced", "--m", "1", "--k", "1", "--alpha", "0.75",
                   "--p", "1.5")[0] == 1

    def test_trend_exit(self, capsys):
        code, out, _ = run(capsys, "decide", "psi", "--m", "2", "--alpha", "0.75", "--norm", "lp:2")
        v = json.loads(out)["verdict"]
        assert code == 2 and v["outcome"] == "NumericTrend" and v["trend"] == "diverges"

    def test_closed_form_flag(self, capsys):
        code, out, _ = run(capsys, "decide", "psi", "--m", "2", "--alpha", "0.5", "--norm", "lp:1",
                           "--closed-form")
        assert code == 0 and json.loads(out)["verdict"]["path"] == "closed-form"

    def test_fundamental_and_power_mk(self, capsys):
        code, out, _ = run(capsys, "decide", "fundamental", "--m", "2", "--alpha", "0.5", "--norm", "lp:1")
        assert code == 0 and json.loads(out)["verdict"]["witness"] == pytest.approx(4.0)
        code, _, _ = run(capsys, "decide", "power-mk", "--m", "1", "--k", "1", "--alpha", "0.75",
                         "--norm", "lp:2")
        assert code in (0, 2)

    def test_profile_json(self, capsys):
        code, out, _ = run(capsys, "decide", "fundamental", "--m", "2", "--norm", "lp:1",
                           "--profile", '{"form": "power", "alpha": 0.5}')
        assert code == 0

    def test_tolerances_recorded(self, capsys):
        code, out, _ = run(capsys, "--nu-tol", "0.05", "--kappa-band", "0.002", "decide", "psi",
                           "--m", "2", "--alpha", "0.6", "--norm", "lp:2")
        assert json.loads(out)["config"]["tolerances"] == {"kappa_band": 0.002, "nu_tol": 0.05}

    def test_out_file(self, capsys, tmp_path):
        f = tmp_path / "v.json"
        code, _, _ = run(capsys, "--out", str(f), "decide", "john", "--m", "4", "--n", "4", "--norm", "lp:1")
        assert code == 0 and json.loads(f.read_text())["verdict"]["outcome"] == "Holds"


class TestUsageErrors:
    def test_missing_argument(self):
        assert exit_code("decide", "john", "--m", "2") == 64

    def test_unknown_command(self):
        assert exit_code("frobnicate") == 64

    def test_bad_norm(self, capsys):
        assert run(capsys, "decide", "john", "--m", "2", "--n", "3", "--norm", "L^2")[0] == 64

    def test_bad_tolerance(self, capsys):
        assert run(capsys, "--nu-tol", "-1", "decide", "john", "--m", "2", "--n", "3", "--norm", "lp:2")[0] == 64

    def test_inadmissible_lz(self, capsys):
        assert run(capsys, "decide", "lz", "--m", "2", "--alpha", "0.5", "--p", "1", "--q", "2")[0] == 64

    def test_no_profile(self, capsys):
        assert run(capsys, "decide", "psi", "--m", "2", "--norm", "lp:2")[0] == 64


class TestDomain:
    def test_files(self, capsys, tmp_path):
        prefix = tmp_path / "half"
        code, out, _ = run(capsys, "--out", str(prefix), "domain", "--alpha", "0.5", "--n", "2")
        assert code == 0 and "volume 1.000000" in out
        header = json.loads((tmp_path / "half.json").read_text())
        assert header["header"]["L"] == pytest.approx(2.0) and not header["checks"]["truncated"]
        lines = (tmp_path / "half.csv").read_text().splitlines()
        assert lines[0].startswith("# {") and len(lines) > 100

    def test_infinite_length(self, capsys, tmp_path):
        code, _, err = run(capsys, "--out", str(tmp_path / "x"), "domain", "--alpha", "1", "--n", "2")
        assert code == 65 and "--allow-truncation" in err

    def test_truncated_pointcloud(self, capsys, tmp_path):
        prefix = tmp_path / "log"
        code, _, _ = run(capsys, "--out", str(prefix), "domain", "--alpha", "1", "--n", "3",
                         "--allow-truncation", "--pointcloud", "--steps", "16")
        assert code == 0
        assert json.loads((tmp_path / "log.json").read_text())["checks"]["truncated"]
        assert (tmp_path / "log.points.csv").exists()
        assert run(capsys, "--out", str(prefix), "domain", "--alpha", "1", "--n", "2",
                   "--allow-truncation", "--pointcloud")[0] == 64

    def test_nonconvex_profile(self, capsys, tmp_path):
        prof = json.dumps({"form": "tabulated", "knots": [0.01, 0.1, 0.5], "values": [0.1, 0.5, 0.5]})
        code, _, err = run(capsys, "--out", str(tmp_path / "p"), "domain", "--profile", prof)
        assert code == 65 and "--smooth" in err
        assert run(capsys, "--out", str(tmp_path / "p"), "domain", "--profile", prof, "--smooth")[0] == 0


class TestVerify:
    @pytest.mark.parametrize("argv", [
        ("lemma31", "--m", "2", "--alpha", "0.5", "--trials", "50"),
        ("prop33", "--sweep", "small", "--count", "6"),
        ("remark34",),
        ("equimeasure", "--functions", "3", "--samples", "300000"),
        ("rearrangement", "--trials", "200"),
    ], ids=lambda a: a[0])
    def test_suites(self, capsys, tmp_path, argv):
        prefix = tmp_path / "run"
        code, out, _ = run(capsys, "--out", str(prefix), "verify", *argv)
        summary = json.loads(out)
        assert code == 0 and summary["failed"] == 0 and summary["suite"] == argv[0]
        first = (tmp_path / "run.csv").read_text().splitlines()[0]
        assert json.loads(first[2:])["params"]["suite"] == argv[0]

    def test_byte_identical(self, capsys, tmp_path):
        args = ("verify", "lemma31", "--m", "3", "--alpha", "0.6", "--trials", "30")
        run(capsys, "--seed", "5", "--out", str(tmp_path / "a"), *args)
        run(capsys, "--seed", "5", "--out", str(tmp_path / "b"), *args)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


class TestNorm:
    def test_inline(self, capsys):
        code, out, _ = run(capsys, "norm", "--norm", "lp:1",
                           "--function", '{"breakpoints": [0, 0.5, 1], "values": [2, 1]}')
        assert code == 0 and json.loads(out)["value"] == pytest.approx(1.5)

    def test_from_file(self, capsys, tmp_path):
        f = tmp_path / "f.json"
        f.write_text('{"breakpoints": [0, 0.25, 1], "values": [4, 0]}')
        code, out, _ = run(capsys, "norm", "--norm", "lorentz:2,1", "--function", f"@{f}")
        assert code == 0 and json.loads(out)["value"] > 0

    def test_bad_function(self, capsys):
        assert run(capsys, "norm", "--norm", "lp:1", "--function", "{not json")[0] in (64, 65)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "ri_sobolev", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == __version__
