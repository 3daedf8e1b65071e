import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spin_uncertainty import cli
from spin_uncertainty.cli import RunConfig, main, worker_count


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestBounds:
    def test_spin_one(self, capsys):
        code, out, _ = run(capsys, "bounds", "--spin", "1")
        assert code == 0
        (row,) = parse_csv(out)
        assert float(row["c2"]) == pytest.approx(0.4375, abs=1e-9)
        assert float(row["delta_min_squared"]) == pytest.approx(0.375)
        assert float(row["r_min"]) == pytest.approx(1.25)

    @pytest.mark.parametrize("spin", ["0.5", "1/2"])
    def test_spin_half_spellings(self, capsys, spin):
        code, out, _ = run(capsys, "bounds", "--spin", spin)
        assert code == 0
        assert float(parse_csv(out)[0]["c2"]) == pytest.approx(0.25, abs=1e-9)

    def test_metadata(self, capsys):
        _, out, _ = run(capsys, "bounds", "--spin", "1")
        meta = dict(l[2:].split("=", 1) for l in out.splitlines() if l.startswith("#"))
        assert set(meta) >= {"tool", "version", "config_hash", "seed"}
        assert meta["seed"] == "42"

    def test_round_trip_precision(self, capsys):
        _, out, _ = run(capsys, "bounds", "--spin", "2")
        r = float(parse_csv(out)[0]["r_min"])
        assert r == (7 - math.sqrt(7)) / 2

    def test_sweep(self, capsys):
        _, out, _ = run(capsys, "bounds", "--spin-max", "2")
        assert [float(r["s"]) for r in parse_csv(out)] == [0.5, 1, 1.5, 2]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "bounds", "--spin", "1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        row = dict(zip(doc["columns"], doc["rows"][0]))
        assert row["c2"] == pytest.approx(0.4375, abs=1e-9)
        assert doc["meta"]["seed"] == 42


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["bounds", "--spin", "-1"],
        ["bounds", "--spin", "0.3"],
        ["region", "--spin", "1", "--grid", "0"],
        ["region", "--spin", "1", "--components", "4"],
        ["bounds", "--format", "xml"],
        ["nonsense"],
        [],
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, *argv)
        assert code == 2

    def test_bad_worker_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SPINUNC_WORKERS", "0")
        assert run(capsys, "entropy", "--spin", "3", "--grid", "2")[0] == 2

    def test_numerical_failure(self, capsys, monkeypatch):
        def boom(config):
            raise ArithmeticError("synthetic")
        monkeypatch.setitem(cli.COMMANDS, "bounds", boom)
        code, _, err = run(capsys, "bounds", "--spin", "1")
        assert code == 1 and "synthetic" in err


class TestRegion:
    def test_two_components(self, capsys):
        code, out, _ = run(capsys, "region", "--spin", "1", "--components", "2", "--grid", "41")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 41
        assert min(float(r["v1"]) + float(r["v3"]) for r in rows) == pytest.approx(7 / 16, abs=1e-6)

    def test_three_components_with_files(self, capsys, tmp_path):
        out = tmp_path / "region.csv"
        code, _, _ = run(capsys, "region", "--spin", "1", "--grid", "12", "--quick", "--out", str(out))
        assert code == 0
        rows = parse_csv(out.read_text())
        assert len(rows) == 12
        assert all(float(r["v1"]) + float(r["v2"]) + float(r["v3"]) >= 1 - 1e-9 for r in rows)
        assert (tmp_path / "region_tangents.csv").exists()
        assert (tmp_path / "region_boundary.csv").exists()


class TestOtherCommands:
    def test_measurement_sweep(self, capsys):
        code, out, _ = run(capsys, "measurement", "--spin-max", "6")
        assert code == 0
        ratio = {float(r["s"]): float(r["r_min_over_s"]) for r in parse_csv(out)}
        assert all(ratio[s] > 1 for s in (1, 1.5, 2, 2.5))
        assert all(ratio[s] < 1 for s in ratio if s > 3)

    def test_measurement_profile_file(self, capsys, tmp_path):
        out = tmp_path / "m.csv"
        assert run(capsys, "measurement", "--spin", "2", "--out", str(out))[0] == 0
        prof = parse_csv((tmp_path / "m_profile.csv").read_text())
        vals = [float(r["calibration_squared"]) for r in prof]
        assert max(vals) - min(vals) <= 1e-9

    def test_entropy_cloud(self, capsys):
        code, out, _ = run(capsys, "entropy", "--spin", "1", "--grid", "200", "--quick")
        assert code == 0
        rows = parse_csv(out)
        total = min(float(r["sum"]) for r in rows)
        assert total == pytest.approx(math.log(2) / math.log(3), abs=1e-3)
        assert {r["family"] for r in rows} == {"real", "phi"}

    def test_entropy_alpha_sweep(self, capsys):
        code, out, _ = run(capsys, "entropy", "--spin", "3", "--grid", "5")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 5
        assert float(rows[0]["h1"]) == pytest.approx(0, abs=1e-10)

    def test_asymptotics(self, capsys):
        code, out, _ = run(capsys, "asymptotics", "--quick")
        assert code == 0
        rows = parse_csv(out)
        assert {float(r["alpha"]) for r in rows} == {0.5, 1.0, 2.0}

    def test_verify_quick(self, capsys):
        code, out, _ = run(capsys, "verify", "--quick")
        assert code == 0
        assert out.count("PASS") >= 10 and "FAIL" not in out


class TestDeterminism:
    def test_config_hash_ignores_output(self):
        def cfg(spin, out):
            return RunConfig(command="bounds", spin=spin, spin_max=None, components=3, grid=None,
                             seed=42, out=out, format="csv", quick=False)
        a, b, c = cfg("1", "a.csv"), cfg("1", None), cfg("2", None)
        assert a.config_hash() == b.config_hash() != c.config_hash()

    def test_worker_env(self, monkeypatch):
        monkeypatch.setenv("SPINUNC_WORKERS", "3")
        assert worker_count() == 3
        monkeypatch.setenv("SPINUNC_WORKERS", "zero")
        with pytest.raises(cli.UsageError):
            worker_count()

    def test_identical_across_workers(self, capsys, monkeypatch):
        outs = []
        for w in ("1", "2"):
            monkeypatch.setenv("SPINUNC_WORKERS", w)
            code, out, _ = run(capsys, "region", "--spin", "1", "--grid", "8", "--quick")
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "spin_uncertainty", "bounds", "--spin", "1"],
                             capture_output=True, text=True, check=False)
        assert res.returncode == 0
        assert float(parse_csv(res.stdout)[0]["c2"]) == pytest.approx(0.4375, abs=1e-9)
