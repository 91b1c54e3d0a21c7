"""Console entry points: gen, solve, check, bench."""

import json
import subprocess
import sys

import numpy as np
import pytest

from sylvenc import GenSpec, dump_json, generate, load_json, system_to_dict
from sylvenc.cli import main


def _gen_file(tmp_path, name, family="kyc31", m=3, alpha=1e-6, seed=0):
    path = tmp_path / name
    rc = main(
        [
            "gen",
            "--family",
            family,
            "--m",
            str(m),
            "--alpha",
            str(alpha),
            "--seed",
            str(seed),
            "--output",
            str(path),
        ]
    )
    assert rc == 0
    return path


class TestGen:
    def test_matches_library_generator(self, tmp_path):
        path = _gen_file(tmp_path, "sys.json", m=4, seed=3)
        on_disk = path.read_text().strip()
        direct = dump_json(system_to_dict(generate(GenSpec(family="kyc31", m=4, seed=3))))
        assert on_disk == direct

    def test_stdout_default(self, capsys):
        rc = main(["gen", "--family", "sylvester32", "--m", "2"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"A", "B", "C", "D", "F"}

    def test_unknown_family_rejected(self):
        with pytest.raises(SystemExit):
            main(["gen", "--family", "doesnotexist", "--m", "2"])


class TestSolve:
    @pytest.mark.parametrize("method", ["mkw", "itr", "ver", "blk"])
    def test_each_method_verifies_small_system(self, tmp_path, method):
        sys_path = _gen_file(tmp_path, "sys.json", m=3, seed=1)
        out = tmp_path / f"enc_{method}.json"
        rc = main(
            ["solve", "--input", str(sys_path), "--method", method, "--output", str(out)]
        )
        assert rc == 0
        doc = load_json(out.read_text())
        assert doc["verified"] is True
        assert doc["method"] == method
        assert doc["evaluated"] is not None

    def test_failed_verification_exits_2(self, tmp_path, capsys):
        sys_path = _gen_file(tmp_path, "hard.json", family="gallery33", m=2, alpha=1e-2)
        out = tmp_path / "enc.json"
        rc = main(["solve", "--input", str(sys_path), "--output", str(out)])
        assert rc == 2
        doc = load_json(out.read_text())
        assert doc["verified"] is False and doc["evaluated"] is None


class TestCheck:
    def test_all_contained(self, tmp_path, capsys):
        sys_path = _gen_file(tmp_path, "sys.json", m=3, seed=2)
        enc_path = tmp_path / "enc.json"
        main(["solve", "--input", str(sys_path), "--output", str(enc_path)])
        capsys.readouterr()
        rc = main(
            ["check", "--input", str(sys_path), "--enclosure", str(enc_path), "--samples", "50"]
        )
        assert rc == 0
        assert "contained 50/50 sampled member solutions" in capsys.readouterr().out

    def test_escape_from_verified_box_exits_3(self, tmp_path, capsys):
        sys_path = _gen_file(tmp_path, "sys.json", m=3, seed=2)
        enc_path = tmp_path / "enc.json"
        main(["solve", "--input", str(sys_path), "--output", str(enc_path)])
        doc = load_json(enc_path.read_text())
        # tamper: collapse the reported box so sampled solutions fall outside
        doc["evaluated"]["rad"] = (np.zeros((3, 3))).tolist()
        doc["evaluated"]["mid_re"] = (np.asarray(doc["evaluated"]["mid_re"]) + 10.0).tolist()
        enc_path.write_text(dump_json(doc))
        capsys.readouterr()
        rc = main(
            ["check", "--input", str(sys_path), "--enclosure", str(enc_path), "--samples", "20"]
        )
        assert rc == 3
        assert "contained 0/20" in capsys.readouterr().out

    def test_unverified_enclosure_exits_2(self, tmp_path, capsys):
        sys_path = _gen_file(tmp_path, "hard.json", family="gallery33", m=2, alpha=1e-2)
        enc_path = tmp_path / "enc.json"
        main(["solve", "--input", str(sys_path), "--output", str(enc_path)])
        capsys.readouterr()
        rc = main(["check", "--input", str(sys_path), "--enclosure", str(enc_path)])
        assert rc == 2
        assert "not verified" in capsys.readouterr().out


class TestBench:
    def test_csv_layout(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = main(
            [
                "bench",
                "--family",
                "kyc31",
                "--sizes",
                "3,5",
                "--methods",
                "mkw,itr",
                "--samples",
                "20",
                "--output",
                str(out),
            ]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 3
        header = lines[0].split(",")
        for col in ("family", "m", "n", "time_mkw", "ratio_itr", "verified_mkw"):
            assert col in header
        assert lines[1].split(",")[1] == "3" and lines[2].split(",")[1] == "5"

    def test_jsonl_parses(self, tmp_path):
        out = tmp_path / "bench.jsonl"
        rc = main(
            [
                "bench",
                "--sizes",
                "3",
                "--methods",
                "mkw,ver",
                "--samples",
                "10",
                "--format",
                "jsonl",
                "--output",
                str(out),
            ]
        )
        assert rc == 0
        rows = [json.loads(line) for line in out.read_text().strip().splitlines()]
        assert {r["method"] for r in rows} == {"mkw", "ver"}
        assert all(r["verified"] for r in rows)
        assert all(r["sample_containment_rate"] == 1.0 for r in rows)

    def test_size_cap_rows_do_not_fail_the_run(self, tmp_path):
        out = tmp_path / "bench.jsonl"
        rc = main(
            [
                "bench",
                "--sizes",
                "40",
                "--methods",
                "mkw,ver",
                "--samples",
                "5",
                "--baseline-cap",
                "100",
                "--format",
                "jsonl",
                "--output",
                str(out),
            ]
        )
        assert rc == 0
        rows = {r["method"]: r for r in map(json.loads, out.read_text().strip().splitlines())}
        assert rows["ver"]["note"] == "size-cap"
        assert rows["mkw"]["verified"] is True

    def test_unverified_cell_exits_2(self, tmp_path):
        rc = main(
            [
                "bench",
                "--family",
                "gallery33",
                "--sizes",
                "2",
                "--alpha",
                "1e-2",
                "--methods",
                "mkw",
                "--samples",
                "5",
                "--output",
                str(tmp_path / "bench.csv"),
            ]
        )
        assert rc == 2


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "sylvenc.cli", "gen", "--family", "kyc31", "--m", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert '"A"' in proc.stdout
