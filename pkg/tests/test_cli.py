import json
import subprocess
import sys

import pytest

from sprkit import contract, load_graph, minor_to_edge_list, nearest_terminal_partition
from sprkit.cli import main
from sprkit.reports import parse_report


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "sprkit", *argv],
        capture_output=True,
        text=True,
    )


@pytest.fixture()
def grid_file(tmp_path):
    path = tmp_path / "grid.txt"
    rc = main(
        [
            "gen",
            "--family",
            "grid",
            "--rows",
            "4",
            "--cols",
            "5",
            "--k",
            "4",
            "--seed",
            "3",
            "--out",
            str(path),
        ]
    )
    assert rc == 0
    return path


class TestGen:
    def test_writes_parseable_instance(self, grid_file):
        g = load_graph(grid_file)
        assert g.n == 20 and g.k == 4

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["gen", "--family", "gnp_weighted", "--n", "15", "--k", "3", "--seed", "9"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_family_exits_2(self):
        proc = run_cli("gen", "--family", "hypercube")
        assert proc.returncode == 2


class TestSpr:
    def test_report_schema_and_exit_code(self, grid_file, tmp_path):
        out = tmp_path / "rep.json"
        rc = main(
            ["spr", "--input", str(grid_file), "--trials", "3", "--seed", "5", "--out", str(out)]
        )
        assert rc == 0
        doc = parse_report(out.read_text())
        assert doc["schema_version"] == 1 and doc["kind"] == "spr"
        assert len(doc["trials"]) == 3
        assert all("wall_time" not in t for t in doc["trials"])
        assert doc["best_max_stretch"] >= 1.0

    def test_timings_flag_adds_wall_time(self, grid_file, capsys):
        rc = main(["spr", "--input", str(grid_file), "--timings"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert all(t["wall_time"] > 0 for t in doc["trials"])

    def test_trace_embedded(self, grid_file, capsys):
        rc = main(["spr", "--input", str(grid_file), "--trace"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["trace"], "expected a nonempty growth trace"
        i, j, draw, radius, newly = doc["trace"][0]
        assert i == 1 and j == 0 and draw > 0 and radius >= draw

    def test_csv_report(self, grid_file, capsys):
        rc = main(["spr", "--input", str(grid_file), "--report", "csv", "--trials", "2"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].split(",")[:3] == ["trial", "seed", "algorithm"]
        assert len(lines) == 3

    def test_missing_input_exits_2(self, tmp_path):
        proc = run_cli("spr", "--input", str(tmp_path / "nope.txt"))
        assert proc.returncode == 2


class TestSprGeneral:
    def test_barbell_report(self, tmp_path, capsys):
        path = tmp_path / "bar.txt"
        assert main(["gen", "--family", "barbell", "--clique", "3", "--out", str(path)]) == 0
        rc = main(["spr-general", "--input", str(path), "--seed", "2"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "spr-general"
        assert doc["levels"][0]["mode"] == "recursed"
        assert doc["partition_valid"] is True

    def test_csv_levels(self, tmp_path, capsys):
        path = tmp_path / "bar.txt"
        assert main(["gen", "--family", "barbell", "--out", str(path)]) == 0
        rc = main(["spr-general", "--input", str(path), "--report", "csv"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("depth,k,aspect")


class TestDecompose:
    def test_report_and_exit(self, grid_file, capsys):
        rc = main(
            ["decompose", "--input", str(grid_file), "--delta", "3", "--trials", "200", "--seed", "1"]
        )
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "decompose"
        assert doc["requirements"]["diameter_bound"]["passed"] is True
        assert rc == 0 if doc["requirements"]["all_passed"] else 1


class TestEval:
    def test_faithful_minor_passes(self, grid_file, tmp_path, capsys):
        g = load_graph(grid_file)
        m = contract(g, nearest_terminal_partition(g))
        minor_path = tmp_path / "minor.txt"
        minor_path.write_text(minor_to_edge_list(m))
        rc = main(["eval", "--input", str(grid_file), "--minor", str(minor_path)])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["domination_ok"] is True

    def test_shrunk_weights_violate_domination(self, grid_file, tmp_path, capsys):
        g = load_graph(grid_file)
        m = contract(g, nearest_terminal_partition(g))
        text = minor_to_edge_list(m)
        lines = text.strip().splitlines()
        doctored = [lines[0]]
        for line in lines[1:-1]:
            u, v, w = line.split()
            doctored.append(f"{u} {v} {float(w) / 4}")
        doctored.append(lines[-1])
        minor_path = tmp_path / "cheap.txt"
        minor_path.write_text("\n".join(doctored) + "\n")
        rc = main(["eval", "--input", str(grid_file), "--minor", str(minor_path)])
        assert rc == 1


class TestCompare:
    def test_compare_report(self, grid_file, capsys):
        rc = main(["compare", "--input", str(grid_file), "--trials", "2", "--seed", "8"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["baseline"]["algorithm"] == "baseline"
        assert len(doc["amplified"]["trials"]) == 2

    def test_compare_csv(self, grid_file, capsys):
        rc = main(["compare", "--input", str(grid_file), "--trials", "2", "--report", "csv"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("role,")
        assert lines[1].startswith("baseline,")
        assert len(lines) == 4


class TestCsvKinds:
    def test_decompose_csv(self, grid_file, capsys):
        rc = main(
            ["decompose", "--input", str(grid_file), "--delta", "3", "--trials", "50",
             "--report", "csv"]
        )
        assert rc in (0, 1)
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "record,key,value"
        assert any(line.startswith("requirement,diameter_bound") for line in lines)

    def test_eval_csv(self, grid_file, tmp_path, capsys):
        g = load_graph(grid_file)
        m = contract(g, nearest_terminal_partition(g))
        minor_path = tmp_path / "minor.txt"
        minor_path.write_text(minor_to_edge_list(m))
        rc = main(
            ["eval", "--input", str(grid_file), "--minor", str(minor_path), "--report", "csv"]
        )
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "i,j,stretch"
        assert len(lines) == 1 + g.k * (g.k - 1) // 2


class TestReproducibility:
    def test_byte_identical_reports_across_processes(self, grid_file, tmp_path):
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            proc = run_cli(
                "spr",
                "--input",
                str(grid_file),
                "--trials",
                "2",
                "--seed",
                "41",
                "--out",
                str(out),
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
