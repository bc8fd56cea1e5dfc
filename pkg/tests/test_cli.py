"""Command-line interface: subcommands, exit codes, determinism."""

import json

import pytest

from boolekit.cli import main
from boolekit.io import parse_pairs_text, parse_triples_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheckCommands:
    def test_check_triples(self, tmp_path, capsys):
        path = tmp_path / "triples.csv"
        path.write_text("alpha,a1,a2,a3\n1,+1,+1,+1\n2,-1,-1,-1\n")
        code, out, _ = run_cli(capsys, "check-triples", str(path))
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "satisfied"
        assert doc["counts"] == {"m": 2}

    def test_check_pairs_violated_still_exit_zero(self, tmp_path, capsys):
        path = tmp_path / "pairs.csv"
        path.write_text(
            "group,alpha,t_first,t_second,out_first,out_second\n"
            "12,1,,,+1,+1\n13,1,,,+1,+1\n23,1,,,+1,-1\n"
        )
        code, out, _ = run_cli(capsys, "check-pairs", str(path))
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "violated"
        assert doc["violation_amount"]["num"] == 2

    def test_malformed_file_is_data_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("alpha,a1,a2,a3\n1,+1,0,+1\n")
        code, _, err = run_cli(capsys, "check-triples", str(path))
        assert code == 1
        assert "invalid outcome" in err

    def test_missing_file_is_data_error(self, capsys):
        code, _, err = run_cli(capsys, "check-triples", "/nonexistent/file.csv")
        assert code == 1


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 2

    def test_unknown_flag(self, capsys):
        assert run_cli(capsys, "lemma", "--bogus")[0] == 2

    def test_bad_fraction(self, capsys):
        assert run_cli(capsys, "feasible", "--f12", "abc", "--f13", "0", "--f23", "0")[0] == 2


class TestFeasible:
    def test_certificate(self, capsys):
        code, out, _ = run_cli(
            capsys, "feasible", "--f12", "1", "--f13", "1", "--f23", "-1"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["feasible"] is False
        assert doc["certificate"] == "ppm"

    def test_distribution(self, capsys):
        code, out, _ = run_cli(
            capsys, "feasible", "--f12", "1/2", "--f13", "1/2", "--f23", "1/2"
        )
        doc = json.loads(out)
        assert code == 0 and doc["feasible"] is True
        assert doc["certificate"] is None
        assert set(doc["distribution"]) == {
            "+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"
        }

    def test_out_of_range_is_data_error(self, capsys):
        code, _, err = run_cli(capsys, "feasible", "--f12", "2", "--f13", "0", "--f23", "0")
        assert code == 1
        assert "out of range" in err


class TestSynthesize:
    def test_emits_parsable_dataset(self, capsys):
        code, out, _ = run_cli(
            capsys, "synthesize", "--f12", "1/2", "--f13", "1/2", "--f23", "1/2", "--m", "8"
        )
        assert code == 0
        ds = parse_triples_text(out)
        assert ds.m == 8

    def test_infeasible_is_data_error(self, capsys):
        code, _, err = run_cli(
            capsys, "synthesize", "--f12", "1", "--f13", "1", "--f23", "-1", "--m", "4"
        )
        assert code == 1
        assert "ppm" in err

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "synth.csv"
        code, out, _ = run_cli(
            capsys,
            "synthesize", "--f12", "0", "--f13", "0", "--f23", "0", "--m", "8",
            "--out", str(path),
        )
        assert code == 0 and out == ""
        assert parse_triples_text(path.read_text()).m == 8


class TestScenario:
    def test_doctors(self, capsys):
        code, out, _ = run_cli(capsys, "scenario", "doctors", "--dates", "3", "--patients", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["violation_amount"]["num"] == 2
        assert doc["scenario"] == "doctors"
        assert doc["seed"] is None

    def test_doctors_bad_dates(self, capsys):
        code, _, err = run_cli(capsys, "scenario", "doctors", "--dates", "4")
        assert code == 1

    def test_telegraph_with_data_out(self, tmp_path, capsys):
        data = tmp_path / "telegraph.csv"
        code, out, _ = run_cli(
            capsys,
            "scenario", "telegraph", "--gamma", "0.1", "--dt", "0.5", "--m", "200",
            "--seed", "7", "--data-out", str(data),
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["counts"] == {"m12": 200, "m13": 200, "m23": 200}
        ds = parse_pairs_text(data.read_text())
        assert ds.counts == (200, 200, 200)

    def test_telegraph_identity_schedule(self, capsys):
        # gamma 0.8: the tightest analytic margin (1-x)^2 is ~0.3, far
        # above sampling noise at m=500, so the verdict is stable
        code, out, _ = run_cli(
            capsys,
            "scenario", "telegraph", "--schedule", "identity",
            "--gamma", "0.8", "--m", "500", "--seed", "3",
        )
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] == "satisfied"

    def test_context_free(self, capsys):
        code, out, _ = run_cli(
            capsys, "scenario", "context-free", "--m", "400", "--trials", "3", "--seed", "1"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["within_bound"] is True
        assert doc["trials"] == 3

    def test_byte_identical_reruns(self, capsys):
        args = ("scenario", "telegraph", "--m", "300", "--seed", "42")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second


class TestSearchAndLemma:
    def test_search(self, capsys):
        code, out, _ = run_cli(capsys, "search")
        assert code == 0
        doc = json.loads(out)
        assert doc["max_violation"]["num"] == 2
        assert doc["num_maximizers"] == 32
        assert doc["num_flip_orbits"] == 16
        assert doc["context_free_max_violation"]["num"] == 0

    def test_lemma_csv(self, capsys):
        code, out, _ = run_cli(capsys, "lemma", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "a1,a2,a3,pattern,value"
        assert len(lines) == 33
        values = {int(line.split(",")[4]) for line in lines[1:]}
        assert values == {1, -3}

    def test_lemma_json(self, capsys):
        code, out, _ = run_cli(capsys, "lemma")
        doc = json.loads(out)
        assert code == 0 and len(doc["rows"]) == 32

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0
