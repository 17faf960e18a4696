import json
from pathlib import Path

from zimrev.cli import main

CORPUS = Path(__file__).parent / "binary_patterns.jsonl"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


class TestDecideCommand:
    def test_unavoidable(self, capsys):
        code, data, _ = run_json(capsys, "decide", "x y x~")
        assert code == 0
        assert data["status"] == "unavoidable"
        assert data["schema_version"] == "1"
        assert data["certificate"]["kind"] == "zimin_division"

    def test_avoidable(self, capsys):
        code, data, _ = run_json(capsys, "decide", "x x~")
        assert code == 0
        assert data["status"] == "avoidable"

    def test_parse_error_exit_2(self, capsys):
        code, out, err = run_cli(capsys, "decide", "x .. y")
        assert code == 2
        assert "position" in err

    def test_byte_identical_output(self, capsys):
        _, out1, _ = run_cli(capsys, "decide", "x y x~")
        _, out2, _ = run_cli(capsys, "decide", "x y x~")
        assert out1 == out2


class TestDividesCommand:
    def test_worked_example(self, capsys):
        code, data, _ = run_json(capsys, "divides", "x y x . y~", "x y z x y z . z~ y~ z~")
        assert code == 0
        assert data["divides"] is True
        assert data["morphism"] == {"x": "x", "y": "y z"}

    def test_negative(self, capsys):
        code, data, _ = run_json(capsys, "divides", "x x", "x y x")
        assert code == 0
        assert data["divides"] is False
        assert data["morphism"] is None


class TestOccursCommand:
    def test_positive(self, capsys):
        code, data, _ = run_json(capsys, "occurs", "x x~", "abba")
        assert code == 0
        assert data["occurs"] is True

    def test_negative(self, capsys):
        code, data, _ = run_json(capsys, "occurs", "x x", "abc")
        assert code == 0
        assert data["occurs"] is False


class TestFlattenCommand:
    def test_flatten(self, capsys):
        code, data, _ = run_json(capsys, "flatten", "x y~ x . y")
        assert code == 0
        assert data["flattened"] == "x y x . y"


class TestReduceCommand:
    def test_reducible(self, capsys):
        code, data, _ = run_json(capsys, "reduce", "x y x")
        assert code == 0
        assert data["reducible"] is True
        assert data["chain"][0]["deleted"] == ["x"]

    def test_irreducible(self, capsys):
        code, data, _ = run_json(capsys, "reduce", "x x")
        assert code == 0
        assert data["reducible"] is False

    def test_mirrored_rejected(self, capsys):
        code, _, err = run_cli(capsys, "reduce", "x x~")
        assert code == 2
        assert "mirror" in err


class TestZiminCommand:
    def test_stats(self, capsys):
        code, data, _ = run_json(capsys, "zimin", "2", "1")
        assert code == 0
        assert data["fragments"] == 16
        assert data["length"] == 5
        assert data["template"] == "X1 X2 y1 X1 X2"
        assert len(data["fragments_list"]) == 16

    def test_large_template_not_enumerated(self, capsys):
        code, data, _ = run_json(capsys, "zimin", "3", "2")
        assert code == 0
        assert data["fragments"] == 4096
        assert "fragments_list" not in data


class TestPowerfreeCommand:
    def test_square_free(self, capsys):
        code, data, _ = run_json(capsys, "powerfree", "3", "2", "50")
        assert code == 0
        assert len(data["word"]) == 50

    def test_fractional_exponent(self, capsys):
        code, data, _ = run_json(capsys, "powerfree", "4", "3/2", "60")
        assert code == 0
        assert data["alpha"] == "3/2"

    def test_impossible_exits_nonzero(self, capsys):
        code, data, _ = run_json(capsys, "powerfree", "2", "3/2", "10")
        assert code == 1
        assert data["mode"] == "tree_exhausted"


class TestCorpusCommand:
    def test_small_corpus(self, tmp_path, capsys):
        path = tmp_path / "mini.jsonl"
        entries = [
            {"formula": "x y x~", "expected_status": "unavoidable", "tags": []},
            {"formula": "x x~", "expected_status": "avoidable", "tags": []},
            {"formula": "x x", "expected_status": "avoidable"},
        ]
        path.write_text("\n".join(json.dumps(e) for e in entries))
        code, data, _ = run_json(capsys, "--jobs", "1", "corpus", str(path))
        assert code == 0
        assert data["entries"] == 3
        assert data["mismatches"] == []
        assert data["status_counts"] == {"unavoidable": 1, "avoidable": 2}

    def test_mismatch_exit_1(self, tmp_path, capsys):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps({"formula": "x x", "expected_status": "unavoidable"}))
        code, data, _ = run_json(capsys, "--jobs", "1", "corpus", str(path))
        assert code == 1
        assert len(data["mismatches"]) == 1

    def test_malformed_line_reported(self, tmp_path, capsys):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"formula": "x"}\nnot json at all\n')
        code, out, err = run_cli(capsys, "--jobs", "1", "corpus", str(path))
        assert code == 2
        assert "line 2" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "corpus", "/nonexistent/corpus.jsonl")
        assert code == 2

    def test_checked_in_corpus_sample(self, tmp_path, capsys):
        # a light regression run over a sample of the real corpus; the full
        # file runs in the acceptance suite
        lines = CORPUS.read_text().strip().splitlines()
        sample = lines[::20]
        path = tmp_path / "sample.jsonl"
        path.write_text("\n".join(sample))
        code, data, _ = run_json(capsys, "--jobs", "1", "corpus", str(path))
        assert code == 0
        assert data["mismatches"] == []

    def test_parallel_run_matches_serial(self, tmp_path, capsys):
        lines = CORPUS.read_text().strip().splitlines()
        path = tmp_path / "sample.jsonl"
        path.write_text("\n".join(lines[::40]))
        _, serial, _ = run_cli(capsys, "--jobs", "1", "corpus", str(path))
        _, parallel, _ = run_cli(capsys, "--jobs", "2", "corpus", str(path))
        assert serial == parallel


def test_usage_error_exit_2(capsys):
    assert main(["decide"]) == 2


def test_unknown_command_exit_2(capsys):
    assert main(["frobnicate"]) == 2
