import pytest

from cli import main
from corpus import read_tagged, write_plain
from model_io import load_model


@pytest.fixture
def plain_path(example_corpus, tmp_path):
    path = tmp_path / "plain.txt"
    path.write_text(write_plain(example_corpus), encoding="utf-8")
    return str(path)


class TestValidate:
    def test_clean_corpus(self, example_path, capsys):
        assert main(["validate", example_path]) == 0
        assert capsys.readouterr().out == "OK: 4 sentences, all tags valid\n"

    def test_problems(self, tmp_path, capsys):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tXYZ\nb\tCON\n\n", encoding="utf-8")
        assert main(["validate", str(path)]) == 1
        assert capsys.readouterr().out.endswith("1 problem(s) found\n")

    def test_three_column_line(self, tmp_path, capsys):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tDIS\ndog\tCON\textra\n\n", encoding="utf-8")
        assert main(["validate", str(path)]) == 1
        out = capsys.readouterr().out.splitlines()
        assert out == ["line 2: expected 2 columns (surface, tag), found 3", "1 problem(s) found"]


class TestUsage:
    def test_missing_arguments(self):
        assert main(["train"]) == 2

    def test_out_of_range_flag(self, example_path, tmp_path):
        assert main(["train", example_path, "--model", str(tmp_path / "m.txt"), "--beam", "-1"]) == 2
        assert not (tmp_path / "m.txt").exists()

    def test_missing_input(self, plain_path, tmp_path):
        out = tmp_path / "out.tsv"
        assert main(["tag", "--model", str(tmp_path / "nope.txt"), plain_path, str(out)]) == 9
        assert not out.exists()

    def test_schema_needs_arguments(self):
        assert main(["schema", "EXS"]) == 2


class TestPipeline:
    def _run_pipeline(self, example_path, plain_path, out_dir, capsys):
        out_dir.mkdir()
        model = out_dir / "model.txt"
        tagged = out_dir / "tagged.tsv"
        assert main(["train", example_path, "--model", str(model)]) == 0
        assert main(["tag", "--model", str(model), plain_path, str(tagged), "--beam", "0"]) == 0
        capsys.readouterr()
        assert main(["eval", example_path, str(tagged), "--format", "tsv"]) == 0
        return model.read_bytes(), tagged.read_bytes(), capsys.readouterr().out

    def test_train_tag_eval(self, example_path, plain_path, tmp_path, capsys):
        _, tagged, report = self._run_pipeline(example_path, plain_path, tmp_path / "run", capsys)
        assert tagged.count(b"\n\n") == 4
        lines = report.splitlines()
        # tagging the training sentences with exact search gets every token right
        assert "accuracy\tall\t1.000000" in lines
        assert "correct\tall\t38" in lines

    def test_pipeline_is_byte_identical_across_runs(self, example_path, plain_path, tmp_path, capsys):
        first = self._run_pipeline(example_path, plain_path, tmp_path / "one", capsys)
        second = self._run_pipeline(example_path, plain_path, tmp_path / "two", capsys)
        assert first == second

    def test_baseline_against_model(self, example_path, tmp_path, capsys):
        model = tmp_path / "model.txt"
        assert main(["train", example_path, "--model", str(model)]) == 0
        assert main(["baseline", example_path, example_path, "--model", str(model)]) == 0
        assert capsys.readouterr().out

    def test_misaligned_eval(self, example_path, tmp_path):
        short = tmp_path / "short.tsv"
        short.write_text("He\tPRO\n\n", encoding="utf-8")
        assert main(["eval", example_path, str(short)]) == 6

    def test_bootstrap_writes_a_model(self, example_path, plain_path, tmp_path, capsys):
        model = tmp_path / "boot.txt"
        code = main([
            "bootstrap", example_path, plain_path, example_path,
            "--model", str(model), "--max-iter", "2", "--threshold", "0.5", "--format", "tsv",
        ])
        assert code == 0
        assert load_model(str(model)).config.beam_width == 20
        assert "stop_reason\tall\t" in capsys.readouterr().out


class TestSchemaAndTagset:
    def test_schema(self, capsys):
        assert main(["schema", "EXS", "S\\NP", "walk", "Agent"]) == 0
        assert capsys.readouterr().out == "λP.λr.P(λx.[e | walk(e), Agent(e,x)];r(e))\n"

    def test_unregistered_pair(self):
        assert main(["schema", "EXS", "N", "walk"]) == 7

    def test_tagset_tsv(self, capsys):
        assert main(["tagset", "--format", "tsv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 74
        assert "\tPRO\t" in lines[1]
