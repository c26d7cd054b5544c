import io

import pytest

from corpus import (
    Corpus, Sentence, Token, read_plain, read_tagged, validate_tagged, write_plain, write_tagged, write_text,
)
from errors import AlignmentError, EmptySentence, FormatError, UnknownTag
from tagset import parse_tag


class TestTokens:
    def test_multiword_surface(self):
        tok = Token.from_surface("New~Zealand")
        assert tok.parts == ("New", "Zealand")
        assert tok.is_multiword
        assert tok.surface == "New~Zealand"

    @pytest.mark.parametrize("surface", ["", "New~", "~York", "a b"])
    def test_bad_parts(self, surface):
        with pytest.raises(FormatError):
            Token.from_surface(surface)

    def test_empty_sentence(self):
        with pytest.raises(EmptySentence):
            Sentence(())


class TestTaggedFormat:
    def test_worked_examples(self, example_corpus):
        assert example_corpus.source_id == "worked-examples"
        assert [len(s) for s in example_corpus] == [8, 10, 11, 9]
        assert example_corpus.token_total == 38
        assert example_corpus.is_tagged

    def test_multiword_lines(self, example_corpus):
        first, second = example_corpus.sentences[0], example_corpus.sentences[1]
        fenway = first.items[6]
        assert fenway.token.parts == ("Fenway",) and fenway.tag.code == "GEO"
        us = second.items[5]
        assert us.token.parts == ("United", "States") and us.tag.code == "GPE"

    def test_write_reproduces_file(self, example_corpus, example_path):
        with open(example_path, encoding="utf-8", newline="") as f:
            assert write_tagged(example_corpus) == f.read()

    def test_read_from_stream(self):
        corpus = read_tagged(io.StringIO("a\tDIS\ndog\tCON\n\n\nbarks\tENS\n"))
        assert [s.surfaces for s in corpus] == [["a", "dog"], ["barks"]]

    def test_crlf_line_endings(self):
        corpus = read_tagged(io.StringIO("a\tDIS\r\ndog\tCON\r\n\r\n"))
        assert corpus.sentences[0].tags == [parse_tag("DIS"), parse_tag("CON")]

    def test_unknown_tag_has_line_number(self):
        with pytest.raises(UnknownTag) as err:
            read_tagged(io.StringIO("a\tDIS\ndog\tXYZ\n"))
        assert err.value.line_no == 2
        assert err.value.code == "XYZ"

    def test_lowercase_tag_needs_upcase_flag(self):
        text = "a\tdis\n"
        with pytest.raises(UnknownTag):
            read_tagged(io.StringIO(text))
        assert read_tagged(io.StringIO(text), upcase_tags=True).sentences[0].tags[0].code == "DIS"

    def test_wrong_column_count(self):
        with pytest.raises(FormatError) as err:
            read_tagged(io.StringIO("a\tDIS\textra\n"))
        assert err.value.line_no == 1

    def test_empty_file(self):
        corpus = read_tagged(io.StringIO(""))
        assert len(corpus) == 0
        assert write_tagged(corpus) == ""

    def test_leading_bom_is_dropped(self, tmp_path):
        path = tmp_path / "bom.tsv"
        path.write_bytes(b"\xef\xbb\xbfHow\tQUE\n\n")
        assert read_tagged(str(path)).sentences[0].surfaces == ["How"]
        # streams already decoded with the BOM still in front
        corpus = read_tagged(io.StringIO("\ufeff# source: x\nHow\tQUE\n\n"))
        assert corpus.source_id == "x"
        assert corpus.sentences[0].surfaces == ["How"]

    def test_leading_bom_in_plain_text(self, tmp_path):
        path = tmp_path / "bom.txt"
        path.write_bytes(b"\xef\xbb\xbfHow tall ?\n")
        assert read_plain(str(path)).sentences[0].surfaces == ["How", "tall", "?"]
        assert validate_tagged(io.StringIO("\ufeffHow\tQUE\n\n")) == ([], 1)

    @pytest.mark.parametrize("source_id", ["x", "worked-examples", "a b", "corpus/part-00/doc-0801", "#hash"])
    def test_source_id_survives_write_and_read(self, example_corpus, source_id):
        corpus = Corpus(example_corpus.sentences, source_id)
        again = read_tagged(io.StringIO(write_tagged(corpus)))
        assert again.source_id == source_id
        assert again == corpus

    @pytest.mark.parametrize("source_id", ["", " ", " padded ", "trailing ", "a\tb", "a\nb"])
    def test_source_id_that_cannot_be_written_back(self, source_id):
        with pytest.raises(FormatError):
            Corpus((), source_id)


class TestValidation:
    def test_clean_corpus(self, example_path):
        problems, n = validate_tagged(example_path)
        assert problems == []
        assert n == 4

    def test_collects_every_problem(self):
        text = "a\tDIS\nb\tXYZ\nc\n\nd\tCON\ne\tqqq\n"
        problems, _ = validate_tagged(io.StringIO(text))
        assert [p.line_no for p in problems] == [2, 3, 6]
        assert isinstance(problems[0], UnknownTag)
        assert isinstance(problems[1], FormatError)


class TestPlainFormat:
    def test_read(self):
        corpus = read_plain(io.StringIO("He himself can earn $ 100 a day .\n\nNew~Zealand\n"))
        assert len(corpus) == 2
        assert len(corpus.sentences[0]) == 9
        assert corpus.sentences[1].tokens[0].parts == ("New", "Zealand")
        assert not corpus.is_tagged

    def test_double_space_is_an_error(self):
        with pytest.raises(FormatError) as err:
            read_plain(io.StringIO("ok\nnot  ok\n"))
        assert err.value.line_no == 2

    def test_write(self, example_corpus):
        text = write_plain(example_corpus)
        assert text.splitlines()[1] == "My sister went to the United~States to study English ."


class TestTagging:
    def test_with_tags_checks_length(self, example_corpus):
        s = example_corpus.sentences[0]
        with pytest.raises(AlignmentError):
            s.with_tags(s.tags[:-1])

    def test_corpus_alignment_error_names_sentence(self, example_corpus):
        seqs = [s.tags for s in example_corpus]
        seqs[2] = seqs[2][:-1]
        with pytest.raises(AlignmentError) as err:
            example_corpus.strip_tags().with_tags(seqs)
        assert err.value.sentence_index == 2

    def test_strip_then_retag(self, example_corpus):
        stripped = example_corpus.strip_tags()
        assert not stripped.is_tagged
        assert stripped.with_tags([s.tags for s in example_corpus]) == example_corpus

    def test_mixed_sentence_rejected(self):
        tagged = Sentence.from_pairs([("a", "DIS")]).items[0]
        with pytest.raises(FormatError):
            Sentence((tagged, Token.from_surface("b")))


class TestWriteText:
    def test_atomic_write(self, tmp_path):
        path = tmp_path / "out.tsv"
        write_text(str(path), "x\tCON\n")
        assert path.read_text(encoding="utf-8") == "x\tCON\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.tsv"]

    def test_stdout(self, capsys):
        write_text("-", "hello\n")
        assert capsys.readouterr().out == "hello\n"
