import pytest

from errors import FormatError, UnknownTag
from tagset import (
    TAG_COUNT, Tagset, all_tags, default_tagset, meta_of, meta_tags, new_tags, parse_tag, tagset_frame,
)


class TestTagset:
    def test_sizes(self):
        assert len(all_tags()) == TAG_COUNT == 73
        assert len(meta_tags()) == 13

    def test_every_tag_has_exactly_one_meta(self):
        seen = {}
        for m in meta_tags():
            for code in m.members:
                assert code not in seen
                seen[code] = m.code
        assert set(seen) == {t.code for t in all_tags()}
        for t in all_tags():
            assert meta_of(t).code == seen[t.code] == t.meta

    def test_parse_tag(self):
        exs = parse_tag("EXS")
        assert exs.code == "EXS"
        assert meta_of(exs).code == "EVE"
        assert meta_of(parse_tag("GPE")).code == "NAM"

    def test_lookup_is_case_sensitive(self):
        with pytest.raises(UnknownTag) as err:
            parse_tag("exs")
        assert err.value.code == "exs"
        with pytest.raises(UnknownTag):
            parse_tag("XYZ")

    def test_order_is_stable_and_indexed(self):
        tags = all_tags()
        assert [t.index for t in tags] == list(range(len(tags)))
        assert tags == default_tagset().all_tags()
        # meta-tags in table order, members in row order
        flattened = [code for m in meta_tags() for code in m.members]
        assert flattened == [t.code for t in tags]

    def test_within_logical_group_dis_comes_before_and(self):
        assert parse_tag("DIS").index < parse_tag("AND").index

    def test_new_tags_are_marked(self):
        assert {t.code for t in new_tags()} == {
            "QUC", "QUV", "COL", "DEG", "GRP", "DXP", "DXT", "DXD",
            "GPO", "CTC", "LIT", "NTH", "DAT", "PRG", "PFT",
        }
        assert all(t.is_new for t in new_tags())

    def test_table_boundaries(self):
        tags = all_tags()
        assert tags[0].code == "PRO"
        assert tags[-1].code == "CLO"
        assert parse_tag("QUC").meta == "ATT"
        assert parse_tag("PER").meta == "NAM"

    def test_frame(self):
        df = tagset_frame()
        assert len(df) == 73
        assert list(df.columns) == ["meta", "meta_gloss", "code", "gloss", "examples", "new"]
        assert df["code"].is_unique


class TestLoading:
    def test_duplicate_code_rejected(self, tmp_path):
        path = tmp_path / "tags.tsv"
        src = default_tagset()
        rows = [f"{t.code}\t{t.meta}\t{t.gloss}\t" for t in src.all_tags()]
        rows.append(rows[0])
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        with pytest.raises(FormatError):
            Tagset.load(str(path))

    def test_bad_code_rejected(self, tmp_path):
        path = tmp_path / "tags.tsv"
        path.write_text("ex\tEVE\tevent\t\n", encoding="utf-8")
        with pytest.raises(FormatError):
            Tagset.load(str(path))
