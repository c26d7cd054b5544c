"""
Trigram model file: UTF-8, line-oriented, one `[section]` header per table.

    [meta]          key<TAB>value (format, tagset, config, totals, theta)
    [unigram]       tag<TAB>count
    [bigram]        t1<TAB>t2<TAB>count
    [trigram]       t1<TAB>t2<TAB>t3<TAB>count
    [lexicon]       surface<TAB>tag<TAB>count
    [suffix-lower]  suffix<TAB>tag<TAB>count   (suffix may be empty)
    [suffix-upper]  suffix<TAB>tag<TAB>count
    [lambdas]       lambda1..3<TAB>value

Rows are sorted so files are diffable; reals are written with 17 significant
digits, which round-trips a float exactly. Smoothed suffix probabilities are
not stored: they are recomputed from the counts on load.
"""
from __future__ import annotations

import io
import logging
from typing import Dict, List, Optional, Tuple

from config import TaggerConfig
from corpus import PathOrStream, open_text, write_text
from errors import DegenerateCounts, ModelFormatError, UnknownTag
from tagset import Tagset, default_tagset
from taggers.counts import BOS, EOS, NgramCounts, tag_order
from taggers.suffix import SuffixModel
from taggers.trigram import TrigramModel

LOGGER = logging.getLogger(__name__)

FORMAT_VERSION = "1"
HEADER = "# semtagger trigram model"

SECTIONS = (
    "meta", "unigram", "bigram", "trigram", "lexicon",
    "suffix-lower", "suffix-upper", "lambdas",
)
_COLUMNS = {
    "meta": 2, "unigram": 2, "bigram": 3, "trigram": 4, "lexicon": 3,
    "suffix-lower": 3, "suffix-upper": 3, "lambdas": 2,
}

Row = Tuple[int, List[str]]


def _real(x: float) -> str:
    return format(x, ".17g")


def _tags_key(codes):
    return tuple(tag_order(c) for c in codes)


# =========================
# Writing
# =========================

def dumps_model(model: TrigramModel) -> str:
    c = model.counts
    cfg = model.config
    buf = io.StringIO()
    w = buf.write
    w(HEADER + "\n")

    w("[meta]\n")
    for key, value in (
        ("format", FORMAT_VERSION),
        ("tagset", model.tagset.version),
        ("beam_width", cfg.beam_width),
        ("max_suffix_len", cfg.max_suffix_len),
        ("rare_threshold", cfg.rare_threshold),
        ("token_total", c.token_total),
        ("sentence_total", c.sentence_total),
        ("theta", _real(model.suffix_model.theta)),
    ):
        w(f"{key}\t{value}\n")

    w("[unigram]\n")
    for t in sorted(c.unigram, key=tag_order):
        w(f"{t}\t{c.unigram[t]}\n")

    w("[bigram]\n")
    for key in sorted(c.bigram, key=_tags_key):
        w("\t".join(key) + f"\t{c.bigram[key]}\n")

    w("[trigram]\n")
    for key in sorted(c.trigram, key=_tags_key):
        w("\t".join(key) + f"\t{c.trigram[key]}\n")

    w("[lexicon]\n")
    for (surface, t) in sorted(c.word_tag, key=lambda k: (k[0], tag_order(k[1]))):
        w(f"{surface}\t{t}\t{c.word_tag[(surface, t)]}\n")

    for name, table in (("suffix-lower", model.suffix_model.lower), ("suffix-upper", model.suffix_model.upper)):
        w(f"[{name}]\n")
        for suffix in sorted(table):
            row = table[suffix]
            for t in sorted(row, key=tag_order):
                w(f"{suffix}\t{t}\t{row[t]}\n")

    w("[lambdas]\n")
    for i, value in enumerate(model.lambdas, start=1):
        w(f"lambda{i}\t{_real(value)}\n")
    return buf.getvalue()


def save_model(model: TrigramModel, path: str):
    write_text(path, dumps_model(model))
    LOGGER.info("model written to %s", path)


# =========================
# Reading
# =========================

def _split_sections(lines) -> Dict[str, List[Row]]:
    sections: Dict[str, List[Row]] = {}
    current: Optional[str] = None
    for line_no, raw in enumerate(lines, start=1):
        # keep leading/trailing TAB fields: the empty suffix is a real key
        line = raw.rstrip("\n").rstrip("\r")
        if "\t" not in line:
            if line == "" or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1]
                if name not in _COLUMNS:
                    raise ModelFormatError(f"unknown section [{name}]", line_no)
                if name in sections:
                    raise ModelFormatError(f"duplicate section [{name}]", line_no)
                sections[name] = []
                current = name
                continue
        if current is None:
            raise ModelFormatError("data before the first section header", line_no)
        fields = line.split("\t")
        if len(fields) != _COLUMNS[current]:
            raise ModelFormatError(
                f"[{current}] rows have {_COLUMNS[current]} columns, found {len(fields)}", line_no
            )
        sections[current].append((line_no, fields))
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise ModelFormatError(f"missing section(s): {', '.join('[' + s + ']' for s in missing)}")
    return sections


def _int(value: str, line_no: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise ModelFormatError(f"expected an integer, found {value!r}", line_no)
    if n < 0:
        raise ModelFormatError(f"negative count {n}", line_no)
    return n


def _float(value: str, line_no: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ModelFormatError(f"expected a number, found {value!r}", line_no)


def _tag(code: str, line_no: int, tagset: Tagset, boundary: bool = False) -> str:
    if boundary and code in (BOS, EOS):
        return code
    try:
        return tagset.parse_tag(code).code
    except UnknownTag:
        raise UnknownTag(code, line_no) from None


def loads_model(text: str, tagset: Optional[Tagset] = None) -> TrigramModel:
    ts = tagset or default_tagset()
    sections = _split_sections(io.StringIO(text))

    meta: Dict[str, Tuple[int, str]] = {k: (n, v) for n, (k, v) in sections["meta"]}
    for key in ("format", "tagset", "beam_width", "max_suffix_len", "rare_threshold",
                "token_total", "sentence_total", "theta"):
        if key not in meta:
            raise ModelFormatError(f"[meta] lacks {key!r}")
    if meta["format"][1] != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format {meta['format'][1]!r}", meta["format"][0])
    if meta["tagset"][1] != ts.version:
        raise ModelFormatError(
            f"model built for tagset {meta['tagset'][1]}, loaded with {ts.version}", meta["tagset"][0]
        )

    def meta_int(key: str) -> int:
        return _int(meta[key][1], meta[key][0])

    try:
        config = TaggerConfig(
            beam_width=meta_int("beam_width"),
            max_suffix_len=meta_int("max_suffix_len"),
            rare_threshold=meta_int("rare_threshold"),
        )
    except ValueError as e:
        raise ModelFormatError(f"invalid tagger settings: {e}")

    counts = NgramCounts(
        token_total=meta_int("token_total"),
        sentence_total=meta_int("sentence_total"),
    )
    for n, (t, v) in sections["unigram"]:
        counts.unigram[_tag(t, n, ts)] = _int(v, n)
    for n, (t1, t2, v) in sections["bigram"]:
        counts.bigram[(_tag(t1, n, ts, True), _tag(t2, n, ts, True))] = _int(v, n)
    for n, (t1, t2, t3, v) in sections["trigram"]:
        counts.trigram[(_tag(t1, n, ts, True), _tag(t2, n, ts, True), _tag(t3, n, ts, True))] = _int(v, n)
    for n, (surface, t, v) in sections["lexicon"]:
        counts.word_tag[(surface, _tag(t, n, ts))] = _int(v, n)

    tables = {}
    for name in ("suffix-lower", "suffix-upper"):
        table: Dict[str, Dict[str, int]] = {}
        for n, (suffix, t, v) in sections[name]:
            table.setdefault(suffix, {})[_tag(t, n, ts)] = _int(v, n)
        tables[name] = table

    lambda_rows = {k: (n, v) for n, (k, v) in sections["lambdas"]}
    try:
        lambdas = tuple(_float(lambda_rows[f"lambda{i}"][1], lambda_rows[f"lambda{i}"][0]) for i in (1, 2, 3))
    except KeyError as e:
        raise ModelFormatError(f"[lambdas] lacks {e.args[0]!r}")

    try:
        counts.check()
        suffix_model = SuffixModel(
            max_suffix_len=config.max_suffix_len,
            theta=_float(meta["theta"][1], meta["theta"][0]),
            lower=tables["suffix-lower"],
            upper=tables["suffix-upper"],
        )
        model = TrigramModel(counts, lambdas, suffix_model, config, ts)
    except (DegenerateCounts, ValueError) as e:
        raise ModelFormatError(f"inconsistent model: {e}")
    LOGGER.debug("loaded model: %d tokens, %d lexicon entries", counts.token_total, len(counts.word_tag))
    return model


def load_model(path: PathOrStream, tagset: Optional[Tagset] = None) -> TrigramModel:
    with open_text(path) as f:
        text = f.read()
    return loads_model(text, tagset)
