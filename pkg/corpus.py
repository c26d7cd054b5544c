"""
Tokenized, optionally tagged sentences and their two file formats.

Tagged format (two-column TSV)::

    # source: worked-examples
    How<TAB>QUE
    tall<TAB>DEG
    ...
    ?<TAB>QUE
    <blank line>

A multiword token is one semantic atom and is serialized with its parts
joined by `~` (United~States). Comments are lines starting with `#` that
hold no TAB and come before the first token of a sentence; every line
with a TAB is a token line.

Plain format: one sentence per line, tokens separated by single spaces,
multiword parts pre-joined with `~`. Blank lines are ignored.

Case is kept verbatim; any folding belongs to the tagger.
"""
from __future__ import annotations

import contextlib
import io
import logging
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from cleaning import clean_line, clean_tag_code, join_parts, split_surface, check_part
from errors import AlignmentError, EmptySentence, FormatError, SemtagError, UnknownTag
from tagset import SemTag, Tagset, default_tagset

LOGGER = logging.getLogger(__name__)

_SOURCE_RE = re.compile(r"^#\s*source:\s*(\S.*?)\s*$")

PathOrStream = Union[str, "os.PathLike[str]", IO[str]]


@dataclass(frozen=True)
class Token:
    parts: Tuple[str, ...]

    def __post_init__(self):
        if not self.parts:
            raise FormatError("token has no parts")
        for p in self.parts:
            check_part(p)

    @classmethod
    def from_surface(cls, surface: str) -> "Token":
        return cls(split_surface(surface))

    @property
    def surface(self) -> str:
        return join_parts(list(self.parts))

    @property
    def is_multiword(self) -> bool:
        return len(self.parts) > 1

    def __str__(self) -> str:
        return self.surface


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    tag: SemTag

    @property
    def surface(self) -> str:
        return self.token.surface

    def __str__(self) -> str:
        return f"{self.token.surface}/{self.tag.code}"


Item = Union[Token, TaggedToken]


@dataclass(frozen=True)
class Sentence:
    items: Tuple[Item, ...]

    def __post_init__(self):
        if not self.items:
            raise EmptySentence("sentence has no tokens")
        kinds = {isinstance(x, TaggedToken) for x in self.items}
        if len(kinds) > 1:
            raise FormatError("sentence mixes tagged and untagged tokens")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]], tagset: Optional[Tagset] = None) -> "Sentence":
        ts = tagset or default_tagset()
        return cls(tuple(TaggedToken(Token.from_surface(s), ts.parse_tag(t)) for s, t in pairs))

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str]) -> "Sentence":
        return cls(tuple(Token.from_surface(s) for s in surfaces))

    @property
    def is_tagged(self) -> bool:
        return isinstance(self.items[0], TaggedToken)

    @property
    def tokens(self) -> List[Token]:
        return [x.token if isinstance(x, TaggedToken) else x for x in self.items]

    @property
    def surfaces(self) -> List[str]:
        return [t.surface for t in self.tokens]

    @property
    def tags(self) -> List[SemTag]:
        if not self.is_tagged:
            raise FormatError("sentence is not tagged")
        return [x.tag for x in self.items]

    def with_tags(self, tags: Sequence[SemTag]) -> "Sentence":
        if len(tags) != len(self.items):
            raise AlignmentError(f"{len(tags)} tags for {len(self.items)} tokens")
        return Sentence(tuple(TaggedToken(tok, tag) for tok, tag in zip(self.tokens, tags)))

    def strip_tags(self) -> "Sentence":
        return Sentence(tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.items)


@dataclass(frozen=True)
class Corpus:
    sentences: Tuple[Sentence, ...] = ()
    source_id: Optional[str] = None

    def __post_init__(self):
        if self.source_id is None:
            return
        if any(c in self.source_id for c in "\t\r\n"):
            raise FormatError("source id must be a single line without TABs")
        if self.source_id == "" or self.source_id != self.source_id.strip():
            raise FormatError(f"source id {self.source_id!r} must be non-empty without surrounding whitespace")

    @property
    def is_tagged(self) -> bool:
        return all(s.is_tagged for s in self.sentences)

    @property
    def token_total(self) -> int:
        return sum(len(s) for s in self.sentences)

    def strip_tags(self) -> "Corpus":
        return Corpus(tuple(s.strip_tags() for s in self.sentences), self.source_id)

    def with_tags(self, tag_seqs: Sequence[Sequence[SemTag]]) -> "Corpus":
        if len(tag_seqs) != len(self.sentences):
            raise AlignmentError(f"{len(tag_seqs)} tag sequences for {len(self.sentences)} sentences")
        out = []
        for i, (s, tags) in enumerate(zip(self.sentences, tag_seqs)):
            try:
                out.append(s.with_tags(tags))
            except AlignmentError as e:
                raise AlignmentError(e.message, sentence_index=i)
        return Corpus(tuple(out), self.source_id)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


# =========================
# Stream helpers
# =========================

@contextlib.contextmanager
def open_text(path_or_stream: PathOrStream, mode: str = "r") -> Iterator[IO[str]]:
    """Open a path as UTF-8 text (a leading BOM is dropped); `-` means stdin/stdout; streams pass through."""
    if hasattr(path_or_stream, "read") or hasattr(path_or_stream, "write"):
        yield path_or_stream  # type: ignore[misc]
        return
    if str(path_or_stream) == "-":
        yield sys.stdin if "r" in mode else sys.stdout
        return
    encoding = "utf-8-sig" if "r" in mode else "utf-8"
    with open(path_or_stream, mode, encoding=encoding, newline="") as f:
        yield f


def write_text(path: str, text: str):
    """
    Write UTF-8 text all at once: `-` goes to stdout, files are written to a
    temporary sibling and renamed, so a failed run leaves no partial output.
    """
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


# =========================
# Tagged format
# =========================

def _parse_tagged(
    lines: Iterable[str],
    tagset: Tagset,
    upcase_tags: bool,
    problems: Optional[List[SemtagError]] = None,
) -> Tuple[List[Sentence], Optional[str]]:
    """
    Parse tagged-format lines. With `problems` given, violations are collected
    and the offending line skipped; otherwise the first violation is raised.
    """
    sentences: List[Sentence] = []
    current: List[TaggedToken] = []
    source_id: Optional[str] = None

    def fail(err: SemtagError):
        if problems is None:
            raise err
        problems.append(err)

    for line_no, raw in enumerate(lines, start=1):
        line = clean_line(raw, first=line_no == 1)
        if line.strip() == "":
            if current:
                sentences.append(Sentence(tuple(current)))
                current = []
            continue
        if not current and line.startswith("#") and "\t" not in line:
            m = _SOURCE_RE.match(line)
            if m and source_id is None:
                source_id = m.group(1)
            continue

        fields = line.split("\t")
        if len(fields) != 2:
            fail(FormatError(f"expected 2 columns (surface, tag), found {len(fields)}", line_no))
            continue
        surface, code = fields
        try:
            token = Token.from_surface(surface)
        except FormatError as e:
            fail(FormatError(e.message, line_no))
            continue
        code = clean_tag_code(code, upcase=upcase_tags)
        if not tagset.is_tag(code):
            fail(UnknownTag(code, line_no))
            continue
        current.append(TaggedToken(token, tagset.parse_tag(code)))

    if current:
        sentences.append(Sentence(tuple(current)))
    return sentences, source_id


def read_tagged(
    path_or_stream: PathOrStream,
    upcase_tags: bool = False,
    tagset: Optional[Tagset] = None,
) -> Corpus:
    ts = tagset or default_tagset()
    with open_text(path_or_stream) as f:
        sentences, source_id = _parse_tagged(f, ts, upcase_tags)
    LOGGER.debug("read %d tagged sentences", len(sentences))
    return Corpus(tuple(sentences), source_id)


def validate_tagged(
    path_or_stream: PathOrStream,
    upcase_tags: bool = False,
    tagset: Optional[Tagset] = None,
) -> Tuple[List[SemtagError], int]:
    """
    Scan a tagged corpus and collect every line-numbered violation.
    Returns (problems, sentence_count).
    """
    ts = tagset or default_tagset()
    problems: List[SemtagError] = []
    with open_text(path_or_stream) as f:
        sentences, _ = _parse_tagged(f, ts, upcase_tags, problems)
    return problems, len(sentences)


def write_tagged(corpus: Corpus) -> str:
    if not corpus.sentences and corpus.source_id is None:
        return ""
    buf = io.StringIO()
    if corpus.source_id is not None:
        buf.write(f"# source: {corpus.source_id}\n")
    for s in corpus.sentences:
        if not s.is_tagged:
            raise FormatError("cannot write an untagged sentence in tagged format")
        for item in s.items:
            buf.write(f"{item.surface}\t{item.tag.code}\n")
        buf.write("\n")
    return buf.getvalue()


# =========================
# Plain format
# =========================

def read_plain(path_or_stream: PathOrStream) -> Corpus:
    sentences: List[Sentence] = []
    with open_text(path_or_stream) as f:
        for line_no, raw in enumerate(f, start=1):
            line = clean_line(raw, first=line_no == 1).strip()
            if line == "":
                continue
            try:
                sentences.append(Sentence.from_surfaces(line.split(" ")))
            except FormatError as e:
                raise FormatError(e.message, line_no)
    LOGGER.debug("read %d plain sentences", len(sentences))
    return Corpus(tuple(sentences))


def write_plain(corpus: Corpus) -> str:
    return "".join(" ".join(s.surfaces) + "\n" for s in corpus.sentences)
