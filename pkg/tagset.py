"""
The universal semantic tagset (v0.7): 73 sem-tags grouped into 13 meta-tags.

The tags are compiled in from a checked-in declarative file
(data/tagset_v0.7.tsv, one row per sem-tag) so that corpora and models can be
validated without network access or configuration.

Row format (UTF-8, TAB separated, `#` lines are comments):

    code<TAB>meta<TAB>gloss<TAB>example1|example2|...[<TAB>*]

The optional fifth column marks the tags that are new in v0.7.

Lookups are exact and case-sensitive: "exs" is not "EXS".
"""
from __future__ import annotations

import csv
import logging
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

import pandas as pd

from errors import FormatError, UnknownTag

LOGGER = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
TAGSET_PATH = os.path.join(DATA_DIR, "tagset_v0.7.tsv")
TAGSET_VERSION = "0.7"

TAG_COUNT = 73

# Meta-tags in table order, with their class names.
META_GLOSSES: Dict[str, str] = {
    "ANA": "anaphoric",
    "ACT": "speech act",
    "ATT": "attribute",
    "COM": "comparative",
    "UNE": "unnamed entity",
    "DXS": "deixis",
    "LOG": "logical",
    "MOD": "modality",
    "DSC": "discourse",
    "NAM": "named entity",
    "EVE": "events",
    "TNS": "tense & aspect",
    "TIM": "temporal entity",
}

_CODE_RE = re.compile(r"^[A-Z0-9]{3}$")
_COLUMNS = ["code", "meta", "gloss", "examples", "new"]


@dataclass(frozen=True)
class SemTag:
    code: str
    meta: str
    gloss: str
    examples: Tuple[str, ...] = ()
    is_new: bool = False
    index: int = 0

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class MetaTag:
    code: str
    gloss: str
    members: Tuple[str, ...]

    def __str__(self) -> str:
        return self.code


class Tagset:
    """An immutable, validated tagset. Safe for concurrent reads."""

    def __init__(self, tags: List[SemTag], metas: List[MetaTag], version: str):
        self.version = version
        self._tags = tuple(tags)
        self._metas = tuple(metas)
        self._by_code = {t.code: t for t in self._tags}
        self._meta_by_code = {m.code: m for m in self._metas}
        self._validate()

    # --- construction ---

    @classmethod
    def load(cls, path: str = TAGSET_PATH, version: str = TAGSET_VERSION) -> "Tagset":
        try:
            df = pd.read_csv(
                path,
                sep="\t",
                header=None,
                names=_COLUMNS,
                comment="#",
                dtype=str,
                quoting=csv.QUOTE_NONE,
                keep_default_na=False,
                encoding="utf-8",
            ).fillna("")
        except pd.errors.ParserError as e:
            raise FormatError(f"malformed tagset file {path}: {e}")

        tags: List[SemTag] = []
        members: Dict[str, List[str]] = {}
        for i, row in enumerate(df.itertuples(index=False)):
            code = row.code.strip()
            meta = row.meta.strip()
            if not _CODE_RE.match(code):
                raise FormatError(f"bad sem-tag code {code!r} in {path}")
            if not _CODE_RE.match(meta):
                raise FormatError(f"bad meta-tag code {meta!r} for {code}")
            examples = tuple(x for x in row.examples.split("|") if x)
            tags.append(SemTag(
                code=code,
                meta=meta,
                gloss=row.gloss.strip(),
                examples=examples,
                is_new=row.new.strip() == "*",
                index=i,
            ))
            members.setdefault(meta, []).append(code)

        # meta-tags follow the known table order; unknown ones in file order
        order = [m for m in META_GLOSSES if m in members]
        order += [m for m in members if m not in META_GLOSSES]
        metas = [MetaTag(m, META_GLOSSES.get(m, m.lower()), tuple(members[m])) for m in order]

        # re-index so that all_tags() order (meta order, then row order) matches .index
        ordered = [t for m in metas for t in tags if t.meta == m.code]
        ordered = [SemTag(t.code, t.meta, t.gloss, t.examples, t.is_new, i) for i, t in enumerate(ordered)]
        LOGGER.debug("loaded %d sem-tags from %s", len(ordered), path)
        return cls(ordered, metas, version)

    def _validate(self):
        if len(self._by_code) != len(self._tags):
            raise FormatError("duplicate sem-tag codes in tagset")
        if len(self._tags) != TAG_COUNT:
            raise FormatError(f"expected {TAG_COUNT} sem-tags, found {len(self._tags)}")
        if len(self._metas) != len(META_GLOSSES):
            raise FormatError(f"expected {len(META_GLOSSES)} meta-tags, found {len(self._metas)}")
        seen = set()
        for m in self._metas:
            if not m.members:
                raise FormatError(f"meta-tag {m.code} has no members")
            for code in m.members:
                if code in seen:
                    raise FormatError(f"sem-tag {code} belongs to more than one meta-tag")
                seen.add(code)
        if seen != set(self._by_code):
            raise FormatError("meta-tag members do not cover the tagset")

    # --- lookups ---

    def parse_tag(self, code: str) -> SemTag:
        try:
            return self._by_code[code]
        except (KeyError, TypeError):
            raise UnknownTag(code)

    def is_tag(self, code: str) -> bool:
        return code in self._by_code

    def meta_of(self, tag: SemTag) -> MetaTag:
        return self._meta_by_code[tag.meta]

    def meta_tag(self, code: str) -> MetaTag:
        try:
            return self._meta_by_code[code]
        except KeyError:
            raise UnknownTag(code)

    def all_tags(self) -> List[SemTag]:
        return list(self._tags)

    def meta_tags(self) -> List[MetaTag]:
        return list(self._metas)

    def new_tags(self) -> List[SemTag]:
        return [t for t in self._tags if t.is_new]

    def index(self, code: str) -> int:
        return self.parse_tag(code).index

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            "meta": t.meta,
            "meta_gloss": self._meta_by_code[t.meta].gloss,
            "code": t.code,
            "gloss": t.gloss,
            "examples": ", ".join(x.replace("~", " ") for x in t.examples),
            "new": "*" if t.is_new else "",
        } for t in self._tags])

    def __len__(self) -> int:
        return len(self._tags)

    def __iter__(self):
        return iter(self._tags)

    def __contains__(self, code) -> bool:
        return code in self._by_code


@lru_cache(maxsize=1)
def default_tagset() -> Tagset:
    return Tagset.load()


# --- module-level shortcuts over the bundled v0.7 tagset ---

def parse_tag(code: str) -> SemTag:
    return default_tagset().parse_tag(code)


def meta_of(tag: SemTag) -> MetaTag:
    return default_tagset().meta_of(tag)


def all_tags() -> List[SemTag]:
    return default_tagset().all_tags()


def meta_tags() -> List[MetaTag]:
    return default_tagset().meta_tags()


def new_tags() -> List[SemTag]:
    return default_tagset().new_tags()


def tagset_frame() -> pd.DataFrame:
    return default_tagset().frame()


if __name__ == "__main__":
    ts = default_tagset()
    print(f"Tagset v{ts.version}: {len(ts)} sem-tags, {len(ts.meta_tags())} meta-tags.")
    print(ts.frame().to_string(index=False))
