"""
Tag n-gram and lexical statistics, and deleted-interpolation weights.

Every sentence is padded as BOS BOS t1 ... tn EOS. The unigram table holds
real tags only (its sum is the token total N); BOS and EOS are counted once
per sentence through `sentence_total`. The unigram event space used for
smoothing is tags + EOS, i.e. N + sentence_total events.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from corpus import Corpus
from errors import DegenerateCounts, EmptyCorpus, FormatError
from tagset import Tagset, default_tagset

LOGGER = logging.getLogger(__name__)

BOS = "<BOS>"
EOS = "<EOS>"

Lambdas = Tuple[float, float, float]


def tag_order(code: str, tagset: Optional[Tagset] = None) -> int:
    """Sort key putting BOS first, then tagset order, then EOS."""
    ts = tagset or default_tagset()
    if code == BOS:
        return -1
    if code == EOS:
        return len(ts)
    return ts.index(code)


@dataclass
class NgramCounts:
    unigram: Dict[str, int] = field(default_factory=dict)
    bigram: Dict[Tuple[str, str], int] = field(default_factory=dict)
    trigram: Dict[Tuple[str, str, str], int] = field(default_factory=dict)
    word_tag: Dict[Tuple[str, str], int] = field(default_factory=dict)
    token_total: int = 0
    sentence_total: int = 0

    @property
    def event_total(self) -> int:
        return self.token_total + self.sentence_total

    def unigram_count(self, tag: str) -> int:
        if tag in (BOS, EOS):
            return self.sentence_total
        return self.unigram.get(tag, 0)

    def history_count(self, t1: Optional[str], t2: str) -> int:
        """How often a history occurred, i.e. the denominator of P(.|history)."""
        if t1 is None:
            return self.unigram_count(t2)
        if t1 == BOS and t2 == BOS:
            return self.sentence_total
        return self.bigram.get((t1, t2), 0)

    def tags(self) -> List[str]:
        return sorted(self.unigram, key=tag_order)

    def word_totals(self) -> Dict[str, int]:
        totals: Dict[str, int] = {}
        for (w, _), c in self.word_tag.items():
            totals[w] = totals.get(w, 0) + c
        return totals

    def check(self):
        """Raise DegenerateCounts when the stored tables contradict each other."""
        if sum(self.unigram.values()) != self.token_total:
            raise DegenerateCounts("unigram counts do not sum to the token total")
        for (t1, t2, t3), c in self.trigram.items():
            if c > self.history_count(t1, t2):
                raise DegenerateCounts(f"trigram {(t1, t2, t3)} exceeds its bigram prefix")
            if t2 != BOS and self.history_count(t1, t2) > self.unigram_count(t1):
                raise DegenerateCounts(f"bigram {(t1, t2)} exceeds its unigram prefix")


def collect_counts(corpus: Corpus) -> NgramCounts:
    if not corpus.sentences:
        raise EmptyCorpus("cannot collect counts from an empty corpus")
    if not corpus.is_tagged:
        raise FormatError("training corpus must be tagged")

    uni: Counter = Counter()
    bi: Counter = Counter()
    tri: Counter = Counter()
    wt: Counter = Counter()
    for s in corpus.sentences:
        seq = [BOS, BOS]
        for item in s.items:
            uni[item.tag.code] += 1
            wt[(item.surface, item.tag.code)] += 1
            seq.append(item.tag.code)
        seq.append(EOS)
        for i in range(2, len(seq)):
            bi[(seq[i - 1], seq[i])] += 1
            tri[(seq[i - 2], seq[i - 1], seq[i])] += 1

    counts = NgramCounts(
        unigram=dict(uni),
        bigram=dict(bi),
        trigram=dict(tri),
        word_tag=dict(wt),
        token_total=sum(uni.values()),
        sentence_total=len(corpus.sentences),
    )
    LOGGER.debug("counted %d tokens, %d trigram types", counts.token_total, len(tri))
    return counts


def _ratio(num: int, den: int) -> float:
    # 0/0 := 0
    if den <= 0:
        return 0.0
    return num / den


def estimate_lambdas(counts: NgramCounts) -> Lambdas:
    """
    Deleted interpolation: each trigram votes its count for the order whose
    leave-one-out relative frequency is largest (ties go to the higher order).
    """
    acc = [0, 0, 0]
    key = lambda kv: tuple(tag_order(t) for t in kv[0])
    for (t1, t2, t3), c in sorted(counts.trigram.items(), key=key):
        if c <= 0:
            continue
        r3 = _ratio(c - 1, counts.history_count(t1, t2) - 1)
        r2 = _ratio(counts.bigram.get((t2, t3), 0) - 1, counts.history_count(None, t2) - 1)
        r1 = _ratio(counts.unigram_count(t3) - 1, counts.event_total - 1)
        if r3 >= r2 and r3 >= r1:
            acc[2] += c
        elif r2 >= r1:
            acc[1] += c
        else:
            acc[0] += c
    total = sum(acc)
    if total == 0:
        raise DegenerateCounts("no trigram mass to distribute over the interpolation weights")
    LOGGER.debug("lambda accumulators: %s", acc)
    return (acc[0] / total, acc[1] / total, acc[2] / total)
