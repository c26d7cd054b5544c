"""
Suffix-based tag distributions for unknown words.

Rare training words (frequency <= rare_threshold) contribute their tag counts
to every suffix of their last part, from the empty suffix up to
max_suffix_len characters. Capitalized and uncapitalized words feed separate
tables. Distributions are smoothed by successive abstraction:

    P(t | s_i) = (P^(t | s_i) + theta * P(t | s_{i-1})) / (1 + theta)

where s_{i-1} drops the first character of s_i and theta is the standard
deviation of the unconditional tag probabilities.
"""
from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field
from typing import Dict, Optional

from cleaning import is_capitalized, suffix_source
from taggers.counts import NgramCounts, tag_order

LOGGER = logging.getLogger(__name__)

SuffixTable = Dict[str, Dict[str, int]]
Distribution = Dict[str, float]


def estimate_theta(counts: NgramCounts) -> float:
    tags = counts.tags()
    if len(tags) < 2 or counts.token_total == 0:
        return 0.0
    probs = [counts.unigram[t] / counts.token_total for t in tags]
    return statistics.stdev(probs)


def _smooth(table: SuffixTable, theta: float) -> Dict[str, Distribution]:
    probs: Dict[str, Distribution] = {}
    for suffix in sorted(table, key=lambda s: (len(s), s)):
        row = table[suffix]
        total = sum(row.values())
        ml = {t: c / total for t, c in row.items()} if total else {}
        if suffix == "":
            dist = ml
        else:
            parent = probs.get(suffix[1:], {})
            dist = {}
            for t in sorted(set(ml) | set(parent), key=tag_order):
                dist[t] = (ml.get(t, 0.0) + theta * parent.get(t, 0.0)) / (1.0 + theta)
        probs[suffix] = dist
    return probs


@dataclass
class SuffixModel:
    max_suffix_len: int = 10
    theta: float = 0.0
    lower: SuffixTable = field(default_factory=dict)
    upper: SuffixTable = field(default_factory=dict)

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        self._lower_probs = _smooth(self.lower, self.theta)
        self._upper_probs = _smooth(self.upper, self.theta)

    @classmethod
    def train(cls, counts: NgramCounts, max_suffix_len: int = 10, rare_threshold: int = 10) -> "SuffixModel":
        totals = counts.word_totals()
        lower: SuffixTable = {}
        upper: SuffixTable = {}
        for (word, tag), c in sorted(counts.word_tag.items()):
            if totals[word] > rare_threshold:
                continue
            table = upper if is_capitalized(word) else lower
            src = suffix_source(word)
            for n in range(0, min(max_suffix_len, len(src)) + 1):
                suffix = src[len(src) - n:]
                row = table.setdefault(suffix, {})
                row[tag] = row.get(tag, 0) + c
        model = cls(max_suffix_len, estimate_theta(counts), lower, upper)
        LOGGER.debug(
            "suffix model: %d lower / %d upper suffixes, theta=%.6f",
            len(lower), len(upper), model.theta,
        )
        return model

    def distribution(self, suffix: str, capitalized: bool) -> Optional[Distribution]:
        probs = self._upper_probs if capitalized else self._lower_probs
        return probs.get(suffix)

    def suffixes(self, capitalized: bool):
        return sorted(self._upper_probs if capitalized else self._lower_probs)

    def tag_probs(self, surface: str) -> Distribution:
        """P(t | longest stored suffix of the surface)."""
        capitalized = is_capitalized(surface)
        probs = self._upper_probs if capitalized else self._lower_probs
        if not probs.get(""):
            # no rare words of this shape: borrow the other variant
            probs = self._lower_probs if capitalized else self._upper_probs
        src = suffix_source(surface)
        for n in range(min(self.max_suffix_len, len(src)), -1, -1):
            dist = probs.get(src[len(src) - n:])
            if dist is not None:
                return dist
        return {}
