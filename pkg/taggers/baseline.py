"""Most-frequent-tag-per-word baseline."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence, Union

from corpus import Corpus, Sentence
from errors import EmptyCorpus, FormatError
from tagset import SemTag

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineModel:
    best_tag: Dict[str, SemTag]
    global_default: SemTag


def _most_frequent(counter: Counter) -> SemTag:
    # ties: earlier in the tagset wins
    return max(counter, key=lambda t: (counter[t], -t.index))


def train_baseline(corpus: Corpus) -> BaselineModel:
    if not corpus.sentences:
        raise EmptyCorpus("cannot train a baseline on an empty corpus")
    if not corpus.is_tagged:
        raise FormatError("training corpus must be tagged")
    per_word: Dict[str, Counter] = {}
    overall: Counter = Counter()
    for s in corpus.sentences:
        for item in s.items:
            per_word.setdefault(item.surface, Counter())[item.tag] += 1
            overall[item.tag] += 1
    model = BaselineModel(
        best_tag={w: _most_frequent(c) for w, c in sorted(per_word.items())},
        global_default=_most_frequent(overall),
    )
    LOGGER.info("baseline: %d word types, default tag %s", len(model.best_tag), model.global_default.code)
    return model


def tag_baseline(model: BaselineModel, sentence: Union[Sentence, Sequence[str]]) -> List[SemTag]:
    surfaces = sentence.surfaces if isinstance(sentence, Sentence) else list(sentence)
    return [model.best_tag.get(w, model.global_default) for w in surfaces]


def tag_corpus_baseline(model: BaselineModel, corpus: Corpus) -> Corpus:
    if not corpus.sentences:
        return corpus
    return corpus.strip_tags().with_tags([tag_baseline(model, s) for s in corpus.sentences])
