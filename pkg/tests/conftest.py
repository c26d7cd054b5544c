import os
import random
from typing import List, Tuple

import pytest

from corpus import Corpus, Sentence, read_tagged
from tagset import all_tags

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
WORKED_EXAMPLES = os.path.join(FIXTURES, "worked_examples.tsv")


def make_corpus(sentences: List[List[Tuple[str, str]]]) -> Corpus:
    return Corpus(tuple(Sentence.from_pairs(pairs) for pairs in sentences))


class SyntheticHmm:
    """A small random HMM over real sem-tags, used to generate tagged corpora."""

    def __init__(self, seed: int, n_tags: int = 10, words_per_tag: int = 6, shared: int = 8):
        rng = random.Random(seed)
        self.rng = rng
        self.tags = [t.code for t in rng.sample(all_tags(), n_tags)]
        self.next_tag = {
            t: self._weights(rng, self.tags + ["<EOS>"]) for t in ["<BOS>"] + self.tags
        }
        # every tag owns a few words; a shared pool makes some words ambiguous
        shared_words = [f"amb{i}" for i in range(shared)]
        self.emit = {}
        for i, t in enumerate(self.tags):
            own = [f"w{i}x{j}" for j in range(words_per_tag)]
            words = own + rng.sample(shared_words, 2)
            self.emit[t] = self._weights(rng, words)

    @staticmethod
    def _weights(rng: random.Random, items):
        ws = [rng.random() + 0.05 for _ in items]
        total = sum(ws)
        return [(x, w / total) for x, w in zip(items, ws)]

    def _draw(self, dist):
        r = self.rng.random()
        acc = 0.0
        for x, p in dist:
            acc += p
            if r <= acc:
                return x
        return dist[-1][0]

    def sentence(self, max_len: int = 12) -> List[Tuple[str, str]]:
        out: List[Tuple[str, str]] = []
        prev = "<BOS>"
        while len(out) < max_len:
            t = self._draw(self.next_tag[prev])
            if t == "<EOS>":
                if out:
                    break
                continue
            out.append((self._draw(self.emit[t]), t))
            prev = t
        return out

    def corpus(self, n: int) -> Corpus:
        return make_corpus([self.sentence() for _ in range(n)])


class StickyHmm(SyntheticHmm):
    """
    Each tag is usually followed by one fixed successor, and every shared
    word is emitted by three tags, so only the neighbours disambiguate it.
    """

    def __init__(self, seed: int, n_tags: int = 10, own_words: int = 4, shared: int = 30,
                 stickiness: float = 0.8, stop: float = 0.1):
        rng = random.Random(seed)
        self.rng = rng
        self.tags = [t.code for t in rng.sample(all_tags(), n_tags)]
        cycle = self.tags[:]
        rng.shuffle(cycle)
        successor = {t: cycle[(i + 1) % n_tags] for i, t in enumerate(cycle)}
        rest = (1.0 - stickiness - stop) / (n_tags - 1)
        self.next_tag = {"<BOS>": [(t, 1.0 / n_tags) for t in self.tags]}
        for t in self.tags:
            self.next_tag[t] = [(u, stickiness if u == successor[t] else rest) for u in self.tags]
            self.next_tag[t].append(("<EOS>", stop))
        words = {t: [f"w{i}x{j}" for j in range(own_words)] for i, t in enumerate(self.tags)}
        for k in range(shared):
            for step in (0, 3, 7):
                words[self.tags[(k + step) % n_tags]].append(f"amb{k}")
        self.emit = {t: self._weights(rng, ws) for t, ws in words.items()}


def ambiguous_type_share(corpus: Corpus) -> float:
    seen = {}
    for s in corpus:
        for item in s.items:
            seen.setdefault(item.surface, set()).add(item.tag.code)
    return sum(len(tags) > 1 for tags in seen.values()) / len(seen)


@pytest.fixture
def example_corpus() -> Corpus:
    return read_tagged(WORKED_EXAMPLES)


@pytest.fixture
def example_path() -> str:
    return WORKED_EXAMPLES


@pytest.fixture
def synthetic():
    return SyntheticHmm(seed=7)
