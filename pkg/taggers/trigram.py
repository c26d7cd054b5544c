"""
Trigram hidden-Markov sem-tagger.

Transitions interpolate unigram, bigram and trigram relative frequencies
with deleted-interpolation weights; emissions are relative frequencies
P(w|t) for known words and suffix-model estimates for unknown ones.
Decoding is a (k-best) Viterbi search over (t_{i-1}, t_i) states in log
space, optionally pruned to `beam_width` states per position.

A trained model is never mutated apart from its memo tables, so one model
can decode many sentences concurrently.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

from config import TaggerConfig
from corpus import Corpus, Sentence
from errors import DegenerateCounts
from tagset import SemTag, Tagset, default_tagset
from taggers.counts import BOS, EOS, Lambdas, NgramCounts, collect_counts, estimate_lambdas
from taggers.suffix import SuffixModel

LOGGER = logging.getLogger(__name__)

NEG_INF = float("-inf")

State = Tuple[str, str]
TagLike = Union[SemTag, str]


def _code(tag: TagLike) -> str:
    return tag.code if isinstance(tag, SemTag) else tag


@dataclass
class TrigramModel:
    counts: NgramCounts
    lambdas: Lambdas
    suffix_model: SuffixModel
    config: TaggerConfig = field(default_factory=TaggerConfig)
    tagset: Tagset = field(default_factory=default_tagset, repr=False, compare=False)

    def __post_init__(self):
        if any(x < 0 for x in self.lambdas) or abs(sum(self.lambdas) - 1.0) > 1e-12:
            raise DegenerateCounts(f"interpolation weights must be non-negative and sum to 1: {self.lambdas}")
        self._order: Dict[str, int] = {t.code: t.index for t in self.tagset}
        self._order[BOS] = -1
        self._order[EOS] = len(self.tagset)
        self._codes: Dict[int, str] = {i: c for c, i in self._order.items()}
        self._lexicon: Dict[str, Dict[str, int]] = {}
        for (w, t), c in self.counts.word_tag.items():
            self._lexicon.setdefault(w, {})[t] = c
        self._transitions: Dict[Tuple[str, str, str], float] = {}
        self._emissions: Dict[str, List[Tuple[str, float]]] = {}
        tags = self.counts.tags()
        self.default_tag = max(tags, key=lambda t: (self.counts.unigram[t], -self._order[t])) if tags else None

    @property
    def beam_width(self) -> int:
        return self.config.beam_width

    def with_config(self, **updates) -> "TrigramModel":
        return replace(self, config=self.config.model_copy(update=updates))

    def is_known(self, surface: str) -> bool:
        return surface in self._lexicon

    def _state_key(self, state: State) -> Tuple[int, int]:
        return (self._order[state[0]], self._order[state[1]])

    # --- probabilities ---

    def transition(self, t1: str, t2: str, t3: str) -> float:
        key = (t1, t2, t3)
        cached = self._transitions.get(key)
        if cached is not None:
            return cached
        c = self.counts
        l1, l2, l3 = self.lambdas
        if t3 == BOS:
            p1 = p2 = p3 = 0.0
        else:
            p1 = c.unigram_count(t3) / c.event_total if c.event_total else 0.0
            h2 = c.history_count(None, t2)
            p2 = c.bigram.get((t2, t3), 0) / h2 if h2 else 0.0
            h3 = c.history_count(t1, t2)
            p3 = c.trigram.get((t1, t2, t3), 0) / h3 if h3 else 0.0
        p = l1 * p1 + l2 * p2 + l3 * p3
        lp = math.log(p) if p > 0.0 else NEG_INF
        self._transitions[key] = lp
        return lp

    def emission(self, surface: str, tag: str) -> float:
        c = self.counts
        row = self._lexicon.get(surface)
        if row is not None:
            f = row.get(tag, 0)
            ft = c.unigram.get(tag, 0)
            return math.log(f / ft) if f > 0 and ft > 0 else NEG_INF
        # unknown word: P(w|t) ~ P(t|suffix) / P(t)
        p = self.suffix_model.tag_probs(surface).get(tag, 0.0)
        pt = c.unigram.get(tag, 0) / c.token_total if c.token_total else 0.0
        return math.log(p / pt) if p > 0.0 and pt > 0.0 else NEG_INF

    def emission_candidates(self, surface: str) -> List[Tuple[str, float]]:
        """Tags with finite emission score for the surface, in tagset order."""
        cached = self._emissions.get(surface)
        if cached is not None:
            return cached
        row = self._lexicon.get(surface)
        pool = row if row is not None else self.suffix_model.tag_probs(surface)
        out = []
        for t in sorted(pool, key=self._order.__getitem__):
            e = self.emission(surface, t)
            if e != NEG_INF:
                out.append((t, e))
        self._emissions[surface] = out
        return out

    # --- decoding ---

    def lattice(self, surfaces: Sequence[str], k: int = 1) -> List[Tuple[float, List[str]]]:
        """
        k best tag paths (score, codes), best first. Per-state lists keep the
        k best partial paths; beam pruning keeps the `beam_width` best states.
        Equal scores go to the path that comes first in tagset order, read
        left to right. Empty when every path scores -inf.
        """
        # entries are (score, tag indices so far)
        layer: Dict[State, List[Tuple[float, Tuple[int, ...]]]] = {(BOS, BOS): [(0.0, ())]}
        beam = self.beam_width

        def entry_key(x):
            return (-x[0], x[1])

        for surface in surfaces:
            cands = self.emission_candidates(surface)
            nxt: Dict[State, List[Tuple[float, Tuple[int, ...]]]] = {}
            for state in sorted(layer, key=self._state_key):
                t1, t2 = state
                entries = layer[state]
                for t3, e in cands:
                    tr = self.transition(t1, t2, t3)
                    if tr == NEG_INF:
                        continue
                    bucket = nxt.setdefault((t2, t3), [])
                    idx = self._order[t3]
                    for score, path in entries:
                        bucket.append((score + tr + e, path + (idx,)))
            if not nxt:
                return []
            for bucket in nxt.values():
                bucket.sort(key=entry_key)
                del bucket[k:]
            if beam and len(nxt) > beam:
                kept = sorted(nxt, key=lambda s: entry_key(nxt[s][0]))[:beam]
                nxt = {s: nxt[s] for s in kept}
            layer = nxt

        finals: List[Tuple[float, Tuple[int, ...]]] = []
        for state in sorted(layer, key=self._state_key):
            tr = self.transition(state[0], state[1], EOS)
            if tr == NEG_INF:
                continue
            for score, path in layer[state]:
                finals.append((score + tr, path))
        finals.sort(key=entry_key)
        return [(score, [self._codes[i] for i in path]) for score, path in finals[:k]]

    def fallback(self, surfaces: Sequence[str]) -> List[str]:
        out = []
        for s in surfaces:
            cands = self.emission_candidates(s)
            if cands:
                out.append(max(cands, key=lambda te: (te[1], -self._order[te[0]]))[0])
            else:
                out.append(self.default_tag)
        return out

    def path_logprob(self, surfaces: Sequence[str], codes: Sequence[str]) -> float:
        """Joint log score of one tag path, summed in decoding order."""
        score = 0.0
        t1, t2 = BOS, BOS
        for s, t3 in zip(surfaces, codes):
            score = score + self.transition(t1, t2, t3) + self.emission(s, t3)
            t1, t2 = t2, t3
        return score + self.transition(t1, t2, EOS)


# =========================
# Public operations
# =========================

def train_trigram(corpus: Corpus, config: Optional[TaggerConfig] = None, tagset: Optional[Tagset] = None) -> TrigramModel:
    cfg = config or TaggerConfig()
    counts = collect_counts(corpus)
    lambdas = estimate_lambdas(counts)
    suffix_model = SuffixModel.train(counts, cfg.max_suffix_len, cfg.rare_threshold)
    LOGGER.info(
        "trained trigram model on %d sentences / %d tokens, lambdas=(%.4f, %.4f, %.4f)",
        counts.sentence_total, counts.token_total, *lambdas,
    )
    return TrigramModel(counts, lambdas, suffix_model, cfg, tagset or default_tagset())


def transition_logprob(model: TrigramModel, t1: TagLike, t2: TagLike, t3: TagLike) -> float:
    return model.transition(_code(t1), _code(t2), _code(t3))


def emission_logprob(model: TrigramModel, surface: str, tag: TagLike) -> float:
    return model.emission(surface, _code(tag))


def viterbi_decode(model: TrigramModel, sentence: Sentence) -> List[SemTag]:
    surfaces = sentence.surfaces
    paths = model.lattice(surfaces, k=1)
    if paths:
        codes = paths[0][1]
    else:
        LOGGER.warning("no finite-score path for %r; falling back to per-token emission", " ".join(surfaces))
        codes = model.fallback(surfaces)
    return [model.tagset.parse_tag(c) for c in codes]


def kbest_decode(model: TrigramModel, sentence: Sentence, k: int = 2) -> List[Tuple[float, List[SemTag]]]:
    return [
        (score, [model.tagset.parse_tag(c) for c in codes])
        for score, codes in model.lattice(sentence.surfaces, k=k)
    ]


def tag_corpus(model: TrigramModel, corpus: Corpus, workers: Optional[int] = None) -> Corpus:
    """Decode every sentence; parallel workers merge back in corpus order."""
    n = workers or model.config.workers
    if n <= 1 or len(corpus) <= 1:
        tag_seqs = [viterbi_decode(model, s) for s in corpus.sentences]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            tag_seqs = list(ex.map(lambda s: viterbi_decode(model, s), corpus.sentences))
    return corpus.strip_tags().with_tags(tag_seqs) if corpus.sentences else corpus
