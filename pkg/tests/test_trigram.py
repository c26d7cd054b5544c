import itertools
import logging
import math
import random

import pytest

from config import TaggerConfig
from conftest import make_corpus
from corpus import Corpus, Sentence
from model_io import dumps_model
from tagset import all_tags, parse_tag
from taggers.counts import BOS, EOS
from taggers.trigram import (
    emission_logprob, kbest_decode, tag_corpus, train_trigram, transition_logprob, viterbi_decode,
)

EXACT = TaggerConfig(beam_width=0)


def brute_force(model, surfaces):
    """Every finite-score path, best first."""
    options = [[t for t, _ in model.emission_candidates(w)] for w in surfaces]
    scored = []
    for path in itertools.product(*options):
        score = model.path_logprob(surfaces, path)
        if score != -math.inf:
            scored.append(score)
    return sorted(scored, reverse=True)


def random_toy_corpus(rng: random.Random):
    tags = [t.code for t in rng.sample(all_tags(), rng.randint(2, 6))]
    vocab = [f"w{i}" for i in range(8)]
    lexicon = {w: rng.sample(tags, rng.randint(1, min(3, len(tags)))) for w in vocab}
    sentences = []
    for _ in range(rng.randint(3, 8)):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 5))]
        sentences.append([(w, rng.choice(lexicon[w])) for w in words])
    return make_corpus(sentences), vocab


class TestTransitions:
    def test_seen_histories_normalize(self, example_corpus):
        model = train_trigram(example_corpus, EXACT)
        outcomes = model.counts.tags() + [EOS]
        histories = [(BOS, BOS)] + [h for h in model.counts.bigram if h[1] != EOS]
        for t1, t2 in histories:
            total = sum(math.exp(model.transition(t1, t2, t3)) for t3 in outcomes)
            assert total == pytest.approx(1.0, abs=1e-9), (t1, t2)

    def test_nothing_transitions_into_bos(self, example_corpus):
        model = train_trigram(example_corpus)
        assert model.transition(BOS, BOS, BOS) == -math.inf

    def test_public_wrappers_take_tags(self, example_corpus):
        model = train_trigram(example_corpus)
        que = parse_tag("QUE")
        assert transition_logprob(model, BOS, BOS, que) == model.transition(BOS, BOS, "QUE")
        # QUE tags "How" and "?"
        assert emission_logprob(model, "How", que) == pytest.approx(math.log(1 / 2))
        assert emission_logprob(model, "How", parse_tag("CON")) == -math.inf


class TestEmissions:
    def test_known_word_relative_frequency(self, example_corpus):
        model = train_trigram(example_corpus)
        # REL: at, to
        assert emission_logprob(model, "to", "REL") == pytest.approx(math.log(1 / 2))
        assert emission_logprob(model, "to", "SUB") == pytest.approx(0.0)
        assert {t for t, _ in model.emission_candidates("to")} == {"REL", "SUB"}

    def test_unknown_s_word_scores_ens_highest(self):
        words = [
            ("runs", "ENS"), ("eats", "ENS"), ("sleeps", "ENS"), ("barks", "ENS"), ("sits", "ENS"),
            ("dogs", "CON"), ("quickly", "IST"), ("slowly", "IST"), ("gently", "IST"), ("the", "DEF"),
            ("a", "DIS"), ("ran", "EPS"), ("ate", "EPS"), ("slept", "EPS"), ("cat", "CON"),
            ("tree", "CON"), ("park", "CON"), ("bone", "CON"), ("ball", "CON"), ("home", "CON"),
        ]
        model = train_trigram(make_corpus([words[i:i + 5] for i in range(0, 20, 5)]))
        assert not model.is_known("walks")
        cands = model.emission_candidates("walks")
        assert max(cands, key=lambda te: te[1])[0] == "ENS"


class TestDecoding:
    def test_closed_world_reproduces_gold(self, example_corpus):
        model = train_trigram(example_corpus, EXACT)
        he_himself = example_corpus.sentences[3]
        assert viterbi_decode(model, he_himself.strip_tags()) == he_himself.tags

    def test_worked_sentences_match_exhaustive_search(self, example_corpus):
        model = train_trigram(example_corpus, EXACT)
        for s in example_corpus:
            best = brute_force(model, s.surfaces)[0]
            decoded = [t.code for t in viterbi_decode(model, s.strip_tags())]
            assert model.path_logprob(s.surfaces, decoded) == pytest.approx(best, abs=1e-9)

    def test_exact_search_matches_oracle_on_toy_corpora(self):
        rng = random.Random(1234)
        for _ in range(1000):
            corpus, vocab = random_toy_corpus(rng)
            model = train_trigram(corpus, EXACT)
            surfaces = [rng.choice(vocab + ["zzz"]) for _ in range(rng.randint(1, 5))]
            ranked = brute_force(model, surfaces)
            paths = model.lattice(surfaces, k=3)
            if not ranked:
                assert paths == []
                continue
            assert [p[0] for p in paths] == pytest.approx(ranked[:3], abs=1e-9)
            assert model.path_logprob(surfaces, paths[0][1]) == pytest.approx(ranked[0], abs=1e-9)

    def test_kbest_is_sorted_and_distinct(self, example_corpus):
        model = train_trigram(example_corpus, EXACT)
        sentence = Sentence.from_surfaces(["the", "dog", "went", "to", "Oslo", "."])
        paths = kbest_decode(model, sentence, k=5)
        scores = [s for s, _ in paths]
        assert scores == sorted(scores, reverse=True)
        assert len({tuple(t.code for t in p) for _, p in paths}) == len(paths)

    def test_equal_scores_follow_tagset_order_left_to_right(self):
        # the two paths mirror each other, so they score exactly the same
        model = train_trigram(make_corpus([
            [("a", "DIS"), ("b", "NIL"), ("c", "CLO")],
            [("a", "AND"), ("b", "NIL"), ("c", "PRO")],
        ]), EXACT)
        surfaces = ["a", "b", "c"]
        first, second = model.lattice(surfaces, k=2)
        assert first[0] == second[0]
        # DIS precedes AND, although PRO precedes CLO
        assert first[1] == ["DIS", "NIL", "CLO"]
        assert second[1] == ["AND", "NIL", "PRO"]
        assert [t.code for t in viterbi_decode(model, Sentence.from_surfaces(surfaces))] == ["DIS", "NIL", "CLO"]

    def test_fallback_when_no_path_survives(self, caplog):
        # trigram-only weights: an unseen tag order has probability zero
        model = train_trigram(make_corpus([[("a", "DIS"), ("dog", "CON"), ("barks", "ENS")]] * 5))
        assert model.lambdas == (0.0, 0.0, 1.0)
        with caplog.at_level(logging.WARNING):
            tags = viterbi_decode(model, Sentence.from_surfaces(["dog", "a"]))
        assert [t.code for t in tags] == ["CON", "DIS"]
        assert "falling back" in caplog.text

    def test_output_length_and_determinism(self, synthetic):
        train, test = synthetic.corpus(300), synthetic.corpus(40)
        a = train_trigram(train)
        b = train_trigram(train)
        assert dumps_model(a) == dumps_model(b)
        tagged_a = tag_corpus(a, test.strip_tags())
        tagged_b = tag_corpus(b, test.strip_tags(), workers=4)
        assert tagged_a == tagged_b
        assert [len(s) for s in tagged_a] == [len(s) for s in test]

    def test_beam_wider_than_state_space_is_exact(self, synthetic):
        train = synthetic.corpus(300)
        exact = train_trigram(train, EXACT)
        wide = exact.with_config(beam_width=500)
        greedy = exact.with_config(beam_width=1)
        for s in synthetic.corpus(20):
            assert viterbi_decode(wide, s.strip_tags()) == viterbi_decode(exact, s.strip_tags())
            assert len(viterbi_decode(greedy, s.strip_tags())) == len(s)

    def test_empty_corpus_tags_to_empty(self, example_corpus):
        model = train_trigram(example_corpus)
        assert tag_corpus(model, Corpus()) == Corpus()
