from .baseline import BaselineModel, tag_baseline, tag_corpus_baseline, train_baseline
from .trigram import TrigramModel, tag_corpus, train_trigram, viterbi_decode

# name -> (train(corpus) -> model, tag_corpus(model, corpus) -> tagged corpus)
TAGGERS = {
    "trigram": (train_trigram, tag_corpus),
    "baseline": (train_baseline, tag_corpus_baseline),
}
