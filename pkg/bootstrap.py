"""
Self-training: grow a tagged training set from a model's own confident output.

Each iteration trains on the current training set, scores the model on the
held-out corpus, then tags the remaining unlabeled sentences and promotes
the most confident ones (confidence >= threshold, at most promote_cap,
highest first, ties by pool position) into the training set with their
predicted tags. The loop stops after max_iterations, when nothing is
promoted, or when held-out accuracy improved by less than stop_delta.

The returned model is the one with the best held-out accuracy seen
(earliest on ties); iteration 1 is the seed-only model.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from config import BootstrapConfig, TaggerConfig
from corpus import Corpus, Sentence, write_tagged, write_text
from errors import EmptySeed, FormatError
from evaluation import EvalReport, evaluate, render_lines
from taggers.trigram import TrigramModel, tag_corpus, train_trigram

LOGGER = logging.getLogger(__name__)

STOP_MAX_ITERATIONS = "max_iterations"
STOP_NO_PROMOTIONS = "no_promotions"
STOP_SMALL_GAIN = "gain_below_stop_delta"


@dataclass(frozen=True)
class IterationRow:
    iteration: int
    train_sentences: int
    train_tokens: int
    heldout_accuracy: float
    promoted: int
    pool_remaining: int


@dataclass
class BootstrapReport:
    iterations: List[IterationRow] = field(default_factory=list)
    best_iteration: int = 0
    stop_reason: str = ""
    heldout_report: Optional[EvalReport] = None

    @property
    def best_accuracy(self) -> float:
        return self.iterations[self.best_iteration - 1].heldout_accuracy if self.iterations else 0.0

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(r) for r in self.iterations],
                            columns=list(IterationRow.__dataclass_fields__))

    def lines(self) -> List[str]:
        """Held-out report of the returned model plus one row per iteration value."""
        out = render_lines(self.heldout_report) if self.heldout_report is not None else []
        for r in self.iterations:
            key = f"iter{r.iteration}"
            out += [
                f"train_sentences\t{key}\t{r.train_sentences}",
                f"train_tokens\t{key}\t{r.train_tokens}",
                f"heldout_accuracy\t{key}\t{r.heldout_accuracy:.6f}",
                f"promoted\t{key}\t{r.promoted}",
                f"pool_remaining\t{key}\t{r.pool_remaining}",
            ]
        out += [
            f"best_iteration\tall\t{self.best_iteration}",
            f"stop_reason\tall\t{self.stop_reason}",
        ]
        return out

    def text(self) -> str:
        df = self.frame()
        return (
            df.to_string(index=False, float_format=lambda x: f"{x:.4f}")
            + f"\n\nbest iteration: {self.best_iteration} "
              f"(held-out accuracy {self.best_accuracy:.4f}), stopped: {self.stop_reason}\n"
        )


def _margin_confidence(paths: Sequence[Tuple[float, List[str]]], length: int) -> float:
    if not paths:
        return 0.0
    if len(paths) == 1:
        return 1.0
    margin = paths[0][0] - paths[1][0]
    if margin <= 0.0:
        return 0.0
    return min(1.0, max(0.0, 1.0 - math.exp(-margin / length)))


def sentence_confidence(model: TrigramModel, sentence: Sentence) -> float:
    """
    1 - exp(-(best - second best) / length) over joint path log-scores.
    1.0 when only one path survives, 0.0 on a tie or when no path does.
    """
    return _margin_confidence(model.lattice(sentence.surfaces, k=2), len(sentence))


def _score_pool(model: TrigramModel, pool: Sequence[Sentence], workers: int) -> List[Tuple[float, Optional[Sentence]]]:
    def one(s: Sentence):
        paths = model.lattice(s.surfaces, k=2)
        if not paths:
            return 0.0, None
        tags = [model.tagset.parse_tag(c) for c in paths[0][1]]
        return _margin_confidence(paths, len(s)), s.with_tags(tags)

    if workers <= 1 or len(pool) <= 1:
        return [one(s) for s in pool]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(one, pool))


def _heldout_accuracy(model: TrigramModel, heldout: Corpus, workers: int) -> Tuple[float, Optional[EvalReport]]:
    if not heldout.sentences:
        return 0.0, None
    report = evaluate(heldout, tag_corpus(model, heldout.strip_tags(), workers))
    return report.accuracy, report


def bootstrap(
    seed: Corpus,
    unlabeled: Corpus,
    heldout: Corpus,
    cfg: Optional[BootstrapConfig] = None,
    tagger_config: Optional[TaggerConfig] = None,
    dump_dir: Optional[str] = None,
) -> Tuple[TrigramModel, BootstrapReport]:
    cfg = cfg or BootstrapConfig()
    tcfg = tagger_config or TaggerConfig()
    if not seed.sentences:
        raise EmptySeed("bootstrapping needs a non-empty tagged seed corpus")
    if not seed.is_tagged or not heldout.is_tagged:
        raise FormatError("seed and held-out corpora must be tagged")
    if not heldout.sentences:
        LOGGER.warning("empty held-out corpus: every iteration scores 0 and the seed-only model is kept")
    if dump_dir:
        os.makedirs(dump_dir, exist_ok=True)

    training: List[Sentence] = list(seed.sentences)
    pool: List[Sentence] = list(unlabeled.strip_tags().sentences) if unlabeled.sentences else []
    report = BootstrapReport(stop_reason=STOP_MAX_ITERATIONS)
    best_model: Optional[TrigramModel] = None
    prev_accuracy: Optional[float] = None

    for it in range(1, cfg.max_iterations + 1):
        train_corpus = Corpus(tuple(training))
        model = train_trigram(train_corpus, tcfg)
        accuracy, heldout_report = _heldout_accuracy(model, heldout, tcfg.workers)
        if best_model is None or accuracy > report.best_accuracy:
            best_model = model
            report.best_iteration = it
            report.heldout_report = heldout_report

        def row(promoted: int) -> IterationRow:
            return IterationRow(it, len(train_corpus), train_corpus.token_total, accuracy, promoted, len(pool))

        if prev_accuracy is not None and accuracy - prev_accuracy < cfg.stop_delta:
            report.iterations.append(row(0))
            report.stop_reason = STOP_SMALL_GAIN
            LOGGER.info("iteration %d: held-out gain %.4f below %.4f, stopping",
                        it, accuracy - prev_accuracy, cfg.stop_delta)
            break
        prev_accuracy = accuracy

        scored = _score_pool(model, pool, tcfg.workers)
        candidates = [
            (conf, i) for i, (conf, tagged) in enumerate(scored)
            if tagged is not None and conf >= cfg.confidence_threshold
        ]
        candidates.sort(key=lambda x: (-x[0], x[1]))
        chosen = [i for _, i in candidates[:cfg.promote_cap]]
        promoted = [scored[i][1] for i in chosen]
        taken = set(chosen)
        pool = [s for i, s in enumerate(pool) if i not in taken]
        training.extend(promoted)
        report.iterations.append(row(len(promoted)))
        LOGGER.info("iteration %d: %d training sentences, held-out accuracy %.4f, promoted %d, %d left in pool",
                    it, len(train_corpus), accuracy, len(promoted), len(pool))

        if dump_dir:
            path = os.path.join(dump_dir, f"promoted-{it:02d}.tsv")
            write_text(path, write_tagged(Corpus(tuple(promoted))))

        if not promoted:
            report.stop_reason = STOP_NO_PROMOTIONS
            break

    return best_model, report
