"""
Scoring taggers against gold corpora.

Every token counts, punctuation included, and a multiword token is one unit.
Reports are plain data; `report_frame`/`confusion_frame` give pandas views
and `render_text`/`render_lines` serialize them.
"""
from __future__ import annotations

import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from corpus import Corpus
from errors import AlignmentError, IncomparableReports
from tagset import MetaTag, SemTag, Tagset, default_tagset

LOGGER = logging.getLogger(__name__)

TagSeqs = Sequence[Sequence[SemTag]]


@dataclass(frozen=True)
class TagScore:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False


@dataclass(frozen=True)
class EvalReport:
    token_total: int
    correct: int
    accuracy: float
    per_tag: Dict[SemTag, TagScore]
    confusion: Counter
    per_meta_accuracy: Dict[MetaTag, float]
    meta_accuracy: float
    # token-level hits in corpus order, for pairing two reports
    correct_mask: Tuple[bool, ...] = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class ComparisonSummary:
    accuracy_a: float
    accuracy_b: float
    accuracy_delta: float
    f1_delta: Dict[SemTag, float]
    both_right: int
    only_a: int
    only_b: int
    both_wrong: int


def _safe_div(num: float, den: float) -> Tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def _tag_seqs(predicted: Union[Corpus, TagSeqs]) -> List[List[SemTag]]:
    if isinstance(predicted, Corpus):
        return [s.tags for s in predicted.sentences]
    return [list(seq) for seq in predicted]


def evaluate(gold: Corpus, predicted: Union[Corpus, TagSeqs], tagset: Optional[Tagset] = None) -> EvalReport:
    ts = tagset or default_tagset()
    pred_seqs = _tag_seqs(predicted)
    if len(pred_seqs) != len(gold.sentences):
        raise AlignmentError(
            f"{len(pred_seqs)} predicted sentences for {len(gold.sentences)} gold sentences",
            sentence_index=min(len(pred_seqs), len(gold.sentences)),
        )

    confusion: Counter = Counter()
    mask: List[bool] = []
    for i, (g, p) in enumerate(zip(gold.sentences, pred_seqs)):
        if len(p) != len(g):
            raise AlignmentError(f"{len(p)} predicted tags for {len(g)} gold tokens", sentence_index=i)
        for gt, pt in zip(g.tags, p):
            confusion[(gt, pt)] += 1
            mask.append(gt == pt)

    token_total = len(mask)
    correct = sum(mask)
    if token_total == 0:
        LOGGER.warning("empty gold corpus; accuracy reported as 0")
    accuracy, _ = _safe_div(correct, token_total)

    gold_totals: Counter = Counter()
    pred_totals: Counter = Counter()
    for (gt, pt), n in confusion.items():
        gold_totals[gt] += n
        pred_totals[pt] += n

    per_tag: Dict[SemTag, TagScore] = {}
    for tag in sorted(set(gold_totals) | set(pred_totals), key=lambda t: t.index):
        hits = confusion.get((tag, tag), 0)
        precision, p_degenerate = _safe_div(hits, pred_totals[tag])
        recall, r_degenerate = _safe_div(hits, gold_totals[tag])
        f1, f_degenerate = _safe_div(2 * precision * recall, precision + recall)
        per_tag[tag] = TagScore(precision, recall, f1, gold_totals[tag], p_degenerate or r_degenerate or f_degenerate)

    meta_hits: Counter = Counter()
    meta_totals: Counter = Counter()
    for (gt, pt), n in confusion.items():
        meta = ts.meta_of(gt)
        meta_totals[meta] += n
        if gt.meta == pt.meta:
            meta_hits[meta] += n
    per_meta = {m: meta_hits[m] / meta_totals[m] for m in ts.meta_tags() if meta_totals[m]}
    meta_accuracy, _ = _safe_div(sum(meta_hits.values()), token_total)

    report = EvalReport(
        token_total=token_total,
        correct=correct,
        accuracy=accuracy,
        per_tag=per_tag,
        confusion=confusion,
        per_meta_accuracy=per_meta,
        meta_accuracy=meta_accuracy,
        correct_mask=tuple(mask),
    )
    LOGGER.info("evaluated %d tokens: accuracy %.4f", token_total, accuracy)
    return report


def compare(a: EvalReport, b: EvalReport) -> ComparisonSummary:
    if a.token_total != b.token_total:
        raise IncomparableReports(
            f"reports cover different token totals ({a.token_total} vs {b.token_total})"
        )
    if not len(a.correct_mask) == len(b.correct_mask) == a.token_total:
        raise IncomparableReports("reports carry no token-level results to pair")
    both_right = only_a = only_b = both_wrong = 0
    for x, y in zip(a.correct_mask, b.correct_mask):
        if x and y:
            both_right += 1
        elif x:
            only_a += 1
        elif y:
            only_b += 1
        else:
            both_wrong += 1

    tags = sorted(set(a.per_tag) | set(b.per_tag), key=lambda t: t.index)
    zero = TagScore(0.0, 0.0, 0.0, 0)
    f1_delta = {t: a.per_tag.get(t, zero).f1 - b.per_tag.get(t, zero).f1 for t in tags}
    return ComparisonSummary(
        accuracy_a=a.accuracy,
        accuracy_b=b.accuracy,
        accuracy_delta=a.accuracy - b.accuracy,
        f1_delta=f1_delta,
        both_right=both_right,
        only_a=only_a,
        only_b=only_b,
        both_wrong=both_wrong,
    )


def most_confused(report: EvalReport, n: int = 10) -> List[Tuple[SemTag, SemTag, int]]:
    pairs = [(g, p, c) for (g, p), c in report.confusion.items() if g != p]
    pairs.sort(key=lambda x: (-x[2], x[0].index, x[1].index))
    return pairs[:n]


# =========================
# Tables
# =========================

def report_frame(report: EvalReport) -> pd.DataFrame:
    rows = [{
        "tag": t.code,
        "meta": t.meta,
        "precision": s.precision,
        "recall": s.recall,
        "f1": s.f1,
        "support": s.support,
        "degenerate": s.degenerate,
    } for t, s in report.per_tag.items()]
    return pd.DataFrame(rows, columns=["tag", "meta", "precision", "recall", "f1", "support", "degenerate"])


def confusion_frame(report: EvalReport) -> pd.DataFrame:
    """Gold tags as rows, predicted tags as columns, in tagset order."""
    tags = list(report.per_tag)
    codes = [t.code for t in tags]
    df = pd.DataFrame(0, index=codes, columns=codes, dtype=int)
    for (g, p), n in report.confusion.items():
        df.loc[g.code, p.code] = n
    df.index.name = "gold"
    df.columns.name = "predicted"
    return df


def _num(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return f"{x:.6f}"


def render_lines(report: EvalReport, comparison: Optional[ComparisonSummary] = None) -> List[str]:
    """Machine-readable `metric<TAB>key<TAB>value` rows."""
    rows: List[Tuple[str, str, object]] = [
        ("tokens", "all", report.token_total),
        ("correct", "all", report.correct),
        ("accuracy", "all", report.accuracy),
        ("meta_accuracy", "all", report.meta_accuracy),
    ]
    for t, s in report.per_tag.items():
        rows += [
            ("precision", t.code, s.precision),
            ("recall", t.code, s.recall),
            ("f1", t.code, s.f1),
            ("support", t.code, s.support),
        ]
        if s.degenerate:
            rows.append(("degenerate", t.code, True))
    for m, acc in report.per_meta_accuracy.items():
        rows.append(("meta_accuracy", m.code, acc))
    for (g, p), n in sorted(report.confusion.items(), key=lambda kv: (kv[0][0].index, kv[0][1].index)):
        rows.append(("confusion", f"{g.code}>{p.code}", n))
    if comparison is not None:
        rows += [
            ("accuracy_delta", "all", comparison.accuracy_delta),
            ("both_right", "all", comparison.both_right),
            ("only_a", "all", comparison.only_a),
            ("only_b", "all", comparison.only_b),
            ("both_wrong", "all", comparison.both_wrong),
        ]
        rows += [("f1_delta", t.code, d) for t, d in comparison.f1_delta.items()]
    return [f"{metric}\t{key}\t{_num(value)}" for metric, key, value in rows]


def render_text(report: EvalReport, comparison: Optional[ComparisonSummary] = None, top_confusions: int = 10) -> str:
    buf = io.StringIO()
    w = buf.write
    w(f"Tokens:        {report.token_total}\n")
    w(f"Correct:       {report.correct}\n")
    w(f"Accuracy:      {report.accuracy:.2%}\n")
    w(f"Meta accuracy: {report.meta_accuracy:.2%}\n\n")

    df = report_frame(report)
    if not df.empty:
        df["degenerate"] = df["degenerate"].map({True: "*", False: ""})
        w(df.to_string(index=False, float_format=lambda x: f"{x:.4f}"))
        w("\n")
        if (df["degenerate"] == "*").any():
            w("(* precision, recall or F1 had an empty denominator and is reported as 0)\n")
        w("\n")

    if report.per_meta_accuracy:
        w("Per meta-tag accuracy:\n")
        for m, acc in report.per_meta_accuracy.items():
            w(f"  {m.code}  {m.gloss:<16} {acc:.4f}\n")
        w("\n")

    confused = most_confused(report, top_confusions)
    if confused:
        w("Most confused (gold -> predicted):\n")
        for g, p, n in confused:
            w(f"  {g.code} -> {p.code}  {n}\n")
        w("\n")

    if comparison is not None:
        w("Comparison (a - b):\n")
        w(f"  accuracy a: {comparison.accuracy_a:.4f}  b: {comparison.accuracy_b:.4f}  "
          f"delta: {comparison.accuracy_delta:+.4f}\n")
        w(f"  both right: {comparison.both_right}  only a: {comparison.only_a}  "
          f"only b: {comparison.only_b}  both wrong: {comparison.both_wrong}\n")
    return buf.getvalue()
