"""Character n-gram F-score (plain chrF, no word n-grams)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .base import Level, MetricKind, MetricScore, check_parallel


@dataclass(frozen=True)
class ChrfConfig:
    char_order: int = 6
    word_order: int = 0
    beta: float = 2.0
    strip_whitespace: bool = True

    def __post_init__(self):
        if self.char_order < 1:
            raise ValueError("char_order must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.word_order != 0:
            raise ValueError("only plain chrF (word_order=0) is supported")


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def _prepare(text: str, strip_whitespace: bool) -> str:
    return "".join(text.split()) if strip_whitespace else text


def segment_stats(hypothesis: str, reference: str, config: ChrfConfig = ChrfConfig()) -> list[int]:
    """Flat [hyp_count, ref_count, matches] triple per order."""
    hyp = _prepare(hypothesis, config.strip_whitespace)
    ref = _prepare(reference, config.strip_whitespace)
    stats = []
    for n in range(1, config.char_order + 1):
        h = _char_ngrams(hyp, n)
        r = _char_ngrams(ref, n)
        stats.extend((sum(h.values()), sum(r.values()), sum((h & r).values())))
    return stats


def score_from_stats(stats: Sequence[int], config: ChrfConfig = ChrfConfig()) -> float:
    precision = recall = 0.0
    effective = 0
    for n in range(config.char_order):
        hyp_count, ref_count, matches = stats[3 * n : 3 * n + 3]
        if hyp_count > 0 and ref_count > 0:
            precision += matches / hyp_count
            recall += matches / ref_count
            effective += 1
    if effective == 0:
        return 0.0
    precision /= effective
    recall /= effective
    if precision + recall == 0:
        return 0.0
    b2 = config.beta**2
    return 100.0 * (1 + b2) * precision * recall / (b2 * precision + recall)


def _best_reference_stats(hypothesis: str, references: Sequence[str], config: ChrfConfig) -> list[int]:
    best_stats, best_score = None, -1.0
    for ref in references:
        stats = segment_stats(hypothesis, ref, config)
        s = score_from_stats(stats, config)
        if s > best_score:
            best_stats, best_score = stats, s
    return best_stats


def chrf(
    hypotheses: Sequence[str],
    references: Sequence[Sequence[str]],
    config: ChrfConfig = ChrfConfig(),
    level: Level = Level.CORPUS,
) -> MetricScore:
    """chrF on the 0-100 scale.

    With several references, each segment contributes the statistics of
    the reference it scores best against (first one on ties).
    """
    check_parallel(hypotheses, references)
    if level is Level.SENTENCE and len(hypotheses) != 1:
        raise ValueError("sentence-level chrF takes exactly one segment")
    totals = [0] * (3 * config.char_order)
    for hyp, refs in zip(hypotheses, references):
        for i, v in enumerate(_best_reference_stats(hyp, refs, config)):
            totals[i] += v
    return MetricScore(MetricKind.CHRF, score_from_stats(totals, config))


def sentence_chrf(hypothesis: str, references: Sequence[str], config: ChrfConfig = ChrfConfig()) -> MetricScore:
    return chrf([hypothesis], [list(references)], config, Level.SENTENCE)
