"""BLEU with sacreBLEU-compatible defaults (13a, mixed case, exponential smoothing)."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .base import Level, MetricKind, MetricScore, check_parallel
from .tokenize import tokenize_13a


class Smoothing(enum.Enum):
    EXPONENTIAL = "exp"
    NONE = "none"


@dataclass(frozen=True)
class BleuConfig:
    max_order: int = 4
    tokenizer: str = "13a"
    smoothing: Smoothing = Smoothing.EXPONENTIAL
    case: str = "mixed"

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.tokenizer != "13a":
            raise ValueError(f"unsupported tokenizer {self.tokenizer!r}")
        if self.case != "mixed":
            raise ValueError(f"unsupported case setting {self.case!r}")
        if isinstance(self.smoothing, str):
            object.__setattr__(self, "smoothing", Smoothing(self.smoothing))

    @property
    def signature(self) -> str:
        return f"BLEU|#:1|c:mixed|e:no|tok:13a|s:{self.smoothing.value}|n:{self.max_order}"


@dataclass
class BleuStats:
    """Sufficient statistics; corpus BLEU sums these over segments."""

    max_order: int
    correct: list[int] = field(default_factory=list)
    total: list[int] = field(default_factory=list)
    sys_len: int = 0
    ref_len: int = 0

    def __post_init__(self):
        if not self.correct:
            self.correct = [0] * self.max_order
            self.total = [0] * self.max_order

    def __iadd__(self, other: "BleuStats") -> "BleuStats":
        for n in range(self.max_order):
            self.correct[n] += other.correct[n]
            self.total[n] += other.total[n]
        self.sys_len += other.sys_len
        self.ref_len += other.ref_len
        return self


def _ngrams(tokens: Sequence[str], max_order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def _closest_ref_len(hyp_len: int, ref_lens: Sequence[int]) -> int:
    # ties go to the shorter reference
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def segment_stats(hypothesis: str, references: Sequence[str], max_order: int = 4) -> BleuStats:
    hyp = tokenize_13a(hypothesis)
    refs = [tokenize_13a(r) for r in references]
    max_ref_counts: Counter = Counter()
    for ref in refs:
        for ngram, count in _ngrams(ref, max_order).items():
            if count > max_ref_counts[ngram]:
                max_ref_counts[ngram] = count
    stats = BleuStats(max_order)
    for ngram, count in _ngrams(hyp, max_order).items():
        n = len(ngram) - 1
        stats.total[n] += count
        stats.correct[n] += min(count, max_ref_counts.get(ngram, 0))
    stats.sys_len = len(hyp)
    stats.ref_len = _closest_ref_len(len(hyp), [len(r) for r in refs])
    return stats


def score_from_stats(stats: BleuStats, smoothing: Smoothing = Smoothing.EXPONENTIAL) -> float:
    if stats.sys_len == 0:
        return 0.0
    log_sum = 0.0
    smooth_factor = 1.0
    for n in range(stats.max_order):
        total = stats.total[n]
        if total == 0:
            # hypothesis shorter than this order: precision undefined, BLEU is 0
            return 0.0
        correct = stats.correct[n]
        if correct == 0:
            if smoothing is Smoothing.NONE:
                return 0.0
            smooth_factor *= 2.0
            precision = 1.0 / (smooth_factor * total)
        else:
            precision = correct / total
        log_sum += math.log(precision)
    if stats.sys_len < stats.ref_len:
        brevity = math.exp(1.0 - stats.ref_len / stats.sys_len)
    else:
        brevity = 1.0
    return 100.0 * brevity * math.exp(log_sum / stats.max_order)


def corpus_stats(
    hypotheses: Sequence[str], references: Sequence[Sequence[str]], max_order: int = 4
) -> BleuStats:
    check_parallel(hypotheses, references)
    stats = BleuStats(max_order)
    for hyp, refs in zip(hypotheses, references):
        stats += segment_stats(hyp, refs, max_order)
    return stats


def bleu(
    hypotheses: Sequence[str],
    references: Sequence[Sequence[str]],
    config: BleuConfig = BleuConfig(),
    level: Level = Level.CORPUS,
) -> MetricScore:
    """BLEU on the 0-100 scale.

    ``references[i]`` holds every reference for ``hypotheses[i]``. At
    sentence level exactly one segment is expected.
    """
    check_parallel(hypotheses, references)
    if level is Level.SENTENCE and len(hypotheses) != 1:
        raise ValueError("sentence-level BLEU takes exactly one segment")
    stats = corpus_stats(hypotheses, references, config.max_order)
    return MetricScore(MetricKind.BLEU, score_from_stats(stats, config.smoothing))


def sentence_bleu(hypothesis: str, references: Sequence[str], config: BleuConfig = BleuConfig()) -> MetricScore:
    return bleu([hypothesis], [list(references)], config, Level.SENTENCE)
